"""File formats: graph/flow/IO-table/LP JSON records and plain matrix CSV.

Numbers are written with 17 significant digits so that output files are
byte-for-byte reproducible and round-trip exactly.
"""
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import EconNetError, InvalidArgument
from .graphcore import WeightedDigraph, from_adjacency


class InputError(EconNetError):
    code = "input_error"


def fmt_number(x):
    """17-significant-digit text for a real; integers stay integers."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0:
        return "0"
    return format(x, ".17g")


def _json_text(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, float, np.integer, np.floating)):
        s = fmt_number(obj)
        return "null" if s in ("NaN", "Infinity", "-Infinity") else s
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_text(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_json_text(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _json_text(v, indent, level + 1) for v in obj) \
            + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON text with 17-significant-digit numbers and a trailing newline."""
    return _json_text(obj, indent, 0) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    if header:
        buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(fmt_number(v) if not isinstance(v, str) else v for v in r) + "\n")
    return buf.getvalue()


def sha256_bytes(data):
    return hashlib.sha256(data).hexdigest()


def read_bytes(path):
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path=str(path)) from exc


def load_json(path):
    try:
        return json.loads(read_bytes(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path} is not valid JSON: {exc}", path=str(path)) from exc


def load_matrix_csv(path):
    """Plain comma-separated rows without a header."""
    text = read_bytes(path).decode("utf-8")
    try:
        A = np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2)
    except ValueError as exc:
        raise InputError(f"{path} is not a numeric CSV matrix: {exc}", path=str(path)) from exc
    return A


def load_graph(path):
    """Graph JSON or adjacency-matrix CSV, chosen by file extension."""
    if str(path).endswith(".json"):
        rec = load_json(path)
        if isinstance(rec, dict) and "edges" in rec:
            return WeightedDigraph.from_dict(rec)
        if isinstance(rec, dict) and "A" in rec:
            return from_adjacency(rec["A"], rec.get("labels"))
        raise InputError("graph JSON needs 'n' and 'edges' (or 'A')", path=str(path))
    return from_adjacency(load_matrix_csv(path))


def load_square(path):
    """Square matrix from CSV, from a JSON ``{"A": ...}`` record, or a graph JSON."""
    if str(path).endswith(".json"):
        rec = load_json(path)
        if isinstance(rec, list):
            return np.asarray(rec, dtype=float)
        for key in ("A", "P", "T", "matrix"):
            if key in rec:
                return np.asarray(rec[key], dtype=float)
        if "edges" in rec:
            from .graphcore import adjacency
            return adjacency(WeightedDigraph.from_dict(rec))
        raise InputError("no matrix found in JSON", path=str(path))
    return load_matrix_csv(path)


def save_graph(g, path):
    Path(path).write_text(dumps(g.to_dict()))


def parse_vector(text):
    """Comma-separated numbers, a JSON list, or a path to either."""
    if text is None:
        return None
    p = Path(text)
    if p.exists():
        text = p.read_text()
    text = text.strip()
    try:
        if text.startswith("["):
            return np.asarray(json.loads(text), dtype=float)
        return np.asarray([float(t) for t in text.replace("\n", ",").split(",") if t.strip()])
    except ValueError as exc:
        raise InvalidArgument(f"cannot parse vector {text[:40]!r}") from exc
