"""Plot-ready CSV tables in place of rendered figures."""
import numpy as np

from .errors import InvalidArgument
from .fileio import csv_text
from .graphcore import WeightedDigraph

KINDS = ("ccdf", "degree-hist", "shock-rounds", "convergence")


def emit_plot_data(kind, data, labels=None):
    """Headered CSV text for one of the supported plot kinds.

    Parameters
    ----------
    kind : {'ccdf', 'degree-hist', 'shock-rounds', 'convergence'}
    data :
        ``ccdf``: positive samples.  ``degree-hist``: a graph or a degree
        distribution indexed by ``k``.  ``shock-rounds``: array of shape
        ``(k+1, n)``.  ``convergence``: a sequence, or a dict of equally
        long named sequences.
    labels : sequence of str, optional
        Column names for ``shock-rounds``.
    """
    if kind == "ccdf":
        x = np.asarray(data, dtype=float).ravel()
        if x.size and np.any(x <= 0):
            raise InvalidArgument("ccdf needs positive samples")
        xs = np.sort(x)
        G = (xs.size - np.arange(xs.size)) / max(xs.size, 1)
        return csv_text(["log_x", "log_ccdf"], zip(np.log(xs), np.log(G)))
    if kind == "degree-hist":
        if isinstance(data, WeightedDigraph):
            from .randnet import degree_distribution
            data = degree_distribution(data)
        p = np.asarray(data, dtype=float)
        if p.ndim != 1:
            raise InvalidArgument("degree-hist needs a 1-D distribution")
        return csv_text(["k", "fraction"], ((k, v) for k, v in enumerate(p)))
    if kind == "shock-rounds":
        R = np.asarray(data, dtype=float)
        if R.ndim != 2:
            raise InvalidArgument("shock-rounds needs a (rounds, sectors) array")
        names = list(labels) if labels is not None else [f"sector_{j}" for j in range(R.shape[1])]
        if len(names) != R.shape[1]:
            raise InvalidArgument("label count does not match sector count")
        return csv_text(names, R.tolist())
    if kind == "convergence":
        series = data if isinstance(data, dict) else {"value": data}
        cols = {k: np.asarray(v, dtype=float).ravel() for k, v in series.items()}
        lengths = {v.size for v in cols.values()}
        if len(lengths) > 1:
            raise InvalidArgument("convergence series must share one length")
        T = lengths.pop() if lengths else 0
        return csv_text(["t", *cols], ([t, *(v[t] for v in cols.values())] for t in range(T)))
    raise InvalidArgument(f"unknown plot kind {kind!r}", allowed=list(KINDS))
