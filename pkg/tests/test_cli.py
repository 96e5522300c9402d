import json
import os
import subprocess
import sys

import numpy as np
import pytest

from econnet import fileio
from econnet.cli import main
from econnet.errors import InvalidArgument
from econnet.plotdata import emit_plot_data
from econnet.randnet import pareto_sample

from _data import (CREDIT, HUB_AUTH, MCF_EDGES, SHIPPING_EDGES, TRUST_A, TRUST_B)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_json(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


@pytest.fixture
def hub_graph(tmp_path):
    return write_json(tmp_path, "graph.json", {"A": HUB_AUTH.tolist()})


class TestBasics:
    def test_help(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0 and "usage" in out.lower()

    def test_subcommand_help(self, capsys):
        assert run(capsys, "centrality", "katz", "--help")[0] == 0

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "centrality", "katz", "--bogus", "x.json")
        assert code == 2
        assert json.loads(err.strip().splitlines()[-1])["code"] == "usage"

    def test_unknown_command(self, capsys):
        assert run(capsys, "teleport")[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "spectral", "radius", tmp_path / "nope.csv")
        assert code == 1
        rec = json.loads(err.strip().splitlines()[-1])
        assert set(rec) == {"code", "message", "context"}


class TestCentralityCommand:
    def test_katz_csv(self, capsys, hub_graph):
        code, out, _ = run(capsys, "centrality", "katz", "--beta", 1, "--mode", "hub",
                           "--format", "csv", hub_graph)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "vertex,label,value"
        assert [float(l.split(",")[2]) for l in lines[1:]] == pytest.approx([5, 4, 5, 1])

    def test_katz_authority_json(self, capsys, hub_graph):
        code, out, _ = run(capsys, "centrality", "katz", "--mode", "authority", hub_graph)
        assert json.loads(out)["values"] == pytest.approx([1, 6, 4, 4])

    def test_attenuation_error(self, capsys, tmp_path):
        p = write_json(tmp_path, "g.json", {"A": [[0, 1], [1, 0]]})
        code, _, err = run(capsys, "centrality", "katz", p)
        assert code == 1
        rec = json.loads(err.strip())
        assert rec["code"] == "attenuation"
        assert rec["context"]["limit"] == pytest.approx(1.0)

    def test_global_flags_either_side(self, capsys, hub_graph):
        a = run(capsys, "--format", "csv", "centrality", "katz", hub_graph)[1]
        b = run(capsys, "centrality", "katz", "--format", "csv", hub_graph)[1]
        assert a == b and a.startswith("vertex")

    def test_config_defaults_and_precedence(self, capsys, tmp_path, hub_graph):
        cfg = write_json(tmp_path, "cfg.json", {"mode": "authority"})
        out = run(capsys, "--config", cfg, "centrality", "katz", hub_graph)[1]
        assert json.loads(out)["values"] == pytest.approx([1, 6, 4, 4])
        out = run(capsys, "--config", cfg, "centrality", "katz", "--mode", "hub", hub_graph)[1]
        assert json.loads(out)["values"] == pytest.approx([5, 4, 5, 1])


class TestDeterminism:
    def test_manifest_and_bytes(self, capsys, tmp_path):
        outs = []
        for k in range(2):
            d = tmp_path / f"run{k}"
            assert run(capsys, "randnet", "ba", "--n", 50, "--m", 2, "--seed", 7,
                       "--out", d)[0] == 0
            outs.append(((d / "result.json").read_bytes(), (d / "manifest.json").read_bytes()))
        assert outs[0] == outs[1]
        man = json.loads(outs[0][1])
        assert man["seed"] == 7 and man["command"] == "randnet ba"
        assert man["output_digest"] == fileio.sha256_bytes(outs[0][0])
        assert set(man) >= {"command", "input_digest", "seed", "params", "version"}

    def test_input_digest(self, capsys, tmp_path, hub_graph):
        run(capsys, "centrality", "katz", "--out", tmp_path / "o", hub_graph)
        man = json.loads((tmp_path / "o" / "manifest.json").read_text())
        assert man["input_digest"] == fileio.sha256_bytes(hub_graph.read_bytes())

    def test_seed_required(self, capsys):
        assert run(capsys, "randnet", "er", "--n", 5, "--p", 0.5)[0] == 2

    def test_number_format(self):
        assert fileio.fmt_number(0.1) == "0.10000000000000001"
        assert fileio.fmt_number(np.int64(3)) == "3"
        assert float(fileio.fmt_number(1 / 3)) == 1 / 3


class TestModuleCommands:
    def test_spath(self, capsys, tmp_path):
        p = write_json(tmp_path, "ship.json", {"n": 7, "edges": SHIPPING_EDGES, "destination": 6})
        rec = json.loads(run(capsys, "flow", "spath", p)[1])
        assert rec["cost_to_go"] == [8, 10, 3, 5, 4, 1, 0]
        assert rec["iterations"] == 3

    def test_mincost_and_reduction(self, capsys, tmp_path):
        net = {"n": 4, "edges": MCF_EDGES, "supply": [10, 0, 0, 0], "demand": [0, 0, 0, 10]}
        p = write_json(tmp_path, "mcf.json", net)
        rec = json.loads(run(capsys, "flow", "mincost", p)[1])
        assert rec["flow"] == pytest.approx([10, 0, 10, 10])
        net["capacity"] = [[0, 1, 5]]
        p = write_json(tmp_path, "mcf2.json", net)
        rec = json.loads(run(capsys, "flow", "mincost", p)[1])
        assert rec["flow"] == pytest.approx([5, 5, 5, 5])
        rec = json.loads(run(capsys, "flow", "reduce-ot", p)[1])
        assert rec["total_cost"] == pytest.approx(30)

    def test_ot(self, capsys):
        rec = json.loads(run(capsys, "ot", "solve", "--phi", "0.5,0.5", "--psi", "1,0",
                             "--cost", "[[1,1],[1,1]]")[1])
        assert rec["plan"] == [[0.5, 0], [0.5, 0]]
        assert rec["equilibrium"] is True

    def test_lp(self, capsys, tmp_path):
        p = write_json(tmp_path, "lp.json", {"c": [3, 4], "sense": "max",
                                             "A_ub": [[2, 5], [4, 2]], "b_ub": [30, 20]})
        rec = json.loads(run(capsys, "lp", "solve", p)[1])
        assert rec["x"] == pytest.approx([2.5, 5.0])
        assert rec["objective"] == pytest.approx(27.5)

    def test_markov_and_degroot(self, capsys, tmp_path):
        p = write_json(tmp_path, "T.json", {"P": TRUST_B.tolist()})
        rec = json.loads(run(capsys, "markov", "stationary", p)[1])
        assert np.round(rec["stationary"], 2).tolist() == [0.56, 0.15, 0.07, 0.22]
        pa = write_json(tmp_path, "Ta.json", {"T": TRUST_A.tolist()})
        rec = json.loads(run(capsys, "degroot", "consensus", "--beliefs", "0.9,0.1,0.2,0.3",
                             pa)[1])
        assert rec["beliefs"] == pytest.approx([0.9] * 4, abs=1e-7)
        code, out, _ = run(capsys, "markov", "simulate", "--T", 20, "--seed", 3,
                           "--format", "csv", p)
        assert code == 0 and len(out.strip().splitlines()) == 22

    def test_markov_nonunique(self, capsys, tmp_path):
        p = write_json(tmp_path, "I.json", {"P": np.eye(3).tolist()})
        code, _, err = run(capsys, "markov", "stationary", p)
        assert code == 1
        assert json.loads(err)["context"]["sink_classes"] == 3

    def test_io(self, capsys, tmp_path):
        t = {"sectors": ["a", "b"], "Z": [[1, 2], [3, 1]], "x": [10, 10], "d": [7, 6]}
        p = write_json(tmp_path, "io.json", t)
        mu = json.loads(run(capsys, "io", "multipliers", p)[1])["multipliers"]
        A = np.array(t["Z"]) / 10
        assert mu == pytest.approx(np.linalg.solve(np.eye(2) - A.T, np.ones(2)))
        code, out, _ = run(capsys, "io", "shocks", "--rounds", 4, "--format", "csv", p)
        lines = out.strip().splitlines()
        assert lines[0] == "a,b" and len(lines) == 6

    def test_fin(self, capsys, tmp_path):
        p = write_json(tmp_path, "bank.json", {"W": [[0, 1], [1, 0]], "assets": [0, 0],
                                               "liabilities": [0, 0]})
        rec = json.loads(run(capsys, "fin", "clear", "--from", "both", p)[1])
        assert rec["least"] == [0, 0] and rec["greatest"] == [1, 1]
        assert json.loads(run(capsys, "fin", "certify", p)[1])["certificate"] == "None"
        q = write_json(tmp_path, "ch.json", {"C": [[0, 0.4], [0.4, 0]], "e": [0.5, 1],
                                             "beta": 1, "theta": 0.85, "e_ref": [1, 1]})
        assert json.loads(run(capsys, "fin", "cascade", q)[1])["waves"] == [1, 2]

    def test_graph(self, capsys, tmp_path):
        np.savetxt(tmp_path / "credit.csv", CREDIT, delimiter=",")
        rec = json.loads(run(capsys, "graph", "info", tmp_path / "credit.csv")[1])
        assert rec["strongly_connected"] and rec["n"] == 5
        rec = json.loads(run(capsys, "graph", "degrees", "--direction", "in",
                             tmp_path / "credit.csv")[1])
        assert rec["degrees"] == [2, 2, 2, 2, 1]

    def test_spectral(self, capsys, tmp_path):
        np.savetxt(tmp_path / "a.csv", np.array([[0.5, 0.2], [0.1, 0.4]]), delimiter=",")
        rec = json.loads(run(capsys, "spectral", "radius", tmp_path / "a.csv")[1])
        assert rec["spectral_radius"] == pytest.approx(0.6)

    def test_herfindahl_record(self, capsys):
        rec = json.loads(run(capsys, "randnet", "herfindahl-mc", "--n", 1000, "--reps", 5,
                             "--alpha", 1.32, "--seed", 1)[1])
        assert set(rec) == {"median", "replications", "params"}


class TestPlotData:
    def test_ccdf(self):
        text = emit_plot_data("ccdf", pareto_sample(1.0, 1.5, 0, 100))
        lines = text.strip().splitlines()
        assert lines[0] == "log_x,log_ccdf" and len(lines) == 101
        assert float(lines[1].split(",")[1]) == 0.0

    def test_empty(self):
        assert emit_plot_data("ccdf", []) == "log_x,log_ccdf\n"

    def test_shock_rounds_shape(self):
        text = emit_plot_data("shock-rounds", np.ones((6, 3)))
        lines = text.strip().splitlines()
        assert lines[0] == "sector_0,sector_1,sector_2" and len(lines) == 7

    def test_schema_errors(self):
        with pytest.raises(InvalidArgument):
            emit_plot_data("shock-rounds", np.ones(3))
        with pytest.raises(InvalidArgument):
            emit_plot_data("convergence", {"a": [1, 2], "b": [1]})
        with pytest.raises(InvalidArgument):
            emit_plot_data("pie", [1])

    def test_convergence(self):
        text = emit_plot_data("convergence", {"d": [1.0, 0.5]})
        assert text == "t,d\n0,1\n1,0.5\n"


def test_module_entry_point_and_threads(tmp_path):
    env = dict(os.environ, ECONNET_THREADS="1")
    r = subprocess.run([sys.executable, "-m", "econnet", "--version"], capture_output=True,
                       text=True, env=env)
    assert r.returncode == 0 and "econnet" in r.stdout
    r = subprocess.run([sys.executable, "-c",
                        "import econnet.cli, os; print(os.environ['OPENBLAS_NUM_THREADS'])"],
                       capture_output=True, text=True,
                       env={k: v for k, v in env.items() if k != "OPENBLAS_NUM_THREADS"})
    assert r.stdout.strip() == "1"
