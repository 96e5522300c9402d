"""Command line front end.

Usage: ``econnet <command> <action> [options] FILE``.  Results go to
standard output, or with ``--out DIR`` to ``DIR/result.{json,csv}`` next
to a ``manifest.json``.  Exit status is 0 on success, 1 on domain errors
and 2 on usage errors; every error also prints a JSON record
``{code, message, context}`` on standard error.

``ECONNET_THREADS`` caps BLAS threads when set before NumPy is loaded.
"""
import os
import sys

_threads = os.environ.get("ECONNET_THREADS")
if _threads and _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse  # noqa: E402
import json  # noqa: E402
from pathlib import Path  # noqa: E402

import numpy as np  # noqa: E402

from . import __version__  # noqa: E402
from . import (centrality, finance, flows, graphcore, lp, markov, production,  # noqa: E402
               randnet, spectral)
from .errors import EconNetError, InvalidArgument  # noqa: E402
from .fileio import (csv_text, dumps, load_graph, load_json, load_square, parse_vector,  # noqa: E402
                     read_bytes, sha256_bytes)
from .plotdata import emit_plot_data  # noqa: E402


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class Output:
    """Result payload: a JSON-able dict plus an optional CSV table."""

    def __init__(self, record, table=None, csv=None):
        self.record = record
        self.table = table          # (header, rows)
        self.csv = csv              # ready-made CSV text

    def render(self, fmt):
        if fmt == "csv":
            if self.csv is not None:
                return self.csv
            if self.table is not None:
                return csv_text(*self.table)
            raise InvalidArgument("this command has no CSV form; use --format json")
        return dumps(self.record)


def _vertex_table(values, labels):
    rows = [(i, labels[i] if labels else str(i), v) for i, v in enumerate(values)]
    return ["vertex", "label", "value"], rows


# ------------------------------------------------------------------ handlers

def cmd_graph(a):
    g = load_graph(a.file)
    if a.action == "info":
        return Output({"n": g.n, "edges": len(g.edges),
                       "strongly_connected": graphcore.is_strongly_connected(g),
                       "period": graphcore.period(g),
                       "aperiodic": graphcore.is_aperiodic(g),
                       "primitive": graphcore.is_strongly_connected(g) and graphcore.is_aperiodic(g),
                       "dag": graphcore.is_dag(g)})
    if a.action == "scc":
        comps = graphcore.strongly_connected_components(g)
        rows = [(v, k) for k, c in enumerate(comps) for v in c]
        return Output({"components": comps}, (["vertex", "component"], sorted(rows)))
    if a.action == "degrees":
        d = graphcore.degrees(g, a.direction, a.weighted)
        return Output({"direction": a.direction, "weighted": a.weighted, "degrees": d},
                      _vertex_table(d, g.labels))
    if a.action == "accessible":
        return Output({"from": a.source, "to": a.target,
                       "accessible": graphcore.is_accessible(g, a.source, a.target)})
    if a.action == "degree-hist":
        p = randnet.degree_distribution(g, a.direction_hist)
        return Output({"distribution": p}, csv=emit_plot_data("degree-hist", p))
    raise UsageError(f"unknown graph action {a.action}")


def cmd_spectral(a):
    A = load_square(a.file)
    if a.action == "radius":
        return Output({"spectral_radius": spectral.spectral_radius(A)})
    if a.action == "bounds":
        lo, hi = spectral.spectral_radius_bounds(A)
        return Output({"lower": lo, "upper": hi})
    if a.action == "eigenpair":
        p = spectral.dominant_eigenpair(A, a.tol, a.max_iter)
        return Output({"radius": p.radius, "right": p.right, "left": p.left},
                      (["index", "right", "left"],
                       [(i, r, l) for i, (r, l) in enumerate(zip(p.right, p.left))]))
    if a.action == "gelfand":
        seq = spectral.gelfand_estimate(A, a.norm, a.k)
        return Output({"norm": a.norm, "estimates": seq},
                      csv=emit_plot_data("convergence", {"estimate": seq}))
    if a.action == "norm":
        return Output({"kind": a.kind, "norm": spectral.matrix_norm(A, a.kind)})
    if a.action == "neumann":
        L = spectral.neumann_inverse(A, a.tol)
        return Output({"inverse": L}, (None, L.tolist()))
    raise UsageError(f"unknown spectral action {a.action}")


def cmd_centrality(a):
    g = load_graph(a.file)
    A = graphcore.adjacency(g)
    if a.binarize:
        A = graphcore.binarize(A)
    if a.action == "degree":
        c = centrality.degree_centrality(g, a.mode, a.weighted)
    elif a.action == "eigenvector":
        c = centrality.eigenvector_centrality(A, a.mode, a.m)
    elif a.action == "katz":
        c = centrality.katz_centrality(A, a.beta, a.mode)
    elif a.action == "betweenness":
        c = centrality.betweenness_centrality(g, a.weighted)
    elif a.action == "pagerank":
        c = centrality.pagerank(A, a.delta)
    else:
        raise UsageError(f"unknown centrality action {a.action}")
    return Output({"measure": c.measure, "mode": c.mode, "values": c.values},
                  _vertex_table(c.values, g.labels))


def cmd_randnet(a):
    if a.action == "er":
        g = randnet.erdos_renyi(a.n, a.p, a.seed)
        return Output(g.to_dict())
    if a.action == "ba":
        g = randnet.barabasi_albert(a.n, a.m, a.seed)
        return Output(g.to_dict())
    if a.action == "herfindahl-mc":
        params = {"alpha": a.alpha} if a.sampler == "pareto" else {"mu": a.mu, "sigma": a.sigma}
        med = randnet.herfindahl_median_mc(a.sampler, a.n, a.reps, a.seed, **params)
        return Output({"median": med, "replications": a.reps,
                       "params": {"sampler": a.sampler, "n": a.n, "seed": a.seed, **params}})
    if a.action == "ccdf":
        x = randnet.pareto_sample(a.xbar, a.alpha, a.seed, a.n)
        fit = randnet.empirical_ccdf_loglog(x, a.tail_fraction)
        return Output({"slope": fit.slope, "intercept": fit.intercept,
                       "r_squared": fit.r_squared, "tail_fraction": fit.tail_fraction},
                      csv=emit_plot_data("ccdf", x))
    raise UsageError(f"unknown randnet action {a.action}")


def _stochastic(path):
    return markov.as_stochastic(load_square(path), tol=1e-8, renormalize=True)


def cmd_markov(a):
    P = _stochastic(a.file)
    n = P.shape[0]
    if a.action == "stationary":
        psi = markov.stationary_distribution(P)
        return Output({"stationary": psi}, (["state", "probability"], list(enumerate(psi))))
    if a.action == "simulate":
        psi0 = parse_vector(a.init) if a.init else np.full(n, 1.0 / n)
        path = markov.simulate_chain(P, psi0, a.T, a.seed)
        return Output({"path": path}, (["t", "state"], list(enumerate(path.tolist()))))
    if a.action == "dobrushin":
        return Output({"k": a.k, "alpha": markov.dobrushin_coefficient(P, a.k)})
    if a.action == "ergodic":
        return Output({"ergodic": markov.is_ergodic(P)})
    if a.action == "convergence":
        psi = parse_vector(a.init) if a.init else np.eye(n)[0]
        star = markov.stationary_distribution(P)
        dist, bound = [], []
        for t in range(a.t + 1):
            dist.append(markov.l1_distance(markov.update_marginal(psi, P, t), star))
            bound.append(markov.stability_bound(P, a.k, t))
        series = {"distance": dist, "bound": bound}
        return Output(series, csv=emit_plot_data("convergence", series))
    raise UsageError(f"unknown markov action {a.action}")


def cmd_degroot(a):
    T = _stochastic(a.file)
    b0 = parse_vector(a.beliefs)
    if a.action == "run":
        b = markov.degroot(T, b0, a.steps)
        return Output({"steps": a.steps, "beliefs": b}, (["agent", "belief"], list(enumerate(b))))
    if a.action == "consensus":
        b, t = markov.degroot_consensus(T, b0, a.tol)
        return Output({"beliefs": b, "steps": t}, (["agent", "belief"], list(enumerate(b))))
    raise UsageError(f"unknown degroot action {a.action}")


def cmd_io(a):
    t = production.IOTable.from_dict(load_json(a.file))
    coef = production.io_coefficients(t)
    A = coef.A
    labels = [t.sectors[i] for i in coef.kept] if t.sectors else [str(i) for i in coef.kept]
    table = lambda v: (["sector", "label", "value"],  # noqa: E731
                       [(int(k), lab, x) for k, lab, x in zip(coef.kept, labels, v)])
    if a.action == "leontief":
        L = production.leontief_inverse(A)
        rec = {"A": A, "L": L}
        if t.d is not None:
            rec["output"] = production.equilibrium_output(A, t.d[coef.kept])
        return Output(rec, (labels, L.tolist()))
    if a.action == "shocks":
        dd = parse_vector(a.shock) if a.shock else (t.d[coef.kept] if t.d is not None
                                                    else np.ones(A.shape[0]))
        R = production.shock_rounds(A, dd, a.rounds)
        return Output({"rounds": R}, csv=emit_plot_data("shock-rounds", R, labels))
    if a.action == "multipliers":
        mu = production.output_multipliers(A)
        return Output({"multipliers": mu}, table(mu))
    if a.action == "upstreamness":
        u = production.upstreamness(production.ghosh_matrix(t))
        return Output({"upstreamness": u}, table(u))
    if a.action == "domar":
        h = production.domar_weights(A)
        return Output({"domar": h, "volatility": production.aggregate_volatility(h, a.sigma)},
                      table(h))
    raise UsageError(f"unknown io action {a.action}")


def cmd_lp(a):
    rec = load_json(a.file)
    if "c" not in rec:
        raise InvalidArgument("LP JSON needs 'c'")
    sense = rec.get("sense", "min")
    c = np.asarray(rec["c"], dtype=float)
    sol = lp.solve_lp(-c if sense == "max" else c, rec.get("A_ub"), rec.get("b_ub"),
                      rec.get("A_eq"), rec.get("b_eq"),
                      [tuple(b) for b in rec["bounds"]] if rec.get("bounds") else None)
    out = {"status": sol.status}
    if sol.status == "optimal":
        out.update(x=sol.x, objective=-sol.objective if sense == "max" else sol.objective,
                   theta=sol.theta, pivots=len(sol.trace))
        return Output(out, (["var", "value"], list(enumerate(sol.x))))
    return Output(out)


def cmd_flow(a):
    net = flows.FlowNetwork.from_dict(load_json(a.file))
    if a.action == "spath":
        q, k = flows.min_cost_to_go(net, a.beta)
        sigma = flows.greedy_policy(q, net, a.beta)
        return Output({"cost_to_go": q, "iterations": k, "policy": sigma},
                      (["vertex", "cost_to_go", "next"],
                       [(i, v, int(s)) for i, (v, s) in enumerate(zip(q, sigma))]))
    if a.action == "mincost":
        r = flows.min_cost_flow(net)
        rec = {"status": r.status}
        if r.status == "optimal":
            rec.update(flow=r.q, cost=r.cost)
            return Output(rec, (["tail", "head", "flow"],
                                [(i, j, q) for (i, j, _), q in zip(net.edges, r.q)]))
        return Output(rec)
    if a.action == "reduce-ot":
        r = flows.flow_to_ot_reduction(net)
        return Output({"suppliers": r.suppliers, "consumers": r.consumers, "phi": r.phi,
                       "psi": r.psi, "cost": r.cost, "plan": r.plan.pi,
                       "edge_flows": r.edge_flows, "total_cost": r.total_cost,
                       "unreachable": [list(p) for p in r.unreachable],
                       "uses_prohibited": r.uses_prohibited},
                      (["tail", "head", "flow"],
                       [(i, j, q) for (i, j, _), q in zip(net.edges, r.edge_flows)]))
    raise UsageError(f"unknown flow action {a.action}")


def cmd_ot(a):
    phi, psi = parse_vector(a.phi), parse_vector(a.psi)
    c = load_square(a.cost) if Path(a.cost).exists() else None
    if c is None:
        c = np.asarray(json.loads(a.cost), dtype=float)
    c = np.asarray(c, dtype=float).reshape(phi.size, psi.size)
    plan, pot = flows.solve_ot(phi, psi, c)
    ok, rep = flows.check_competitive_equilibrium(pot.w, pot.p, plan.pi, c, phi, psi)
    return Output({"plan": plan.pi, "cost": plan.cost, "w": pot.w, "p": pot.p,
                   "dual_value": pot.value(phi, psi), "equilibrium": ok},
                  (None, plan.pi.tolist()))


def cmd_fin(a):
    rec = load_json(a.file)
    if a.action in ("clear", "certify"):
        sys_ = finance.BankingSystem.from_dict(rec)
        Pi = finance.relative_liabilities(sys_)
        if a.action == "certify":
            cert = finance.uniqueness_certificate(sys_)
            return Output({"certificate": cert.kind, "detail": cert.detail})
        st = finance.solve_clearing(Pi, sys_.e, sys_.x, a.start_clear)
        out = {"p": st.p, "iterations": st.iterations, "residual": st.residual}
        if st.bracket is not None:
            out["least"], out["greatest"] = st.bracket
        return Output(out, (["bank", "payment"], list(enumerate(st.p))))
    if a.action == "cascade":
        ch = finance.CrossHoldings.from_dict(rec)
        st = finance.cascade(ch, a.start)
        return Output({"v": st.v, "failed": st.failed.tolist(), "waves": st.waves,
                       "sweeps": st.sweeps},
                      (["firm", "value", "failed"],
                       [(i, v, int(f)) for i, (v, f) in enumerate(zip(st.v, st.failed))]))
    raise UsageError(f"unknown fin action {a.action}")


# ------------------------------------------------------------------ parser

def build_parser():
    def globals_(default):
        gp = argparse.ArgumentParser(add_help=False, argument_default=default)
        gp.add_argument("--out", metavar="DIR", help="write result and manifest here")
        gp.add_argument("--format", choices=("json", "csv"),
                        **({} if default is argparse.SUPPRESS else {"default": "json"}))
        gp.add_argument("--config", metavar="FILE", help="JSON file of option defaults")
        return gp

    # the same flags are accepted before or after the subcommand
    top = globals_(None)
    common = globals_(argparse.SUPPRESS)
    p = _Parser(prog="econnet", description="Economic network analysis toolkit.",
                parents=[top])
    p.add_argument("--version", action="version", version=f"econnet {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def group(name, func, help_):
        gp = sub.add_parser(name, help=help_, parents=[common])
        gp.set_defaults(func=func)
        acts = gp.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
        acts.required = True

        def action(aname, help_, file=True):
            ap = acts.add_parser(aname, help=help_, parents=[common])
            if file:
                ap.add_argument("file")
            return ap
        return action

    act = group("graph", cmd_graph, "graph structure")
    act("info", "connectivity summary")
    act("scc", "strongly connected components")
    ap = act("degrees", "vertex degrees")
    ap.add_argument("--direction", choices=("in", "out"), default="out")
    ap.add_argument("--weighted", action="store_true")
    ap = act("accessible", "path test")
    ap.add_argument("--source", type=int, required=True)
    ap.add_argument("--target", type=int, required=True)
    ap = act("degree-hist", "degree distribution as plot data")
    ap.add_argument("--direction", dest="direction_hist", default="undirected",
                    choices=("in", "out", "undirected"))

    act = group("spectral", cmd_spectral, "spectral radius and friends")
    act("radius", "spectral radius")
    act("bounds", "row/column-sum bounds")
    ap = act("eigenpair", "dominant eigenpair")
    ap.add_argument("--tol", type=float, default=spectral.TOL)
    ap.add_argument("--max-iter", type=int, default=spectral.MAX_ITER)
    ap = act("gelfand", "Gelfand sequence")
    ap.add_argument("--k", type=int, default=100)
    ap.add_argument("--norm", choices=spectral.NORM_KINDS, default="l1")
    ap = act("norm", "matrix norm")
    ap.add_argument("--kind", choices=spectral.NORM_KINDS, default="frobenius")
    ap = act("neumann", "(I - A)^-1")
    ap.add_argument("--tol", type=float, default=spectral.TOL)

    act = group("centrality", cmd_centrality, "centrality measures")
    for name in ("degree", "eigenvector", "katz", "betweenness", "pagerank"):
        ap = act(name, f"{name} centrality")
        ap.add_argument("--mode", choices=("hub", "authority"), default="hub")
        ap.add_argument("--weighted", action="store_true")
        ap.add_argument("--binarize", action="store_true", help="use the 0/1 adjacency")
        ap.add_argument("--beta", type=float, default=None)
        ap.add_argument("--m", type=int, default=40)
        ap.add_argument("--delta", type=float, default=0.85)

    act = group("randnet", cmd_randnet, "random graphs and heavy tails")
    ap = act("er", "Erdos-Renyi graph", file=False)
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--p", type=float, required=True)
    ap.add_argument("--seed", type=int, required=True)
    ap = act("ba", "Barabasi-Albert graph", file=False)
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--m", type=int, required=True)
    ap.add_argument("--seed", type=int, required=True)
    ap = act("herfindahl-mc", "median Herfindahl index", file=False)
    ap.add_argument("--sampler", choices=("pareto", "lognormal"), default="pareto")
    ap.add_argument("--alpha", type=float, default=1.059)
    ap.add_argument("--mu", type=float, default=0.0)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--reps", type=int, default=51)
    ap.add_argument("--seed", type=int, required=True)
    ap = act("ccdf", "Pareto sample CCDF plot data and tail fit", file=False)
    ap.add_argument("--alpha", type=float, required=True)
    ap.add_argument("--xbar", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--tail-fraction", type=float, default=0.1)
    ap.add_argument("--seed", type=int, required=True)

    act = group("markov", cmd_markov, "finite Markov chains")
    act("stationary", "stationary distribution")
    act("ergodic", "ergodicity test")
    ap = act("simulate", "simulate a path")
    ap.add_argument("--T", type=int, required=True)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--init", help="initial distribution")
    ap = act("dobrushin", "Dobrushin coefficient of P^k")
    ap.add_argument("--k", type=int, default=1)
    ap = act("convergence", "distance to stationarity and its bound")
    ap.add_argument("--t", type=int, default=50)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--init", help="initial distribution")

    act = group("degroot", cmd_degroot, "DeGroot learning")
    ap = act("run", "beliefs after some steps")
    ap.add_argument("--beliefs", required=True)
    ap.add_argument("--steps", type=int, default=1)
    ap = act("consensus", "iterate to consensus")
    ap.add_argument("--beliefs", required=True)
    ap.add_argument("--tol", type=float, default=1e-8)

    act = group("io", cmd_io, "input-output analysis")
    act("leontief", "Leontief inverse and output")
    ap = act("shocks", "demand shock rounds as plot data")
    ap.add_argument("--rounds", type=int, default=10)
    ap.add_argument("--shock", help="demand shock vector")
    act("multipliers", "output multipliers")
    act("upstreamness", "upstreamness")
    ap = act("domar", "Domar weights and volatility")
    ap.add_argument("--sigma", type=float, default=1.0)

    act = group("lp", cmd_lp, "linear programming")
    act("solve", "solve an LP JSON file")

    act = group("flow", cmd_flow, "shortest paths and network flow")
    ap = act("spath", "minimum cost-to-go")
    ap.add_argument("--beta", type=float, default=1.0)
    act("mincost", "minimum cost flow")
    act("reduce-ot", "reduce flow to optimal transport")

    act = group("ot", cmd_ot, "optimal transport")
    ap = act("solve", "solve a transport problem", file=False)
    ap.add_argument("--phi", required=True)
    ap.add_argument("--psi", required=True)
    ap.add_argument("--cost", required=True, help="CSV/JSON file or JSON matrix")

    act = group("fin", cmd_fin, "financial contagion")
    ap = act("clear", "clearing vector")
    ap.add_argument("--from", dest="start_clear", choices=("below", "above", "both"),
                    default="below")
    ap = act("cascade", "cross-holding cascade")
    ap.add_argument("--start", choices=("above", "below"), default="above")
    act("certify", "uniqueness certificate")
    return p


def _walk(parser):
    yield parser
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for child in action.choices.values():
                yield from _walk(child)


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return None
    cfg = load_json(known.config)
    if not isinstance(cfg, dict):
        raise InvalidArgument("config file must hold a JSON object")
    for sp in _walk(parser):
        dests = {a.dest for a in sp._actions} - {"out", "format", "config"}
        sp.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()
                           if k.replace("-", "_") in dests})
    return cfg


def _error(code, message, context=None):
    sys.stderr.write(json.dumps({"code": code, "message": message,
                                 "context": context or {}}, sort_keys=True) + "\n")


def _manifest(a, payload):
    skip = {"func", "out", "format", "config"}
    params = {k: v for k, v in sorted(vars(a).items()) if k not in skip}
    files = [v for k, v in params.items() if k in ("file", "cost") and v and Path(v).exists()]
    digest = sha256_bytes(b"".join(read_bytes(f) for f in files)) if files else None
    return {"command": f"{a.command} {a.action}",
            "input_digest": digest, "seed": params.get("seed"),
            "params": params, "version": __version__,
            "threads": os.environ.get("ECONNET_THREADS"),
            "output_digest": sha256_bytes(payload.encode())}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:        # --help / --version
            return int(exc.code or 0)
        out = args.func(args)
        text = out.render(args.format)
        if args.out:
            d = Path(args.out)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"result.{args.format}").write_text(text)
            (d / "manifest.json").write_text(dumps(_manifest(args, text)))
        else:
            sys.stdout.write(text)
        return 0
    except UsageError as exc:
        _error("usage", str(exc))
        return 2
    except EconNetError as exc:
        rec = exc.to_record()
        _error(rec["code"], rec["message"], rec["context"])
        return 1
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        _error("invalid_input", f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
