"""Random sampling, random graphs, degree distributions and power-law tools.

All randomness comes from NumPy's Philox counter-based generator, seeded
explicitly: ``numpy.random.Generator(numpy.random.Philox(seed))``.
"""
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InsufficientData, InvalidArgument
from .graphcore import WeightedDigraph, degrees
from .markov import cdf_of


def rng_for(seed, *stream):
    """Philox generator for ``seed``; extra integers select an independent stream."""
    if seed is None:
        raise InvalidArgument("an explicit seed is required")
    if stream:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, stream)])))
    return np.random.Generator(np.random.Philox(int(seed)))


def as_distribution(p, tol=1e-12):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or abs(p.sum() - 1.0) > tol * max(1, p.size):
        raise InvalidArgument("not a probability vector (nonnegative, sums to one)")
    return p


@dataclass(frozen=True)
class TailFit:
    slope: float
    intercept: float
    r_squared: float
    tail_fraction: float


def inverse_transform_sample(phi, u):
    """Index ``i`` with ``q_{i-1} < u <= q_i`` for cumulative sums ``q``."""
    phi = as_distribution(phi)
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0) or np.any(u > 1):
        raise InvalidArgument("u must lie in (0, 1]")
    idx = np.searchsorted(cdf_of(phi), u, side="left")
    idx = np.minimum(idx, phi.size - 1)
    return int(idx) if idx.ndim == 0 else idx


def sample_distribution(phi, size, seed):
    """``size`` draws from ``phi`` by inverse transform sampling."""
    u = 1.0 - rng_for(seed).random(size)
    return inverse_transform_sample(phi, u)


def erdos_renyi(n, p, seed):
    """Symmetric G(n, p) graph with unit weights.

    Pairs ``i < j`` are visited in lexicographic order and each receives
    one uniform draw, so the graph depends only on ``(n, p, seed)``.
    """
    if n < 1:
        raise InvalidArgument("n must be at least 1", n=n)
    if not 0 < p < 1:
        raise InvalidArgument("p must lie in (0, 1)", p=p)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng_for(seed).random(iu.size) < p
    i, j = iu[keep], ju[keep]
    edges = [(a, b, 1.0) for a, b in zip(i.tolist(), j.tolist())]
    edges += [(b, a, 1.0) for a, b in zip(i.tolist(), j.tolist())]
    return WeightedDigraph(n, edges)


def barabasi_albert(n, m, seed):
    """Preferential attachment graph, symmetric with unit weights.

    Starts from a complete graph on ``m`` vertices (a single vertex when
    ``m == 1``).  Each new vertex draws ``m`` distinct targets with
    probability proportional to current degree; repeated draws are
    rejected and redrawn.
    """
    n, m = int(n), int(m)
    if m < 1 or n <= m:
        raise InvalidArgument("need n > m >= 1", n=n, m=m)
    rng = rng_for(seed)
    # endpoint list: each vertex appears once per incident edge
    ends = []
    pairs = []
    for i in range(m):
        for j in range(i + 1, m):
            pairs.append((i, j))
            ends += [i, j]
    for v in range(m, n):
        if not ends:                       # m == 1 seed: single isolated vertex
            targets = list(range(v))[:m]
        else:
            targets = []
            chosen = set()
            while len(targets) < m:
                t = ends[int(rng.integers(len(ends)))]
                if t not in chosen:
                    chosen.add(t)
                    targets.append(t)
        for t in targets:
            pairs.append((t, v))
            ends += [t, v]
    edges = [(a, b, 1.0) for a, b in pairs] + [(b, a, 1.0) for a, b in pairs]
    return WeightedDigraph(n, edges)


def degree_distribution(g, direction="undirected"):
    """Fraction of vertices with degree ``k`` for ``k = 0..n``.

    ``undirected`` reads a symmetric digraph as undirected and uses the
    out-degree.
    """
    if direction not in ("in", "out", "undirected"):
        raise InvalidArgument("direction must be in, out or undirected", direction=direction)
    deg = degrees(g, "in" if direction == "in" else "out").astype(int)
    return np.bincount(deg, minlength=g.n + 1)[: g.n + 1] / max(g.n, 1)


def empirical_ccdf(samples):
    """Sorted samples and the empirical CCDF ``G(x) = #{X >= x} / N``."""
    x = np.sort(np.asarray(samples, dtype=float))
    N = x.size
    return x, (N - np.arange(N)) / N


def empirical_ccdf_loglog(samples, tail_fraction=0.1, min_points=20):
    """OLS line through ``(log x, log G(x))`` over the largest observations.

    Returns
    -------
    TailFit
        ``slope`` estimates ``-alpha``.
    """
    x = np.asarray(samples, dtype=float)
    if np.any(x <= 0):
        raise InvalidArgument("samples must be positive")
    if not 0 < tail_fraction <= 1:
        raise InvalidArgument("tail_fraction must lie in (0, 1]", tail_fraction=tail_fraction)
    xs, G = empirical_ccdf(x)
    k = int(np.floor(tail_fraction * xs.size))
    if k < min_points:
        raise InsufficientData("too few tail points for a fit", points=k, needed=min_points)
    lx, lg = np.log(xs[-k:]), np.log(G[-k:])
    X = np.column_stack([lx, np.ones(k)])
    coef, *_ = np.linalg.lstsq(X, lg, rcond=None)
    fit = X @ coef
    ss_tot = ((lg - lg.mean()) ** 2).sum()
    r2 = 1.0 - ((lg - fit) ** 2).sum() / ss_tot if ss_tot > 0 else 1.0
    return TailFit(float(coef[0]), float(coef[1]), float(r2), float(tail_fraction))


def pareto_sample(xbar, alpha, seed, n):
    """Pareto draws ``xbar * U^(-1/alpha)`` with ``U`` uniform on (0, 1]."""
    if not (xbar > 0 and alpha > 0):
        raise InvalidArgument("Pareto needs xbar > 0 and alpha > 0", xbar=xbar, alpha=alpha)
    u = 1.0 - rng_for(seed).random(int(n))
    return xbar * u ** (-1.0 / alpha)


def lognormal_sample(mu, sigma, seed, n):
    if not sigma > 0:
        raise InvalidArgument("sigma must be positive", sigma=sigma)
    return np.exp(mu + sigma * rng_for(seed).standard_normal(int(n)))


def lognormal_matching_pareto(alpha):
    """Lognormal ``(mu, sigma)`` sharing the mean and median of Pareto(1, alpha).

    Requires ``alpha > 1`` for a finite mean.
    """
    if not alpha > 1:
        raise InvalidArgument("matching needs alpha > 1", alpha=alpha)
    mu = np.log(2.0) / alpha
    s2 = 2.0 * (np.log(alpha / (alpha - 1.0)) - mu)
    if s2 <= 0:
        raise InvalidArgument("no lognormal matches these moments", alpha=alpha)
    return float(mu), float(np.sqrt(s2))


def zeta_pmf(gamma, k_max):
    """Zeta distribution truncated to ``1..k_max`` (index ``k-1`` holds ``k``)."""
    if not gamma > 1 or k_max < 1:
        raise InvalidArgument("need gamma > 1 and k_max >= 1", gamma=gamma, k_max=k_max)
    w = np.arange(1, int(k_max) + 1, dtype=float) ** (-gamma)
    return w / w.sum()


def binomial_pmf(n, p):
    return np.array([comb(n, k) * p ** k * (1 - p) ** (n - k) for k in range(n + 1)])


def herfindahl(S):
    """``sqrt(sum (S_i / Y)^2)`` with ``Y = sum S``."""
    S = np.asarray(S, dtype=float)
    if np.any(S < 0):
        raise InvalidArgument("firm sizes must be nonnegative")
    Y = S.sum()
    if not Y > 0:
        raise InvalidArgument("total size must be positive")
    return float(np.sqrt(((S / Y) ** 2).sum()))


def herfindahl_median_mc(sampler, n, m, seed, **params):
    """Median Herfindahl index over ``m`` replications of ``n`` firm sizes.

    Parameters
    ----------
    sampler : {'pareto', 'lognormal'} or callable
        Callables are invoked as ``sampler(rng, n)``.
    params : for ``pareto``: ``alpha`` and optional ``xbar``; for
        ``lognormal``: ``mu`` and ``sigma``.

    Replication ``k`` uses the Philox stream derived from ``(seed, k)``.
    """
    vals = np.empty(int(m))
    for k in range(int(m)):
        rng = rng_for(seed, k)
        if callable(sampler):
            S = sampler(rng, n)
        elif sampler == "pareto":
            S = params.get("xbar", 1.0) * (1.0 - rng.random(int(n))) ** (-1.0 / params["alpha"])
        elif sampler == "lognormal":
            S = np.exp(params["mu"] + params["sigma"] * rng.standard_normal(int(n)))
        else:
            raise InvalidArgument("unknown sampler", sampler=sampler)
        vals[k] = herfindahl(S)
    return float(np.median(vals))
