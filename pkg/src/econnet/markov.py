"""Finite Markov chains, Dobrushin stability and DeGroot learning."""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NoConsensusCertificate, NonUniqueStationary, NonConvergence
from .graphcore import as_matrix, from_adjacency, sink_components

log = logging.getLogger(__name__)
ROW_TOL = 1e-10


def as_stochastic(P, tol=ROW_TOL, renormalize=False):
    """Validate (and optionally renormalize) a stochastic matrix."""
    P = as_matrix(P, "P")
    if np.any(P < 0):
        raise InvalidArgument("stochastic matrix has a negative entry")
    rs = P.sum(axis=1)
    bad = np.abs(rs - 1.0) > tol
    if np.any(bad):
        if renormalize and np.all(rs > 0):
            log.info("renormalized %d rows with max deviation %.3g", bad.sum(),
                     np.abs(rs - 1).max())
            return P / rs[:, None]
        i = int(np.argmax(bad))
        raise InvalidArgument("rows must sum to one", row=i, sum=float(rs[i]), tol=tol)
    return P


@dataclass(frozen=True)
class MarkovModel:
    """Stochastic matrix together with its induced digraph."""

    P: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", as_stochastic(self.P))

    @property
    def graph(self):
        return from_adjacency(self.P)

    @property
    def n(self):
        return self.P.shape[0]


def _P(P):
    return P.P if isinstance(P, MarkovModel) else as_stochastic(P)


def l1_distance(phi, psi):
    return float(np.abs(np.asarray(phi, float) - np.asarray(psi, float)).sum())


def k_step(P, k):
    """``P^k`` with ``P^0 = I``."""
    if k < 0:
        raise InvalidArgument("k must be nonnegative", k=k)
    return np.linalg.matrix_power(_P(P), int(k))


def update_marginal(psi, P, t=1):
    """``psi P^t`` by repeated vector-matrix products."""
    P = _P(P)
    psi = np.asarray(psi, dtype=float)
    for _ in range(int(t)):
        psi = psi @ P
    return psi


def cdf_of(p):
    """Cumulative sums with the tail pinned to one at the last positive mass."""
    p = np.asarray(p, dtype=float)
    q = np.cumsum(p, axis=-1)
    if p.ndim == 1:
        q[np.flatnonzero(p)[-1]:] = 1.0
    else:
        for row, last in zip(q, [np.flatnonzero(r)[-1] for r in p]):
            row[last:] = 1.0
    return q


def _draw(cdf, u):
    # index i with q_{i-1} < u <= q_i
    i = int(np.searchsorted(cdf, u, side="left"))
    return min(i, cdf.size - 1)


def simulate_chain(P, psi0, T, seed):
    """State path ``X_0..X_T`` using one Philox uniform per step.

    Each draw is turned into a state by inverse transform sampling on the
    relevant row's cumulative sums.
    """
    P = _P(P)
    cdfs = cdf_of(P)
    c0 = cdf_of(psi0)
    rng = np.random.Generator(np.random.Philox(seed))
    u = 1.0 - rng.random(int(T) + 1)      # in (0, 1]
    path = np.empty(int(T) + 1, dtype=np.int64)
    x = _draw(c0, u[0])
    path[0] = x
    for t in range(1, int(T) + 1):
        x = _draw(cdfs[x], u[t])
        path[t] = x
    return path


def is_ergodic(model):
    """True iff the chain's digraph has exactly one closed class."""
    P = _P(model)
    return len(sink_components(from_adjacency(P))) == 1


def stationary_distribution(P, tol=1e-9):
    """Unique stationary distribution, solving ``psi (I - P + 1 1') = 1'``.

    Raises
    ------
    NonUniqueStationary
        When the chain has more than one closed class.
    """
    P = _P(P)
    n = P.shape[0]
    sinks = len(sink_components(from_adjacency(P)))
    if sinks != 1:
        raise NonUniqueStationary("stationary distribution is not unique",
                                  sink_classes=sinks)
    M = np.eye(n) - P + np.ones((n, n))
    try:
        psi = np.linalg.solve(M.T, np.ones(n))
    except np.linalg.LinAlgError as exc:
        raise NonUniqueStationary("linear system is singular", sink_classes=sinks) from exc
    psi = np.maximum(psi, 0.0)
    psi /= psi.sum()
    if np.abs(psi @ P - psi).sum() > tol:
        psi = psi + np.linalg.solve(M.T, np.ones(n) - M.T @ psi)
        psi = np.maximum(psi, 0.0)
        psi /= psi.sum()
    return psi


def dobrushin_coefficient(P, k=1):
    """``min_{x, x'} sum_y min(P^k(x, y), P^k(x', y))``."""
    if k < 1:
        raise InvalidArgument("k must be at least 1", k=k)
    Q = k_step(P, k)
    n = Q.shape[0]
    best = 1.0
    for i in range(n - 1):
        ov = np.minimum(Q[i], Q[i + 1:]).sum(axis=1)
        best = min(best, float(ov.min()))
    return max(0.0, min(1.0, best))


def stability_bound(P, k, t):
    """``2 (1 - alpha(P^k))^floor(t/k)``, a bound on ``||psi P^t - psi*||_1``."""
    if k < 1 or t < 0:
        raise InvalidArgument("need k >= 1 and t >= 0", k=k, t=t)
    a = dobrushin_coefficient(P, k)
    return 2.0 * (1.0 - a) ** (int(t) // int(k))


def ergodic_average(P, h, psi0, T, seed):
    """``(1/T) sum_{t<T} h(X_t)`` along a simulated path."""
    if T < 1:
        raise InvalidArgument("T must be at least 1", T=T)
    path = simulate_chain(P, psi0, T - 1, seed)
    return float(np.mean(np.asarray(h, dtype=float)[path]))


def degroot(T_trust, b0, t):
    """Beliefs ``T^t b0`` after ``t`` rounds of averaging."""
    T_trust = _P(T_trust)
    b = np.asarray(b0, dtype=float)
    if np.any(b < 0) or np.any(b > 1):
        raise InvalidArgument("initial beliefs must lie in [0, 1]")
    for _ in range(int(t)):
        b = T_trust @ b
    return b


def consensus_certificate(T_trust):
    """Smallest ``k <= n`` with ``alpha(T^k) > 0``, or ``None``."""
    T_trust = _P(T_trust)
    for k in range(1, T_trust.shape[0] + 1):
        if dobrushin_coefficient(T_trust, k) > 0:
            return k
    return None


def degroot_consensus(T_trust, b0, tol=1e-8, max_iter=1_000_000):
    """Iterate beliefs until the largest pairwise gap is below ``tol``.

    Returns
    -------
    (ndarray, int)
        Limit beliefs and the number of rounds taken.
    """
    T_trust = _P(T_trust)
    k = consensus_certificate(T_trust)
    if k is None:
        raise NoConsensusCertificate("no k <= n with positive Dobrushin coefficient",
                                     n=T_trust.shape[0])
    b = np.asarray(b0, dtype=float)
    if np.any(b < 0) or np.any(b > 1):
        raise InvalidArgument("initial beliefs must lie in [0, 1]")
    for t in range(max_iter + 1):
        if b.max() - b.min() < tol:
            return b, t
        b = T_trust @ b
    raise NonConvergence("beliefs did not reach consensus", iterations=max_iter,
                         gap=float(b.max() - b.min()))
