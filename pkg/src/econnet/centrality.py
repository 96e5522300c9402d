"""Degree, eigenvector, Katz, betweenness and PageRank centrality."""
import heapq
from dataclasses import dataclass

import numpy as np

from .errors import AttenuationError, DegenerateInput, InvalidArgument
from .graphcore import WeightedDigraph, adjacency, as_matrix, from_adjacency
from .spectral import spectral_radius


@dataclass(frozen=True)
class CentralityVector:
    values: np.ndarray
    measure: str
    mode: str = None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def ranking(self):
        """Vertices ordered from most to least central (stable on ties)."""
        return np.argsort(-self.values, kind="stable")


def _mode(mode):
    if mode not in ("hub", "authority"):
        raise InvalidArgument("mode must be 'hub' or 'authority'", mode=mode)
    return mode


def _matrix(g):
    if isinstance(g, WeightedDigraph):
        return adjacency(g)
    A = as_matrix(g)
    if np.any(A < 0):
        raise InvalidArgument("centrality needs a nonnegative adjacency matrix")
    return A


def degree_centrality(g, mode="hub", weighted=False):
    """Row sums (hub) or column sums (authority) of the adjacency matrix."""
    A = _matrix(g)
    if not weighted:
        A = (A > 0).astype(float)
    axis = 1 if _mode(mode) == "hub" else 0
    return CentralityVector(A.sum(axis=axis), "degree", mode)


def eigenvector_centrality(A, mode="hub", m=40):
    """``r(A)^{-m} A^m 1`` normalized to sum one.

    The default ``m = 40`` follows common practice; for primitive ``A``
    the result approaches the dominant right (hub) or left (authority)
    eigenvector.
    """
    A = _matrix(A)
    if _mode(mode) == "authority":
        A = A.T
    r = spectral_radius(A)
    if r == 0.0:
        raise DegenerateInput("eigenvector centrality undefined: r(A) = 0")
    B = A / r
    x = np.ones(A.shape[0])
    for _ in range(m):
        x = B @ x
        s = x.sum()
        if s == 0.0:
            raise DegenerateInput("iterates vanished")
        x /= s      # rescaling does not change the normalized result
    return CentralityVector(x / x.sum(), "eigenvector", mode)


def katz_centrality(A, beta=None, mode="hub"):
    """Katz centrality ``(I - beta A)^{-1} 1`` or its transpose version.

    Parameters
    ----------
    beta : float, optional
        Attenuation, ``0 < beta < 1/r(A)``.  Defaults to 1, which requires
        ``r(A) < 1``.
    """
    A = _matrix(A)
    if _mode(mode) == "authority":
        A = A.T
    r = spectral_radius(A)
    if beta is None:
        beta = 1.0
    beta = float(beta)
    limit = np.inf if r == 0 else 1.0 / r
    if not (beta > 0 and beta < limit):
        raise AttenuationError(f"beta must lie in (0, 1/r(A)) = (0, {limit:.17g})",
                               radius=r, limit=limit, beta=beta)
    n = A.shape[0]
    k = np.linalg.solve(np.eye(n) - beta * A, np.ones(n))
    k = k + np.linalg.solve(np.eye(n) - beta * A, np.ones(n) - (k - beta * A @ k))
    return CentralityVector(k, "katz", mode)


def _sp_dag(g, s, weighted, tol=1e-12):
    """Single-source shortest paths with path counts (Brandes stage one)."""
    n = g.n
    sigma = np.zeros(n)
    dist = np.full(n, np.inf)
    preds = [[] for _ in range(n)]
    order = []
    sigma[s] = 1.0
    dist[s] = 0.0
    if not weighted:
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                order.append(u)
                for v in g.successors(u):
                    if dist[v] == np.inf:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
                    if dist[v] == dist[u] + 1:
                        sigma[v] += sigma[u]
                        preds[v].append(u)
            frontier = nxt
        return order, sigma, preds
    W = {(i, j): w for i, j, w in g.edges}
    heap = [(0.0, s, s)]
    done = np.zeros(n, dtype=bool)
    while heap:
        d, u, p = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        order.append(u)
        for v in g.successors(u):
            nd = d + W[(u, v)]
            if nd < dist[v] - tol * max(1.0, abs(nd)):
                dist[v] = nd
                sigma[v] = sigma[u]
                preds[v] = [u]
                heapq.heappush(heap, (nd, v, u))
            elif abs(nd - dist[v]) <= tol * max(1.0, abs(nd)) and not done[v]:
                sigma[v] += sigma[u]
                preds[v].append(u)
    return order, sigma, preds


def betweenness_centrality(g, weighted=False):
    """Sum over ordered pairs ``(x, y)``, both distinct from ``v``, of the
    share of shortest ``x -> y`` paths passing through ``v``.

    Unreachable pairs contribute nothing.  Path counting follows Brandes'
    accumulation scheme; sources are processed in index order.
    """
    if not isinstance(g, WeightedDigraph):
        g = from_adjacency(g)
    n = g.n
    bc = np.zeros(n)
    for s in range(n):
        order, sigma, preds = _sp_dag(g, s, weighted)
        delta = np.zeros(n)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return CentralityVector(bc, "betweenness")


def google_matrix(A, delta=0.85):
    """``delta P + (1 - delta)/n``, with ``P`` the row-normalized ``A``.

    Rows of ``A`` with no outgoing weight are replaced by uniform rows.
    """
    A = _matrix(A)
    if not (0.0 < delta < 1.0):
        raise InvalidArgument("damping must lie in (0, 1)", delta=delta)
    n = A.shape[0]
    rs = A.sum(axis=1)
    P = np.where(rs[:, None] > 0, A / np.where(rs > 0, rs, 1.0)[:, None], 1.0 / n)
    return delta * P + (1.0 - delta) / n


def pagerank(A, delta=0.85):
    """Stationary distribution of the Google matrix."""
    from .markov import stationary_distribution
    G = google_matrix(A, delta)
    return CentralityVector(stationary_distribution(G), "pagerank", "authority")
