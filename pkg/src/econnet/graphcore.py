"""Weighted directed graphs and their connectivity structure.

Vertices are the integers ``0..n-1``.  An edge ``(i, j, w)`` carries a
strictly positive weight; a zero weight means the edge is absent, which
keeps the correspondence with nonnegative adjacency matrices exact.
"""
from collections import deque
from math import gcd

import numpy as np

from .errors import InvalidAdjacency, InvalidArgument, InvalidGraph


class WeightedDigraph:
    """Immutable weighted digraph.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of (int, int, float)
        Triples ``(tail, head, weight)`` with ``weight > 0``.
    labels : sequence of str, optional
        Display names, one per vertex.  Never used by the algorithms.
    """

    __slots__ = ("_n", "_edges", "_labels", "_succ", "_pred")

    def __init__(self, n, edges=(), labels=None):
        n = int(n)
        if n < 0:
            raise InvalidGraph("vertex count must be nonnegative", n=n)
        clean = []
        seen = set()
        for e in edges:
            if len(e) != 3:
                raise InvalidGraph("edges must be (tail, head, weight) triples", edge=list(e))
            i, j, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidGraph("edge endpoint out of range", edge=[i, j], n=n)
            if not (w > 0 and np.isfinite(w)):
                raise InvalidGraph("edge weights must be positive and finite", edge=[i, j], weight=w)
            if (i, j) in seen:
                raise InvalidGraph("duplicate edge", edge=[i, j])
            seen.add((i, j))
            clean.append((i, j, w))
        clean.sort()
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise InvalidGraph("label count does not match vertex count",
                                   labels=len(labels), n=n)
        self._n = n
        self._edges = tuple(clean)
        self._labels = labels
        succ = [[] for _ in range(n)]
        pred = [[] for _ in range(n)]
        for i, j, _ in clean:
            succ[i].append(j)
            pred[j].append(i)
        self._succ = tuple(tuple(s) for s in succ)
        self._pred = tuple(tuple(p) for p in pred)

    @property
    def n(self):
        return self._n

    @property
    def edges(self):
        return self._edges

    @property
    def labels(self):
        return self._labels

    def successors(self, v):
        return self._succ[v]

    def predecessors(self, v):
        return self._pred[v]

    def __len__(self):
        return self._n

    def __eq__(self, other):
        return (isinstance(other, WeightedDigraph) and self._n == other._n
                and self._edges == other._edges)

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"WeightedDigraph(n={self._n}, edges={len(self._edges)})"

    def reversed(self):
        """Graph with every edge direction flipped."""
        return WeightedDigraph(self._n, [(j, i, w) for i, j, w in self._edges], self._labels)

    def to_dict(self):
        d = {"n": self._n, "edges": [[i, j, w] for i, j, w in self._edges]}
        if self._labels is not None:
            d["labels"] = list(self._labels)
        return d

    @classmethod
    def from_dict(cls, d):
        if "n" not in d or "edges" not in d:
            raise InvalidGraph("graph record needs 'n' and 'edges'")
        return cls(d["n"], d["edges"], d.get("labels"))


def as_matrix(A, name="A"):
    """Validate a finite square matrix and return it as float64."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgument(f"{name} must be square", shape=list(A.shape))
    if not np.all(np.isfinite(A)):
        raise InvalidArgument(f"{name} has non-finite entries")
    return A


def _nonneg(A, exc=InvalidAdjacency):
    A = as_matrix(A)
    if np.any(A < 0):
        i, j = np.argwhere(A < 0)[0]
        raise exc("matrix has a negative entry", row=int(i), col=int(j), value=float(A[i, j]))
    return A


def from_adjacency(A, labels=None):
    """Weighted digraph induced by a nonnegative matrix.

    Examples
    --------
    >>> g = from_adjacency([[0, 2], [0, 0]])
    >>> g.edges
    ((0, 1, 2.0),)
    """
    A = _nonneg(A)
    ii, jj = np.nonzero(A > 0)
    return WeightedDigraph(A.shape[0], zip(ii.tolist(), jj.tolist(), A[ii, jj].tolist()), labels)


def adjacency(g):
    A = np.zeros((g.n, g.n))
    for i, j, w in g.edges:
        A[i, j] = w
    return A


def binarize(A):
    """0/1 matrix with the same support as ``A``."""
    return (np.asarray(A) > 0).astype(float)


def _graph(g):
    return g if isinstance(g, WeightedDigraph) else from_adjacency(g)


def degrees(g, direction="out", weighted=False):
    """In- or out-degree of every vertex.

    With ``weighted=False`` edges are counted; otherwise weights are summed.
    """
    if direction not in ("in", "out"):
        raise InvalidArgument("direction must be 'in' or 'out'", direction=direction)
    g = _graph(g)
    out = np.zeros(g.n)
    for i, j, w in g.edges:
        out[i if direction == "out" else j] += w if weighted else 1.0
    return out


def strongly_connected_components(g):
    """Strongly connected components, by an iterative Tarjan pass.

    Returns
    -------
    list of list of int
        Blocks sorted internally, and ordered by smallest member.
    """
    g = _graph(g)
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            succ = g.successors(v)
            recurse = False
            while k < len(succ):
                w = succ[k]
                k += 1
                if index[w] < 0:
                    work.append((v, k))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=lambda c: c[0])
    return comps


def component_labels(g):
    """Array mapping each vertex to the index of its SCC block."""
    g = _graph(g)
    lab = np.empty(g.n, dtype=int)
    for k, comp in enumerate(strongly_connected_components(g)):
        lab[comp] = k
    return lab


def sink_components(g):
    """SCC blocks with no edge leaving the block (closed classes)."""
    g = _graph(g)
    lab = component_labels(g)
    comps = strongly_connected_components(g)
    closed = [True] * len(comps)
    for i, j, _ in g.edges:
        if lab[i] != lab[j]:
            closed[lab[i]] = False
    return [c for c, ok in zip(comps, closed) if ok]


def is_strongly_connected(g):
    g = _graph(g)
    return g.n > 0 and len(strongly_connected_components(g)) == 1


def is_irreducible(A):
    return is_strongly_connected(from_adjacency(A))


def period(g):
    """gcd of all cycle lengths, or 0 when the graph has no cycle.

    Within a strongly connected block the period is the gcd of
    ``level(u) + 1 - level(v)`` over block edges, where levels are BFS
    distances from any block vertex.
    """
    g = _graph(g)
    lab = component_labels(g)
    p = 0
    for comp in strongly_connected_components(g):
        k = lab[comp[0]]
        level = {comp[0]: 0}
        queue = deque([comp[0]])
        while queue:
            u = queue.popleft()
            for v in g.successors(u):
                if lab[v] == k and v not in level:
                    level[v] = level[u] + 1
                    queue.append(v)
        for u in comp:
            for v in g.successors(u):
                if lab[v] == k:
                    p = gcd(p, level[u] + 1 - level[v])
    return abs(p)


def is_aperiodic(g):
    """True iff the gcd of all cycle lengths is one.  Acyclic graphs give False."""
    return period(g) == 1


def is_primitive(A):
    g = from_adjacency(A)
    return is_strongly_connected(g) and is_aperiodic(g)


def _check_vertex(g, v):
    if not (isinstance(v, (int, np.integer)) and 0 <= v < g.n):
        raise IndexError(f"vertex {v} out of range for n={g.n}")


def reachable_from(g, sources):
    """Boolean mask of vertices reachable from any source (sources included)."""
    g = _graph(g)
    mask = np.zeros(g.n, dtype=bool)
    queue = deque()
    for s in sources:
        _check_vertex(g, s)
        if not mask[s]:
            mask[s] = True
            queue.append(s)
    while queue:
        u = queue.popleft()
        for v in g.successors(u):
            if not mask[v]:
                mask[v] = True
                queue.append(v)
    return mask


def is_accessible(g, u, v):
    """True iff ``u == v`` or there is a directed path from ``u`` to ``v``."""
    g = _graph(g)
    _check_vertex(g, u)
    _check_vertex(g, v)
    return bool(reachable_from(g, [u])[v])


def is_absorbing(g, U):
    """True iff no vertex outside ``U`` is accessible from inside ``U``."""
    g = _graph(g)
    U = sorted(set(int(u) for u in U))
    if not U:
        raise InvalidArgument("absorbing-set test needs a nonempty vertex set")
    mask = reachable_from(g, U)
    inside = np.zeros(g.n, dtype=bool)
    inside[U] = True
    return not np.any(mask & ~inside)


def is_dag(g):
    g = _graph(g)
    if any(i == j for i, j, _ in g.edges):
        return False
    return len(strongly_connected_components(g)) == g.n
