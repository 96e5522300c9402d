"""Shortest paths, optimal transport, min-cost flow and the reduction of
network flow to optimal transport."""
import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateInstance, InvalidArgument, InvalidNetwork, MarginalMismatch,
                     NonConvergence, UnreachableDestination)
from .lp import LPProblem, simplex_solve, solve_lp

BIG_M_FACTOR = 1e6


class FlowNetwork:
    """Directed network with nonnegative edge costs.

    Used in two ways: with a ``destination`` for shortest paths, or with
    ``supply`` and ``demand`` vectors for network flow.  Edge order is kept
    as given, since it indexes flow vectors.

    Parameters
    ----------
    n : int
    edges : sequence of (tail, head, cost)
    destination : int, optional
    supply, demand : array_like, optional
    capacity : dict or sequence of (tail, head, cap), optional
    """

    def __init__(self, n, edges, destination=None, supply=None, demand=None,
                 capacity=None, labels=None):
        self.n = int(n)
        clean, seen = [], set()
        for e in edges:
            i, j, c = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidNetwork("edge endpoint out of range", edge=[i, j])
            if not (c >= 0 and np.isfinite(c)):
                raise InvalidNetwork("edge costs must be finite and nonnegative", edge=[i, j])
            if (i, j) in seen:
                raise InvalidNetwork("duplicate edge", edge=[i, j])
            seen.add((i, j))
            clean.append((i, j, c))
        self.edges = tuple(clean)
        self.labels = None if labels is None else tuple(labels)
        self.destination = None if destination is None else int(destination)
        if self.destination is not None and not 0 <= self.destination < self.n:
            raise InvalidNetwork("destination out of range", destination=self.destination)
        self.supply = None if supply is None else np.asarray(supply, dtype=float)
        self.demand = None if demand is None else np.asarray(demand, dtype=float)
        for name, v in (("supply", self.supply), ("demand", self.demand)):
            if v is not None and (v.shape != (self.n,) or np.any(v < 0)):
                raise InvalidNetwork(f"{name} must be a nonnegative vector of length n")
        if (self.supply is None) != (self.demand is None):
            raise InvalidNetwork("supply and demand must be given together")
        if self.supply is not None:
            ss, sd = self.supply.sum(), self.demand.sum()
            if abs(ss - sd) > 1e-9 * max(1.0, ss, sd):
                raise InvalidNetwork("total supply must equal total demand",
                                     supply=float(ss), demand=float(sd))
        cap = {}
        if capacity is not None:
            items = capacity.items() if isinstance(capacity, dict) else \
                (((int(t), int(h)), c) for t, h, c in capacity)
            for (t, h), c in items:
                if (t, h) not in seen:
                    raise InvalidNetwork("capacity given for a missing edge", edge=[t, h])
                if c < 0:
                    raise InvalidNetwork("capacities must be nonnegative", edge=[t, h])
                cap[(t, h)] = float(c)
        self.capacity = cap

    @classmethod
    def from_dict(cls, rec):
        return cls(rec["n"], rec["edges"], rec.get("destination"), rec.get("supply"),
                   rec.get("demand"), rec.get("capacity"), rec.get("labels"))

    def cost_matrix(self):
        """Costs with ``inf`` for absent edges."""
        C = np.full((self.n, self.n), np.inf)
        for i, j, c in self.edges:
            C[i, j] = c
        return C

    def successors(self):
        out = [[] for _ in range(self.n)]
        for i, j, c in self.edges:
            out[i].append((j, c))
        return out


# ---------------------------------------------------------------- shortest paths

def _bellman_costs(net):
    if net.destination is None:
        raise InvalidNetwork("shortest-path use needs a destination")
    C = net.cost_matrix()
    d = net.destination
    C[d, d] = 0.0
    # every vertex must reach d
    reach = np.zeros(net.n, dtype=bool)
    reach[d] = True
    changed = True
    while changed:
        new = reach | np.any(np.isfinite(C) & reach[None, :], axis=1)
        changed = bool(np.any(new != reach))
        reach = new
    if not reach.all():
        v = int(np.flatnonzero(~reach)[0])
        raise UnreachableDestination("vertex cannot reach the destination", vertex=v,
                                     destination=d)
    return C


def bellman_operator(q, C, beta=1.0):
    """``(T q)(x) = min_y [c(x, y) + beta q(y)]``."""
    return np.min(C + beta * np.asarray(q, dtype=float)[None, :], axis=1)


def min_cost_to_go(net, beta=1.0, tol=1e-12, max_iter=100_000):
    """Minimum cost-to-go by iterating the Bellman operator from zero.

    Returns
    -------
    (ndarray, int)
        ``q*`` and the number ``k`` of operator applications after which
        ``T^k 0`` was a fixed point (``beta == 1``) or met the contraction
        stopping rule (``beta < 1``).
    """
    if not (0.0 < beta <= 1.0):
        raise InvalidArgument("beta must lie in (0, 1]", beta=beta)
    C = _bellman_costs(net)
    q = np.zeros(net.n)
    stop = tol if beta == 1.0 else tol * (1.0 - beta) / beta
    for k in range(max_iter + 1):
        tq = bellman_operator(q, C, beta)
        if np.max(np.abs(tq - q)) <= stop:
            return (q if beta == 1.0 else tq), k
        q = tq
    raise NonConvergence("Bellman iteration did not converge", iterations=max_iter)


def greedy_policy(q, net, beta=1.0, tol=1e-12):
    """Successor minimizing ``c(x, y) + beta q(y)``; ties go to the smallest ``y``."""
    C = _bellman_costs(net)
    q = np.asarray(q, dtype=float)
    if not np.all(np.isfinite(q)):
        raise InvalidArgument("q must be finite")
    sigma = np.empty(net.n, dtype=int)
    for x in range(net.n):
        if x == net.destination:
            sigma[x] = x
            continue
        if not np.any(np.isfinite(C[x])):
            raise InvalidNetwork("vertex has no outgoing edge", vertex=x)
        vals = C[x] + beta * q
        best = vals.min()
        sigma[x] = int(np.flatnonzero(vals <= best + tol * max(1.0, abs(best)))[0])
    return sigma


# ------------------------------------------------------------ optimal transport

def vec_col_major(M):
    """Stack the columns of ``M`` into one vector."""
    return np.asarray(M).reshape(-1, order="F")


def kron(A, B):
    return np.kron(np.atleast_2d(A), np.atleast_2d(B))


def ot_to_lp(phi, psi, c):
    """Standard-form LP for the Kantorovich problem.

    Variables are ``vec(pi)`` in column-major order; the rows impose the
    row marginals ``phi`` and then the column marginals ``psi``.
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    psi = np.atleast_1d(np.asarray(psi, dtype=float))
    c = np.asarray(c, dtype=float).reshape(phi.size, psi.size)
    if np.any(phi < 0) or np.any(psi < 0):
        raise InvalidArgument("marginals must be nonnegative")
    sp, sq = phi.sum(), psi.sum()
    if abs(sp - sq) > 1e-10 * max(1.0, sp, sq):
        raise MarginalMismatch("marginals have different total mass",
                               phi_sum=float(sp), psi_sum=float(sq))
    n, m = phi.size, psi.size
    A = np.vstack([kron(np.ones((1, m)), np.eye(n)), kron(np.eye(m), np.ones((1, n)))])
    return LPProblem(vec_col_major(c), A, np.concatenate([phi, psi]))


@dataclass
class TransportPlan:
    pi: np.ndarray
    cost: float


@dataclass
class DualPotentials:
    w: np.ndarray
    p: np.ndarray

    def value(self, phi, psi):
        return float(self.p @ np.asarray(psi, float) - self.w @ np.asarray(phi, float))


def solve_ot(phi, psi, c):
    """Optimal plan and Kantorovich potentials.

    The LP dual ``theta`` splits as ``(-w, p)`` so that
    ``p(y) - w(x) <= c(x, y)`` with equality on the plan's support.
    """
    prob = ot_to_lp(phi, psi, c)
    n = np.size(phi)
    m = np.size(psi)
    sol = simplex_solve(prob)
    if sol.status != "optimal":
        raise InvalidArgument(f"transport LP is {sol.status}")
    pi = sol.x.reshape((n, m), order="F")
    c = np.asarray(c, dtype=float).reshape(n, m)
    return TransportPlan(pi, float((c * pi).sum())), DualPotentials(-sol.theta[:n], sol.theta[n:])


def check_competitive_equilibrium(w, p, pi, c, phi, psi, tol=1e-8):
    """Check resource (RE), no-arbitrage (NA) and incentive (IC) conditions.

    Returns
    -------
    (bool, dict)
        Flag and, per condition, a list of violating indices.
    """
    w, p, pi, c = (np.asarray(v, dtype=float) for v in (w, p, pi, c))
    phi, psi = np.asarray(phi, dtype=float), np.asarray(psi, dtype=float)
    rep = {"RE": [], "NA": [], "IC": []}
    rep["RE"] += [("row", int(i)) for i in np.flatnonzero(np.abs(pi.sum(axis=1) - phi) > tol)]
    rep["RE"] += [("col", int(j)) for j in np.flatnonzero(np.abs(pi.sum(axis=0) - psi) > tol)]
    rep["RE"] += [("neg", int(i), int(j)) for i, j in np.argwhere(pi < -tol)]
    gap = p[None, :] - w[:, None] - c
    rep["NA"] = [(int(i), int(j)) for i, j in np.argwhere(gap > tol)]
    rep["IC"] = [(int(i), int(j)) for i, j in np.argwhere((pi > tol) & (np.abs(gap) > tol))]
    return not any(rep.values()), rep


# ------------------------------------------------------------------ network flow

def incidence_matrix(net):
    """Node-edge incidence: ``+1`` at each edge's tail, ``-1`` at its head."""
    A = np.zeros((net.n, len(net.edges)))
    for k, (i, j, _) in enumerate(net.edges):
        A[i, k] += 1.0
        A[j, k] -= 1.0
    return A


@dataclass
class FlowResult:
    status: str
    q: np.ndarray = None
    cost: float = np.nan


def min_cost_flow(net):
    """Cheapest edge flows ``q >= 0`` with ``A q = supply - demand``."""
    if net.supply is None:
        raise InvalidNetwork("min-cost flow needs supply and demand")
    A = incidence_matrix(net)
    b = net.supply - net.demand
    cost = np.array([c for _, _, c in net.edges])
    if not net.edges:
        if np.any(b != 0):
            return FlowResult("infeasible")
        return FlowResult("optimal", np.zeros(0), 0.0)
    bounds = [(0.0, net.capacity.get((i, j))) for i, j, _ in net.edges]
    sol = solve_lp(cost, A_eq=A, b_eq=b, bounds=bounds)
    if sol.status != "optimal":
        return FlowResult(sol.status)
    q = np.where(np.abs(sol.x) < 1e-12, 0.0, sol.x)
    return FlowResult("optimal", q, float(cost @ q))


def _dist_to(net, target):
    """Dijkstra distances from every vertex to ``target``."""
    radj = [[] for _ in range(net.n)]
    for i, j, c in net.edges:
        radj[j].append((i, c))
    dist = np.full(net.n, np.inf)
    dist[target] = 0.0
    heap = [(0.0, target)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for u, c in radj[v]:
            if d + c < dist[u]:
                dist[u] = d + c
                heapq.heappush(heap, (d + c, u))
    return dist


def _lex_path(succ, src, target, dist, tol=1e-12):
    """Lexicographically smallest shortest path from ``src`` to ``target``.

    ``dist`` holds distances to ``target``.  Greedily taking the smallest
    successor that stays on a shortest path gives the smallest sequence.
    """
    path = [src]
    seen = {src}
    u = src
    while u != target:
        best = None
        for v, c in sorted(succ[u]):
            if v not in seen and abs(c + dist[v] - dist[u]) <= tol * max(1.0, dist[u]):
                best = v
                break
        if best is None:
            break
        path.append(best)
        seen.add(best)
        u = best
    return path


@dataclass
class Reduction:
    suppliers: np.ndarray
    consumers: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    cost: np.ndarray
    paths: dict
    unreachable: list
    plan: TransportPlan = None
    edge_flows: np.ndarray = None
    total_cost: float = np.nan
    uses_prohibited: bool = False
    potentials: DualPotentials = field(default=None, repr=False)


def flow_to_ot_reduction(net, solve=True):
    """Collapse a flow network onto net suppliers and net consumers.

    Reduced costs are shortest-path costs.  Multiple shortest paths are
    resolved by taking the lexicographically smallest vertex sequence.
    Unreachable pairs get a prohibitive cost (``1e6`` times the largest
    finite one) and are listed in ``unreachable``.  Edge capacities are
    ignored here.
    """
    if net.supply is None:
        raise InvalidNetwork("reduction needs supply and demand")
    net_s = net.supply - net.demand
    sup = np.flatnonzero(net_s > 0)
    con = np.flatnonzero(net_s < 0)
    if sup.size == 0 or con.size == 0:
        raise DegenerateInstance("need at least one net supplier and one net consumer")
    succ = net.successors()
    cost = np.empty((sup.size, con.size))
    paths = {}
    for b, j in enumerate(con):
        dist = _dist_to(net, j)
        for a, i in enumerate(sup):
            cost[a, b] = dist[i]
            if np.isfinite(dist[i]):
                paths[(int(i), int(j))] = _lex_path(succ, int(i), int(j), dist)
    unreachable = [(int(sup[a]), int(con[b])) for a, b in np.argwhere(~np.isfinite(cost))]
    if unreachable:
        finite = cost[np.isfinite(cost)]
        big = BIG_M_FACTOR * (finite.max() if finite.size and finite.max() > 0 else 1.0)
        cost[~np.isfinite(cost)] = big
    red = Reduction(sup, con, net_s[sup], -net_s[con], cost, paths, unreachable)
    if not solve:
        return red
    plan, pot = solve_ot(red.phi, red.psi, cost)
    red.plan, red.potentials = plan, pot
    index = {(i, j): k for k, (i, j, _) in enumerate(net.edges)}
    q = np.zeros(len(net.edges))
    for a, i in enumerate(sup):
        for b, j in enumerate(con):
            mass = plan.pi[a, b]
            if mass <= 1e-12:
                continue
            if (int(i), int(j)) not in paths:
                red.uses_prohibited = True
                continue
            pth = paths[(int(i), int(j))]
            for u, v in zip(pth[:-1], pth[1:]):
                q[index[(u, v)]] += mass
    red.edge_flows = q
    red.total_cost = float(np.array([c for _, _, c in net.edges]) @ q) if net.edges else 0.0
    return red
