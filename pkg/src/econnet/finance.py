"""Interbank clearing (Eisenberg and Noe) and equity cross-holding cascades."""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, InvalidCrossHoldings, NonConvergence
from .fixedpoint import monotone_iterate
from .graphcore import as_matrix, from_adjacency, is_dag, reachable_from
from .spectral import is_weakly_chained_substochastic, spectral_radius


@dataclass(frozen=True)
class BankingSystem:
    """``W[i, j]`` is what bank i owes bank j; ``assets`` and ``liabilities``
    are external."""

    W: np.ndarray
    assets: np.ndarray
    liabilities: np.ndarray

    def __post_init__(self):
        W = as_matrix(self.W, "W")
        a = np.asarray(self.assets, dtype=float)
        d = np.asarray(self.liabilities, dtype=float)
        n = W.shape[0]
        if np.any(W < 0) or np.any(np.diag(W) != 0):
            raise InvalidArgument("W must be nonnegative with zero diagonal")
        if a.shape != (n,) or d.shape != (n,) or np.any(a < 0) or np.any(d < 0):
            raise InvalidArgument("external assets and liabilities must be nonnegative n-vectors")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "assets", a)
        object.__setattr__(self, "liabilities", d)

    @property
    def x(self):
        """Total interbank obligations of each bank."""
        return self.W.sum(axis=1)

    @property
    def e(self):
        return self.assets - self.liabilities

    @classmethod
    def from_dict(cls, rec):
        return cls(rec["W"], rec["assets"], rec["liabilities"])


def relative_liabilities(sys):
    """``Pi[i, j] = W[i, j] / x_i``, with zero rows where ``x_i = 0``."""
    W = sys.W if isinstance(sys, BankingSystem) else as_matrix(sys, "W")
    x = W.sum(axis=1)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x[:, None] > 0, W / safe[:, None], 0.0)


@dataclass
class ClearingState:
    p: np.ndarray
    iterations: int
    bracket: tuple = None
    residual: float = 0.0


def clearing_operator(p, Pi, e, x):
    """``T p = ((e + p Pi) ^ x) v 0``."""
    return np.maximum(np.minimum(e + p @ Pi, x), 0.0)


def _polish(p, Pi, e, x, tol):
    """Solve exactly within the regime (zero / full / interior) read off ``p``."""
    n = p.size
    inflow = e + p @ Pi
    full = inflow >= x - 1e-9 * (1 + x)
    zero = (inflow <= 1e-9) & ~full
    mid = ~(full | zero)
    q = np.where(full, x, 0.0)
    if mid.any():
        idx = np.flatnonzero(mid)
        M = np.eye(idx.size) - Pi[np.ix_(idx, idx)].T
        rhs = e[idx] + Pi[:, idx].T @ q
        try:
            if np.linalg.cond(M) > 1e12:
                return None
            q[idx] = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            return None
    if np.max(np.abs(clearing_operator(q, Pi, e, x) - q), initial=0.0) <= tol and \
            np.max(np.abs(q - p), initial=0.0) <= 1e-6 * (1 + np.abs(x).max(initial=0.0)):
        return q
    return None


def solve_clearing(Pi, e, x, start="below", tol=1e-12, max_iter=1_000_000):
    """Clearing vector by monotone iteration of the clearing operator.

    ``start='below'`` iterates from zero to the least clearing vector (the
    default, which returns ``p = 0`` in the ambiguous ``e = 0`` case);
    ``'above'`` iterates from ``x`` to the greatest; ``'both'`` returns the
    least one and records ``(least, greatest)`` in ``bracket``.  Each limit
    is polished by an exact solve inside its payment regime when that solve
    is well posed.
    """
    Pi = as_matrix(Pi, "Pi")
    e = np.asarray(e, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(Pi < 0) or np.any(Pi.sum(axis=1) > 1 + 1e-12):
        raise InvalidArgument("Pi must be substochastic")
    if np.any(x < 0):
        raise InvalidArgument("x must be nonnegative")
    if start not in ("below", "above", "both"):
        raise InvalidArgument("start must be below, above or both", start=start)

    def T(p):
        return clearing_operator(p, Pi, e, x)

    def run(p0, direction):
        try:
            r = monotone_iterate(T, p0, direction, tol, max_iter)
        except NonConvergence as exc:
            raise NonConvergence("clearing iteration did not converge", **exc.context) from exc
        p = r.point
        q = _polish(p, Pi, e, x, tol)
        if q is not None:
            # keep the polished point only if it stays on the right side
            ok = np.all(q >= p - tol) if direction == "below" else np.all(q <= p + tol)
            if ok:
                p = q
        return p, r.iterations

    if start == "above":
        p, k = run(x.copy(), "above")
        return ClearingState(p, k, None, float(np.max(np.abs(T(p) - p), initial=0.0)))
    lo, k = run(np.zeros_like(x), "below")
    bracket = None
    if start == "both":
        hi, k2 = run(x.copy(), "above")
        bracket = (lo, hi)
        k = k + k2
    return ClearingState(lo, k, bracket, float(np.max(np.abs(T(lo) - lo), initial=0.0)))


@dataclass
class Certificate:
    kind: str
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.kind != "None"


def uniqueness_certificate(sys, e=None):
    """Strongest available witness that the clearing vector is unique.

    Checked in order: ``DAG`` (acyclic liabilities graph), ``WeaklyChained``
    (every bank reaches one whose relative liabilities sum below one),
    ``SpectralRadius`` (numerical ``r(Pi) < 1``), ``CashAccessible``
    (``Pi`` stochastic, ``e >= 0`` and every bank downstream of a bank with
    positive net external assets), then ``None``.

    ``sys`` is a :class:`BankingSystem` or a pair ``(Pi, e)``.
    """
    if isinstance(sys, BankingSystem):
        Pi, e = relative_liabilities(sys), sys.e
    else:
        Pi, e = sys if e is None else (sys, e)
        Pi = as_matrix(Pi, "Pi")
        e = np.asarray(e, dtype=float)
    g = from_adjacency(Pi)
    if is_dag(g):
        return Certificate("DAG")
    if is_weakly_chained_substochastic(Pi):
        return Certificate("WeaklyChained")
    r = spectral_radius(Pi)
    if r < 1.0 - 1e-10:
        return Certificate("SpectralRadius", {"radius": r})
    stochastic = np.allclose(Pi.sum(axis=1), 1.0, rtol=0, atol=1e-12)
    if stochastic and np.all(e >= 0):
        cash = np.flatnonzero(e > 0)
        if cash.size and np.all(reachable_from(g, cash.tolist())):
            return Certificate("CashAccessible", {"cash_banks": cash.tolist()})
    return Certificate("None", {"radius": r})


@dataclass(frozen=True)
class CrossHoldings:
    """Equity cross-holdings ``C`` (``C[i, j]``: share of j held by i).

    ``theta`` scales the failure thresholds ``theta * vbar_ref``, where
    ``vbar_ref`` is the market value under ``e_ref`` (default ``e``).
    """

    C: np.ndarray
    e: np.ndarray
    beta: float
    theta: float
    e_ref: np.ndarray = None

    def __post_init__(self):
        C = as_matrix(self.C, "C")
        e = np.asarray(self.e, dtype=float)
        if np.any(C < 0) or np.any(C > 1) or np.any(np.diag(C) != 0):
            raise InvalidCrossHoldings("C must lie in [0, 1] with zero diagonal")
        cs = C.sum(axis=0)
        if np.any(cs >= 1):
            j = int(np.argmax(cs >= 1))
            raise InvalidCrossHoldings("column sum of C must be below one", column=j,
                                       sum=float(cs[j]))
        if e.shape != (C.shape[0],) or np.any(e < 0):
            raise InvalidArgument("e must be a nonnegative n-vector")
        if not self.beta > 0:
            raise InvalidArgument("beta must be positive", beta=self.beta)
        if not 0 < self.theta < 1:
            raise InvalidArgument("theta must lie in (0, 1)", theta=self.theta)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "e", e)
        if self.e_ref is not None:
            object.__setattr__(self, "e_ref", np.asarray(self.e_ref, dtype=float))

    @classmethod
    def from_dict(cls, rec):
        return cls(rec["C"], rec["e"], rec["beta"], rec["theta"], rec.get("e_ref"))

    @property
    def A(self):
        n = self.C.shape[0]
        R = np.diag(1.0 - self.C.sum(axis=0))
        return R @ np.linalg.solve(np.eye(n) - self.C, np.eye(n))

    def thresholds(self, A=None):
        A = self.A if A is None else A
        ref = self.e if self.e_ref is None else self.e_ref
        return self.theta * (A @ ref)


def market_values(ch):
    """``(vbar, b)`` with book values ``b = (I - C)^{-1} e`` and ``vbar = R b``."""
    n = ch.C.shape[0]
    b = np.linalg.solve(np.eye(n) - ch.C, ch.e)
    vbar = (1.0 - ch.C.sum(axis=0)) * b
    return vbar, b


@dataclass
class CascadeState:
    v: np.ndarray
    failed: np.ndarray
    waves: list
    sweeps: int


def cascade(ch, start="above"):
    """Iterate ``T v = A (e - beta 1{v < theta vbar_ref})`` to a fixed point.

    The failure indicator takes finitely many values and moves monotonically,
    so the loop ends exactly after at most ``n + 1`` sweeps.  Starting from
    ``vbar`` gives the greatest fixed point, starting from ``A(e - beta)``
    the least.  ``waves`` records the failure count of each distinct
    failure set visited.
    """
    if start not in ("above", "below"):
        raise InvalidArgument("start must be 'above' or 'below'", start=start)
    A = ch.A
    thr = ch.thresholds(A)
    n = ch.e.size
    v = A @ ch.e if start == "above" else A @ (ch.e - ch.beta)
    failed = v < thr
    waves = [int(failed.sum())]
    for sweep in range(1, n + 2):
        v = A @ (ch.e - ch.beta * failed)
        new = v < thr
        if np.array_equal(new, failed):
            return CascadeState(v, failed, waves, sweep)
        failed = new
        waves.append(int(failed.sum()))
    raise NonConvergence("cascade did not settle within n + 1 sweeps", n=n)


def failure_set_consistency(ch, failed):
    """True iff ``v = A(e - beta failed)`` reproduces ``failed`` exactly."""
    failed = np.asarray(failed, dtype=bool)
    A = ch.A
    v = A @ (ch.e - ch.beta * failed)
    return bool(np.array_equal(v < ch.thresholds(A), failed))
