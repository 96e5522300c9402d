"""Linear programs in standard equality form and a two-phase simplex solver.

Standard form is ``min c @ x`` subject to ``A @ x == b`` and ``x >= 0``.
The solver works on a dense tableau, uses Bland's rule throughout (so it
cannot cycle) and reads dual values off the optimal basis.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, NumericalError

PIVOT_TOL = 1e-9


@dataclass(frozen=True)
class LPProblem:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        A = np.asarray(self.A, dtype=float).reshape(b.size, c.size)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise InvalidArgument("LP data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self):
        return self.A.shape


@dataclass
class LPSolution:
    status: str
    x: np.ndarray = None
    theta: np.ndarray = None
    objective: float = np.nan
    basis: tuple = ()
    trace: list = field(default_factory=list, repr=False)


@dataclass
class VariableMap:
    """Affine map ``x = offset + M @ y`` back to the original variables."""

    M: np.ndarray
    offset: np.ndarray
    constant: float
    n_eq: int
    n_ub: int

    def recover(self, y):
        return self.offset + self.M @ np.asarray(y, dtype=float)


def to_standard_form(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
    """Rewrite ``min c @ x`` under mixed constraints in standard form.

    Parameters
    ----------
    c : array_like, shape (n,)
    A_ub, b_ub : inequality rows ``A_ub @ x <= b_ub``
    A_eq, b_eq : equality rows
    bounds : sequence of (lo, hi), optional
        ``None`` means unbounded on that side.  Default is ``(0, None)``.

    Returns
    -------
    LPProblem, VariableMap
        Rows of the standard problem are ordered equality rows, inequality
        rows, then finite upper bounds.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.size

    def block(M, v, name):
        if M is None and v is None:
            return np.zeros((0, n)), np.zeros(0)
        if M is None or v is None:
            raise InvalidArgument(f"A_{name} and b_{name} must be given together")
        M = np.atleast_2d(np.asarray(M, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if M.shape != (v.size, n):
            raise InvalidArgument(f"A_{name} has shape {M.shape}, expected {(v.size, n)}")
        return M, v

    Aub, bub = block(A_ub, b_ub, "ub")
    Aeq, beq = block(A_eq, b_eq, "eq")
    if bounds is None:
        bounds = [(0.0, None)] * n
    elif len(bounds) == 2 and n != 2 and not hasattr(bounds[0], "__len__"):
        bounds = [tuple(bounds)] * n
    if len(bounds) != n:
        raise InvalidArgument("one (lo, hi) pair per variable is required",
                              expected=n, got=len(bounds))

    cols = []          # columns of M (one per structural standard variable)
    offset = np.zeros(n)
    upper_rows = []    # (column index in y, capacity)
    for j, (lo, hi) in enumerate(bounds):
        lo = None if lo is None or lo == -np.inf else float(lo)
        hi = None if hi is None or hi == np.inf else float(hi)
        if lo is not None and hi is not None and hi < lo:
            raise InvalidArgument("empty bound interval", var=j, lo=lo, hi=hi)
        e = np.zeros(n)
        e[j] = 1.0
        if lo is not None:
            offset[j] = lo
            cols.append(e)
            if hi is not None:
                upper_rows.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            offset[j] = hi
            cols.append(-e)
        else:
            cols.append(e)
            cols.append(-e)
    M = np.array(cols).T.reshape(n, len(cols))
    k = M.shape[1]
    n_slack = Aub.shape[0] + len(upper_rows)
    ns = k + n_slack
    rows, rhs = [], []
    for M_, v_ in ((Aeq, beq), (Aub, bub)):
        for i in range(M_.shape[0]):
            rows.append(np.concatenate([M_[i] @ M, np.zeros(n_slack)]))
            rhs.append(v_[i] - M_[i] @ offset)
    for i in range(Aub.shape[0]):
        rows[Aeq.shape[0] + i][k + i] = 1.0
    for t, (col, cap) in enumerate(upper_rows):
        r = np.zeros(ns)
        r[col] = 1.0
        r[k + Aub.shape[0] + t] = 1.0
        rows.append(r)
        rhs.append(cap)
    A = np.array(rows).reshape(len(rows), ns)
    cs = np.concatenate([c @ M, np.zeros(n_slack)])
    Mfull = np.hstack([M, np.zeros((n, n_slack))])
    vmap = VariableMap(Mfull, offset, float(c @ offset), Aeq.shape[0], Aub.shape[0])
    return LPProblem(cs, A, np.array(rhs)), vmap


class _Tableau:
    """Dense tableau; row 0..m-1 constraints, last row reduced costs."""

    def __init__(self, T, basis, tol, trace, phase):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.trace = trace
        self.phase = phase

    def pivot(self, r, s):
        T = self.T
        T[r] /= T[r, s]
        col = T[:, s].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, s] = 0.0
        T[r, s] = 1.0
        self.trace.append((self.phase, int(s), int(self.basis[r]), float(-T[-1, -1])))
        self.basis[r] = s

    def run(self, allowed, max_iter):
        T, tol = self.T, self.tol
        for _ in range(max_iter):
            red = T[-1, :-1]
            cand = np.nonzero((red < -tol) & allowed)[0]
            if cand.size == 0:
                return "optimal"
            s = cand[0]                       # Bland: smallest entering index
            colv = T[:-1, s]
            pos = np.nonzero(colv > tol)[0]
            if pos.size == 0:
                return "unbounded"
            ratios = T[pos, -1] / colv[pos]
            best = ratios.min()
            ties = pos[ratios <= best + tol * max(1.0, abs(best))]
            r = ties[np.argmin([self.basis[i] for i in ties])]   # Bland tie-break
            self.pivot(r, s)
        raise NumericalError(f"simplex exceeded {max_iter} pivots", max_iter=max_iter)


def simplex_solve(p, tol=PIVOT_TOL, max_iter=50_000, feas_tol=1e-8):
    """Two-phase dense simplex with Bland's rule.

    Parameters
    ----------
    p : LPProblem
    tol : float
        Pivot tolerance; smaller magnitudes are treated as zero.

    Returns
    -------
    LPSolution
        ``status`` is ``optimal``, ``infeasible`` or ``unbounded``.  The
        ``trace`` lists ``(phase, entering, leaving, objective)`` per pivot.
    """
    A, b, c = p.A.copy(), p.b.copy(), p.c
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    trace = []
    if m == 0:
        if np.any(c < -tol):
            return LPSolution("unbounded", trace=trace)
        return LPSolution("optimal", np.zeros(n), np.zeros(0), 0.0, (), trace)

    # phase 1: one artificial per row
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    tab = _Tableau(T, list(range(n, n + m)), tol, trace, 1)
    allowed = np.ones(n + m, dtype=bool)
    tab.run(allowed, max_iter)
    if -T[-1, -1] > feas_tol * max(1.0, np.abs(b).max()):
        return LPSolution("infeasible", trace=trace)

    # drive remaining artificials out; drop rows that are redundant
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if tab.basis[r] >= n:
            nz = np.nonzero(np.abs(T[r, :n]) > tol)[0]
            if nz.size:
                tab.pivot(r, nz[0])
            else:
                keep[r] = False
    rows = np.nonzero(keep)[0]
    T2 = np.zeros((rows.size + 1, n + 1))
    T2[:-1, :n] = T[rows, :n]
    T2[:-1, -1] = T[rows, -1]
    basis = [tab.basis[r] for r in rows]
    cb = c[basis]
    T2[-1, :n] = c - cb @ T2[:-1, :n]
    T2[-1, -1] = -cb @ T2[:-1, -1]
    tab2 = _Tableau(T2, basis, tol, trace, 2)
    status = tab2.run(np.ones(n, dtype=bool), max_iter)
    if status == "unbounded":
        return LPSolution("unbounded", basis=tuple(basis), trace=trace)

    # recompute primal/dual from the basis on the original data
    B = A[rows][:, basis]
    xb = np.linalg.solve(B, b[rows])
    x = np.zeros(n)
    x[basis] = xb
    x[np.abs(x) < 1e-12] = 0.0
    th_r = np.linalg.solve(B.T, c[basis])
    theta = np.zeros(m)
    theta[rows] = th_r
    theta[neg] *= -1
    return LPSolution("optimal", x, theta, float(c @ x), tuple(int(v) for v in basis), trace)


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None, **kw):
    """Minimize ``c @ x`` under mixed constraints via :func:`to_standard_form`.

    The returned ``x`` and ``objective`` refer to the original variables;
    ``theta`` holds the standard-form duals.
    """
    p, vmap = to_standard_form(c, A_ub, b_ub, A_eq, b_eq, bounds)
    sol = simplex_solve(p, **kw)
    if sol.status == "optimal":
        sol.x = vmap.recover(sol.x)
        sol.objective = float(sol.objective + vmap.constant)
    return sol


@dataclass(frozen=True)
class DualProblem:
    """``max b @ theta`` subject to ``A.T @ theta <= c`` with ``theta`` free."""

    b: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray

    def to_standard_form(self):
        m = self.b.size
        return to_standard_form(-self.b, self.A_ub, self.b_ub, bounds=[(None, None)] * m)

    def solve(self, **kw):
        p, vmap = self.to_standard_form()
        sol = simplex_solve(p, **kw)
        if sol.status == "optimal":
            sol.x = vmap.recover(sol.x)
            sol.objective = -float(sol.objective + vmap.constant)
        return sol


def dual_of(p):
    return DualProblem(p.b.copy(), p.A.T.copy(), p.c.copy())


def check_complementary_slackness(x, theta, p, tol=1e-8):
    """Check both complementary slackness equations.

    Feasibility is not part of this test; see :func:`check_feasibility`.

    Returns
    -------
    (bool, list of str)
        Flag and a description of each violated equation.
    """
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    report = []
    prim = theta * (p.b - p.A @ x)
    dual = x * (p.c - p.A.T @ theta)
    for i in np.nonzero(np.abs(prim) > tol)[0]:
        report.append(f"row {i}: theta*(b - Ax) = {prim[i]:.3g}")
    for j in np.nonzero(np.abs(dual) > tol)[0]:
        report.append(f"var {j}: x*(c - A'theta) = {dual[j]:.3g}")
    return not report, report


def check_feasibility(x, theta, p, tol=1e-8):
    """Primal feasibility of ``x`` and dual feasibility of ``theta``."""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    scale = 1.0 + np.abs(p.b).max(initial=0.0)
    primal = bool(np.all(x >= -tol) and np.all(np.abs(p.A @ x - p.b) <= tol * scale))
    dual = bool(np.all(p.A.T @ theta <= p.c + tol * (1.0 + np.abs(p.c))))
    return primal, dual
