"""Spectral radius, dominant eigenpairs, Neumann series and matrix norms.

No general eigensolver is used.  The spectral radius comes from Gelfand's
formula evaluated by repeated squaring, which handles complex and
defective spectra alike; dominant eigenpairs of nonnegative matrices come
from power iteration.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NumericalError, SpectralRadiusError
from .graphcore import as_matrix

TOL = 1e-10
MAX_ITER = 100_000
NORM_KINDS = ("frobenius", "operator", "l1", "linf")


@dataclass(frozen=True)
class DominantEigenpair:
    """Perron root with right (``right``) and left (``left``) eigenvectors.

    ``right`` sums to one and ``left`` is scaled so that ``left @ right == 1``.
    """

    radius: float
    right: np.ndarray
    left: np.ndarray
    iterations: int = 0


def _entry_l1(A):
    return float(np.abs(A).sum())


def spectral_radius(A, tol=1e-13, max_iter=200):
    """Spectral radius of a real square matrix.

    Uses ``log ||A^(2^j)||_1 / 2^j`` (entrywise l1 norm), tracked in log
    space with renormalization after every squaring.  The error after ``j``
    squarings is of order ``log(K) / 2^j`` for a constant ``K`` depending on
    the eigenvector conditioning, so convergence is geometric.

    Parameters
    ----------
    A : array_like
        Square real matrix.
    tol : float
        Relative change between successive estimates that ends iteration.
    max_iter : int
        Maximum number of squarings.

    Returns
    -------
    float
    """
    A = as_matrix(A)
    if A.size == 0:
        return 0.0
    nrm = _entry_l1(A)
    if nrm == 0.0:
        return 0.0
    B = A / nrm
    logn = np.log(nrm)          # log ||A^(2^j)||
    scale = 1.0                 # 2^j
    prev = np.exp(logn)
    for j in range(1, max_iter + 1):
        B = B @ B
        c = _entry_l1(B)
        if c == 0.0 or not np.isfinite(c):
            if c == 0.0:
                return 0.0      # nilpotent
            raise NumericalError("overflow while squaring; rescale the input", iterations=j)
        B /= c
        logn = 2.0 * logn + np.log(c)
        scale *= 2.0
        est = np.exp(logn / scale)
        if j >= 6 and abs(est - prev) <= tol * max(est, 1e-300):
            return float(est)
        prev = est
    raise NumericalError(
        f"spectral radius did not converge after {max_iter} squarings (tol={tol})",
        iterations=max_iter)


def spectral_radius_bounds(A):
    """Row- and column-sum bounds on the spectral radius of ``A >= 0``.

    Returns
    -------
    (float, float)
        ``max(min row sum, min col sum) <= r(A) <= min(max row sum, max col sum)``.
    """
    A = as_matrix(A)
    if np.any(A < 0):
        raise InvalidArgument("row/column-sum bounds need a nonnegative matrix")
    if A.size == 0:
        return 0.0, 0.0
    rs, cs = A.sum(axis=1), A.sum(axis=0)
    return float(max(rs.min(), cs.min())), float(min(rs.max(), cs.max()))


def matrix_norm(A, kind="frobenius"):
    """Matrix norm of the given kind.

    ``l1`` is the entrywise absolute sum, ``linf`` the entrywise absolute
    maximum, ``operator`` is ``sqrt(r(A^T A))``.
    """
    A = np.asarray(A, dtype=float)
    if kind == "frobenius":
        return float(np.sqrt((A * A).sum()))
    if kind == "operator":
        return float(np.sqrt(spectral_radius(A.T @ A))) if A.size else 0.0
    if kind == "l1":
        return float(np.abs(A).sum())
    if kind == "linf":
        return float(np.abs(A).max()) if A.size else 0.0
    raise InvalidArgument(f"unknown norm kind {kind!r}", allowed=list(NORM_KINDS))


def gelfand_estimate(A, norm="l1", k=100):
    """Sequence ``||A^j||^(1/j)`` for ``j = 1..k``.

    Powers are renormalized as they are formed, so only genuine overflow of
    the logarithm raises.
    """
    A = as_matrix(A)
    if k < 1:
        raise InvalidArgument("k must be at least 1", k=k)
    out = np.empty(k)
    P = np.eye(A.shape[0])
    logscale = 0.0
    for j in range(1, k + 1):
        P = P @ A
        s = matrix_norm(P, norm)
        if s == 0.0:
            out[j - 1:] = 0.0
            break
        if not np.isfinite(s):
            raise NumericalError("overflow in matrix powers; rescale the input", power=j)
        P /= s
        logscale += np.log(s)
        out[j - 1] = np.exp(logscale / j)
    return out


def _power(M, tol, max_iter, x0=None):
    n = M.shape[0]
    x = np.full(n, 1.0 / n) if x0 is None else x0 / x0.sum()
    prev2 = None
    for t in range(1, max_iter + 1):
        y = M @ x
        s = y.sum()
        if s <= 0:
            raise NumericalError("power iteration collapsed to zero (nilpotent part)",
                                 iterations=t)
        y /= s
        r = s  # since x sums to one
        if np.max(np.abs(M @ y - r * y)) <= tol * max(1.0, r):
            return r, y, t
        # period-2 detection: x_{t+1} ~ x_{t-1} while x_{t+1} far from x_t
        if prev2 is not None and t > 50 and np.max(np.abs(y - prev2)) <= tol \
                and np.max(np.abs(y - x)) > 1e3 * tol:
            raise NumericalError("power iteration oscillates; input looks imprimitive",
                                 iterations=t, tol=tol)
        prev2, x = x, y
    raise NumericalError(
        f"power iteration did not converge in {max_iter} steps (tol={tol})",
        iterations=max_iter, tol=tol)


def dominant_eigenpair(A, tol=TOL, max_iter=MAX_ITER):
    """Perron root and eigenvectors of a nonnegative matrix by power iteration.

    Convergence is guaranteed for primitive ``A``.  Iterates are l1
    normalized and period-two oscillation is reported as an error.
    """
    A = as_matrix(A)
    if np.any(A < 0):
        raise InvalidArgument("dominant_eigenpair needs a nonnegative matrix")
    r, e, it1 = _power(A, tol, max_iter)
    _, eps, it2 = _power(A.T, tol, max_iter)
    scale = 1.0 / (eps @ e)
    if scale > 1.0:
        # the rescaling below magnifies the residual; tighten accordingly
        _, eps, it3 = _power(A.T, tol / scale, max_iter, eps)
        it2 += it3
    eps = eps / (eps @ e)
    return DominantEigenpair(float(r), e, eps, it1 + it2)


def perron_projection(pair):
    """Rank-one projection ``e eps^T``."""
    return np.outer(pair.right, pair.left)


def _direct_inverse(IA):
    try:
        return np.linalg.solve(IA, np.eye(IA.shape[0]))
    except np.linalg.LinAlgError as exc:
        raise NumericalError("I - A is numerically singular") from exc


def _check_radius(A, what):
    r = spectral_radius(A)
    if not r < 1.0:
        raise SpectralRadiusError(f"{what} needs r(A) < 1, got r(A) = {r:.17g}", radius=r)
    return r


def neumann_inverse(A, tol=TOL, max_terms=MAX_ITER):
    """``(I - A)^{-1}`` as a truncated Neumann series.

    The series is summed while the induced max-row-sum norm ``q = ||A||``
    is below one and the tail bound ``||A^m|| / (1 - q)`` exceeds ``tol``.
    When ``q >= 1`` (the series still converges since ``r(A) < 1``, but no
    cheap a-posteriori bound exists) a direct solve is used instead.  The
    result is polished by one residual correction and checked.
    """
    A = as_matrix(A)
    _check_radius(A, "neumann_inverse")
    n = A.shape[0]
    I = np.eye(n)
    q = np.abs(A).sum(axis=1).max() if n else 0.0
    if q < 1.0:
        S = I.copy()
        P = I.copy()
        for _ in range(max_terms):
            P = P @ A
            S += P
            if np.abs(P).sum(axis=1).max() * q / (1.0 - q) <= tol * 0.1:
                break
    else:
        S = _direct_inverse(I - A)
    R = I - (I - A) @ S
    S = S + S @ R
    res = np.abs((I - A) @ S - I).max() if n else 0.0
    if res > tol:
        S = _direct_inverse(I - A)
        res = np.abs((I - A) @ S - I).max()
        if res > tol * max(1.0, np.abs(S).max()):
            raise NumericalError("Neumann inverse residual above tolerance",
                                 residual=float(res), tol=tol)
    return S


def solve_neumann(A, b, tol=TOL):
    """Unique solution of ``x = A x + b`` when ``r(A) < 1``."""
    A = as_matrix(A)
    b = np.asarray(b, dtype=float)
    if b.shape != (A.shape[0],):
        raise InvalidArgument("b has the wrong length", expected=A.shape[0], got=list(b.shape))
    _check_radius(A, "solve_neumann")
    x = np.linalg.solve(np.eye(A.shape[0]) - A, b)
    # one step of iterative refinement
    x = x + np.linalg.solve(np.eye(A.shape[0]) - A, b - (x - A @ x))
    if np.all(A >= 0) and np.all(b >= 0):
        x = np.maximum(x, 0.0)
    return x


def local_spectral_radius(A, x, m):
    """``||A^m x||^(1/m)`` (Euclidean norm) for nonnegative ``A`` and ``x >> 0``."""
    A = as_matrix(A)
    x = np.asarray(x, dtype=float)
    if m < 1:
        raise InvalidArgument("m must be at least 1", m=m)
    if x.shape != (A.shape[0],) or np.any(x <= 0):
        raise InvalidArgument("x must be strictly positive with matching length")
    y = x.copy()
    logscale = 0.0
    for _ in range(m):
        y = A @ y
        s = np.linalg.norm(y)
        if s == 0.0:
            return 0.0
        y /= s
        logscale += np.log(s)
    return float(np.exp(logscale / m))


def is_weakly_chained_substochastic(P, tol=1e-12):
    """True iff ``P`` is substochastic and every row index reaches a deficient row.

    A row is deficient when its sum is below one.  For substochastic ``P``
    this is equivalent to ``r(P) < 1``.
    """
    from .graphcore import from_adjacency, reachable_from
    P = as_matrix(P, "P")
    if np.any(P < 0):
        return False
    rs = P.sum(axis=1)
    if np.any(rs > 1.0 + tol):
        return False
    deficient = np.flatnonzero(rs < 1.0 - tol)
    if deficient.size == 0:
        return False
    back = reachable_from(from_adjacency(P).reversed(), deficient.tolist())
    return bool(np.all(back))
