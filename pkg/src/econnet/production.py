"""Input-output analysis: Leontief and Ghosh matrices, shocks, multipliers,
Domar weights, constrained production and a quadratic network game."""
import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .centrality import katz_centrality
from .errors import (DivisionByZero, InvalidArgument, NonUniqueWarning, NumericalError,
                     SpectralRadiusError)
from .fixedpoint import monotone_iterate
from .graphcore import as_matrix
from .spectral import neumann_inverse, solve_neumann, spectral_radius

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IOTable:
    """Inter-industry sales ``Z``, total sales ``x`` and final demand ``d``.

    ``Z[i, j]`` is the value of sector i's output sold to sector j.
    """

    Z: np.ndarray
    x: np.ndarray
    d: np.ndarray = None
    sectors: tuple = None
    rtol: float = 1e-6

    def __post_init__(self):
        Z = as_matrix(self.Z, "Z")
        x = np.asarray(self.x, dtype=float)
        if np.any(Z < 0):
            raise InvalidArgument("Z must be nonnegative")
        if x.shape != (Z.shape[0],) or np.any(x < 0):
            raise InvalidArgument("x must be a nonnegative vector matching Z")
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "x", x)
        if self.d is not None:
            d = np.asarray(self.d, dtype=float)
            if d.shape != x.shape:
                raise InvalidArgument("d must match x in length")
            gap = np.abs(Z.sum(axis=1) + d - x)
            if np.any(gap > self.rtol * np.maximum(1.0, np.abs(x))):
                i = int(np.argmax(gap))
                raise InvalidArgument("accounting identity x = Z 1 + d fails",
                                      sector=i, gap=float(gap[i]))
            object.__setattr__(self, "d", d)
        if self.sectors is not None:
            object.__setattr__(self, "sectors", tuple(self.sectors))

    @property
    def value_added(self):
        return self.x - self.Z.sum(axis=0)

    @classmethod
    def from_dict(cls, rec):
        return cls(rec["Z"], rec["x"], rec.get("d"), rec.get("sectors"))


@dataclass(frozen=True)
class IOCoefficients:
    A: np.ndarray
    eta: np.ndarray
    kept: np.ndarray


def _drop_empty(t):
    Z, x = t.Z, t.x
    empty = (x == 0) & (Z.sum(axis=0) == 0) & (Z.sum(axis=1) == 0)
    kept = np.flatnonzero(~empty)
    if empty.any():
        log.info("dropping empty sectors %s", np.flatnonzero(empty).tolist())
    return Z[np.ix_(kept, kept)], x[kept], kept


def io_coefficients(t):
    """``a_ij = z_ij / x_j`` with column sums ``eta``.

    Empty sectors (zero output, no sales, no purchases) are dropped;
    ``kept`` maps the rows of ``A`` back to the table.
    """
    Z, x, kept = _drop_empty(t)
    zero = np.flatnonzero(x == 0)
    if zero.size:
        raise DivisionByZero("sector with zero output has nonzero purchases or sales",
                             sector=int(kept[zero[0]]))
    A = Z / x[None, :]
    return IOCoefficients(A, A.sum(axis=0), kept)


def ghosh_matrix(t):
    """``f_ij = z_ij / x_i``: allocation per dollar of the selling sector."""
    Z, x, kept = _drop_empty(t)
    zero = np.flatnonzero(x == 0)
    if zero.size:
        raise DivisionByZero("sector with zero output has nonzero purchases or sales",
                             sector=int(kept[zero[0]]))
    return Z / x[:, None]


def leontief_inverse(A, tol=1e-10):
    return neumann_inverse(A, tol)


def equilibrium_output(A, d):
    """Unique solution of ``x = A x + d``; requires ``r(A) < 1``."""
    return solve_neumann(A, d)


def shock_rounds(A, dd, k):
    """``[dd, A dd, ..., A^k dd]`` as a ``(k+1, n)`` array."""
    A = as_matrix(A)
    if k < 0:
        raise InvalidArgument("k must be nonnegative", k=k)
    out = np.empty((int(k) + 1, A.shape[0]))
    v = np.asarray(dd, dtype=float)
    for m in range(int(k) + 1):
        out[m] = v
        v = A @ v
    return out


def _radius_lt_one(A, what):
    r = spectral_radius(A)
    if not r < 1.0:
        raise SpectralRadiusError(f"{what} needs r(A) < 1, got {r:.17g}", radius=r)


def output_multipliers(A):
    """Column sums of the Leontief inverse, ``mu' = 1' (I - A)^{-1}``."""
    A = as_matrix(A)
    _radius_lt_one(A, "output_multipliers")
    return katz_centrality(A, 1.0, "authority").values


def upstreamness(F):
    """Solution of ``u = 1 + F u`` for a Ghosh matrix ``F``."""
    F = as_matrix(F, "F")
    _radius_lt_one(F, "upstreamness")
    return katz_centrality(F, 1.0, "hub").values


def domar_weights(A, n=None):
    """``h = L 1 / n``, sector sales relative to GDP in the CRS model."""
    A = as_matrix(A)
    _radius_lt_one(A, "domar_weights")
    n = A.shape[0] if n is None else n
    return solve_neumann(A, np.ones(A.shape[0])) / n


def aggregate_volatility(h, sigma):
    """``sigma * ||h||_2``."""
    if sigma < 0:
        raise InvalidArgument("sigma must be nonnegative", sigma=sigma)
    return float(sigma * np.linalg.norm(np.asarray(h, dtype=float)))


@dataclass
class ConstrainedEquilibrium:
    x: np.ndarray
    certificate: str
    unique: bool
    upper: np.ndarray = None
    iterations: int = 0


def constrained_equilibrium(A, d, xbar, tol=1e-12, both=False, max_iter=1_000_000):
    """Fixed point of ``G x = (A x + d) ^ xbar`` on ``[0, xbar]``.

    Iteration starts at zero and rises to the least fixed point.  The
    result is unique if ``r(A) < 1`` (``SpectralRadius``) or if ``d >> 0``
    and ``xbar >> 0`` (``Du``).  With ``both=True`` the greatest fixed point
    is computed from ``xbar`` as well and equality of the two is reported
    as the ``Bracket`` witness.  Without any witness a
    :class:`NonUniqueWarning` is issued.
    """
    A = as_matrix(A)
    d = np.asarray(d, dtype=float)
    xbar = np.asarray(xbar, dtype=float)
    if np.any(A < 0) or np.any(d < 0) or np.any(xbar < 0):
        raise InvalidArgument("A, d and xbar must be nonnegative")

    def G(x):
        return np.minimum(A @ x + d, xbar)

    low = monotone_iterate(G, np.zeros_like(d), "below", tol, max_iter)
    cert = "None"
    if spectral_radius(A) < 1.0:
        cert = "SpectralRadius"
    elif np.all(d > 0) and np.all(xbar > 0):
        cert = "Du"
    upper = None
    if both:
        upper = monotone_iterate(G, xbar, "above", tol, max_iter).point
        if cert == "None" and np.max(np.abs(upper - low.point)) <= 10 * tol * (1 + xbar.max()):
            cert = "Bracket"
    unique = cert != "None"
    if not unique:
        warnings.warn("no uniqueness witness; returning the least fixed point",
                      NonUniqueWarning, stacklevel=2)
    return ConstrainedEquilibrium(low.point, cert, unique, upper, low.iterations)


def quadratic_game_nash(A, alpha, eps):
    """Nash equilibrium ``x* = (I - alpha A)^{-1} eps`` of the quadratic game."""
    A = as_matrix(A)
    if not np.allclose(A, A.T, rtol=0, atol=1e-12) or np.any(np.diag(A) != 0):
        raise InvalidArgument("A must be symmetric with zero diagonal")
    r = spectral_radius(A)
    if not alpha * r < 1.0:
        raise SpectralRadiusError(f"need r(A) < 1/alpha, got r(A) = {r:.17g}", radius=r,
                                  alpha=alpha)
    n = A.shape[0]
    M = np.eye(n) - alpha * A
    x = np.linalg.solve(M, np.asarray(eps, dtype=float))
    return x + np.linalg.solve(M, np.asarray(eps, dtype=float) - M @ x)


def crs_spectral_check(A, tol=1e-6, sum_tol=1e-10):
    """Spectral radius of a matrix whose columns all sum to ``1 - alpha``.

    Raises if the columns are not constant or if ``r(A)`` differs from the
    common column sum by more than ``tol``.
    """
    A = as_matrix(A)
    cs = A.sum(axis=0)
    if cs.size and np.ptp(cs) > sum_tol:
        raise InvalidArgument("column sums are not constant", spread=float(np.ptp(cs)))
    r = spectral_radius(A)
    target = float(cs[0]) if cs.size else 0.0
    if abs(r - target) > tol:
        raise NumericalError("r(A) differs from the common column sum",
                             radius=r, column_sum=target)
    return r
