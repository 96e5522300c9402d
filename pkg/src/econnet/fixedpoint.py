"""Fixed-point engines: plain iteration, monotone iteration and certificates."""
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, InvalidArgument, NonConvergence
from .spectral import spectral_radius

CERTIFICATES = ("Contraction", "EventualContraction", "MonotoneBelow", "MonotoneAbove", "None")


@dataclass
class IterationResult:
    point: np.ndarray
    residual: float
    iterations: int
    certificate: str = "None"
    history: list = field(default_factory=list, repr=False)


def _norm(v, kind):
    if kind == "linf":
        return float(np.max(np.abs(v))) if v.size else 0.0
    if kind == "l1":
        return float(np.sum(np.abs(v)))
    if kind == "l2":
        return float(np.linalg.norm(v))
    raise InvalidArgument(f"unknown norm {kind!r}", allowed=["l1", "l2", "linf"])


def iterate(F, x0, norm="linf", tol=1e-10, max_iter=100_000, certificate="None",
            keep_history=False):
    """Successive approximation ``x_{k+1} = F(x_k)``.

    Stops at the first iterate ``x`` with ``||F(x) - x|| <= tol`` and
    returns that ``x``.

    Raises
    ------
    NonConvergence
        After ``max_iter`` steps, with the last residuals attached.
    """
    x = np.array(x0, dtype=float)
    hist = []
    for k in range(max_iter + 1):
        fx = np.asarray(F(x), dtype=float)
        res = _norm(fx - x, norm)
        hist.append(res)
        if res <= tol:
            return IterationResult(x, res, k, certificate, hist if keep_history else [])
        x = fx
    raise NonConvergence(f"no convergence in {max_iter} iterations (tol={tol})",
                         residual_tail=hist[-5:], iterations=max_iter)


def monotone_iterate(F, bound, direction="below", tol=1e-10, max_iter=100_000,
                     slack=1e-12):
    """Iterate an order-preserving map from an end of its order interval.

    From the lower end the iterates must rise and converge to the least
    fixed point; from the upper end they fall to the greatest one.  A step
    in the wrong direction by more than ``slack`` raises
    :class:`ContractViolation`.
    """
    if direction not in ("below", "above"):
        raise InvalidArgument("direction must be 'below' or 'above'", direction=direction)
    sign = 1.0 if direction == "below" else -1.0
    x = np.array(bound, dtype=float)
    for k in range(max_iter + 1):
        fx = np.asarray(F(x), dtype=float)
        step = sign * (fx - x)
        if np.any(step < -slack * (1.0 + np.abs(x))):
            i = int(np.argmin(step))
            raise ContractViolation("iterates are not monotone; map is not order preserving "
                                    "on this interval", iteration=k, index=i,
                                    before=float(x[i]), after=float(fx[i]))
        res = _norm(fx - x, "linf")
        if res <= tol:
            cert = "MonotoneBelow" if direction == "below" else "MonotoneAbove"
            return IterationResult(fx, res, k, cert)
        x = fx
    raise NonConvergence(f"monotone iteration did not converge in {max_iter} steps",
                         residual=res, iterations=max_iter)


def eventual_contraction_certificate(A, margin=1e-10):
    """``(r(A) < 1 - margin, r(A))`` for nonnegative ``A``.

    Any map with ``|F x - F y| <= A |x - y|`` is globally stable when the
    flag is true.
    """
    A = np.asarray(A, dtype=float)
    if np.any(A < 0):
        raise InvalidArgument("certificate needs a nonnegative matrix")
    r = spectral_radius(A)
    return bool(r < 1.0 - margin), r


@dataclass
class DuReport:
    ok: bool
    concave: bool
    lift_power: int
    violation: tuple = None


def du_certificate(F, a, b, probe_count=200, seed=0, tol=1e-12, return_report=False):
    """Sampled check of the hypotheses of Du's theorem on ``[a, b]``.

    Concavity is probed on ``probe_count`` random triples ``(x, y, lam)``;
    then ``G^k a >> a`` is searched for ``k <= n``.  The answer is a
    screening heuristic, not a proof.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    rng = np.random.Generator(np.random.Philox(seed))
    violation = None
    for _ in range(probe_count):
        x = a + rng.random(a.size) * (b - a)
        y = a + rng.random(a.size) * (b - a)
        lam = rng.random()
        lhs = np.asarray(F(lam * x + (1 - lam) * y), dtype=float)
        rhs = lam * np.asarray(F(x), dtype=float) + (1 - lam) * np.asarray(F(y), dtype=float)
        if np.any(lhs < rhs - tol * (1 + np.abs(rhs))):
            violation = (x, y, lam)
            break
    concave = violation is None
    lift = 0
    if concave:
        z = a.copy()
        for k in range(1, max(a.size, 1) + 1):
            z = np.asarray(F(z), dtype=float)
            if np.all(z > a):
                lift = k
                break
    ok = concave and lift > 0
    if return_report:
        return DuReport(ok, concave, lift, violation)
    return ok
