"""Exception hierarchy shared by every module.

Each exception carries a short machine-readable ``code`` and a ``context``
dict so the command line front end can serialize it without guessing.
"""


class EconNetError(Exception):
    """Base class for all domain errors raised by the toolkit."""

    code = "econnet_error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_record(self):
        return {"code": self.code, "message": self.message,
                "context": {k: _plain(v) for k, v in self.context.items()}}


def _plain(v):
    # numpy scalars/arrays -> builtins for json
    if hasattr(v, "tolist"):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


class InvalidArgument(EconNetError, ValueError):
    code = "invalid_argument"


class InvalidAdjacency(InvalidArgument):
    code = "invalid_adjacency"


class InvalidGraph(InvalidArgument):
    code = "invalid_graph"


class NumericalError(EconNetError, ArithmeticError):
    code = "numerical_error"


class NonConvergence(NumericalError):
    code = "non_convergence"


class SpectralRadiusError(EconNetError, ValueError):
    """Raised when an operation needs r(A) < 1 (or a scaled analogue)."""

    code = "spectral_radius"

    def __init__(self, message, radius=None, **context):
        super().__init__(message, radius=radius, **context)
        self.radius = radius


class AttenuationError(SpectralRadiusError):
    code = "attenuation"


class DegenerateInput(InvalidArgument):
    code = "degenerate_input"


class DegenerateInstance(DegenerateInput):
    code = "degenerate_instance"


class InsufficientData(InvalidArgument):
    code = "insufficient_data"


class NonUniqueStationary(EconNetError, ValueError):
    code = "non_unique_stationary"


class NoConsensusCertificate(EconNetError, ValueError):
    code = "no_consensus_certificate"


class DivisionByZero(EconNetError, ZeroDivisionError):
    code = "division_by_zero"


class MarginalMismatch(InvalidArgument):
    code = "marginal_mismatch"


class UnreachableDestination(EconNetError, ValueError):
    code = "unreachable_destination"


class InvalidNetwork(InvalidArgument):
    code = "invalid_network"


class InvalidCrossHoldings(InvalidArgument):
    code = "invalid_cross_holdings"


class ContractViolation(EconNetError, RuntimeError):
    code = "contract_violation"


class NonUniqueWarning(UserWarning):
    """Issued when a fixed point is returned without a uniqueness witness."""
