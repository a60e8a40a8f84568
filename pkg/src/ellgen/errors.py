"""Exception hierarchy shared by all ellgen modules."""


class EllgenError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EllgenError):
    """Input outside the mathematical domain (e.g. Im(tau) <= 0, division by zero)."""


class EvalError(EllgenError):
    """Numeric evaluation hit a pole or an underflowing denominator."""


class PrefactorError(EllgenError):
    """Series prefactors are incompatible for the requested operation."""


class NotInvertible(EllgenError):
    """The leading / constant coefficient is not a unit."""


class WindowError(EllgenError):
    """A requested coefficient lies outside the reliable truncation window."""


class CompositionError(EllgenError):
    """Series composition precondition violated (nonzero constant term, etc.)."""


class RankError(EllgenError):
    """Complete-intersection data with negative virtual dimension or wrong rank."""


class CertificateError(EllgenError):
    """A genus coefficient failed to reduce to a Laurent polynomial as required."""


class PreconditionError(EllgenError):
    """A stated hypothesis of a sector-sum formula does not hold for the inputs."""


class PoleCollisionError(PreconditionError):
    """Two twisted sectors of an orbifold sum share a pole."""

    def __init__(self, message, sectors=None):
        super().__init__(message)
        self.sectors = sectors


class TruncationError(EllgenError):
    """The q-truncation order cannot meet the requested tolerance at this |q|."""


class ParityWarning(UserWarning):
    """The parity hypothesis of an NS-sector formula fails; result is formal."""
