"""Exception types shared across the package."""


class PolyprismError(Exception):
    """Base class for all package errors."""


class ZeroValue(PolyprismError):
    """An operation received a zero value where a nonzero one is required."""


class NotCovered(PolyprismError):
    """A value does not factor over the supplied coprime basis."""


class PoleAtPoint(PolyprismError):
    """Evaluation point is a pole of the rational function."""


class ExceptionalValue(PolyprismError):
    """A field value hit {0, 1}, where the polylogarithmic generators are undefined."""


class DegenerateConfiguration(PolyprismError):
    """A determinant needed by a map vanished on this configuration."""


class NotCrossRatioShape(PolyprismError):
    """The multiplicative element is not a cross-ratio monomial; the Pluecker
    one-minus rewrite does not apply and the caller must fall back to an
    instance-level backend."""


class KeyDomainMismatch(PolyprismError):
    """Two group elements with different key domains were combined."""


class RetryLimitExceeded(PolyprismError):
    """Random generation failed to produce a generic object within the budget."""


class BranchCutInput(PolyprismError):
    """Polylogarithm argument lies on the principal branch cut."""


class BackendInadmissible(PolyprismError):
    """The requested backend cannot check this face."""


class DegenerateTrial(PolyprismError):
    """A random trial produced a degenerate configuration and must be resampled."""


class NoConsistentAssignment(PolyprismError):
    """The sign audit found no convention under which all exact faces commute."""
