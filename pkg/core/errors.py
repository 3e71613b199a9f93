"""Exception hierarchy for SemiLab.

Every error raised by the library derives from :class:`SemilabError`, so the
CLI can map any library failure to its configuration/input exit code.
"""


class SemilabError(Exception):
    """Base class for all SemiLab errors."""


class DimensionMismatch(SemilabError, ValueError):
    """Operands live in finite sections of different dimension."""


class DimensionTooSmall(SemilabError, ValueError):
    """A construction needs a larger truncation dimension."""


class DimensionTooLarge(SemilabError, ValueError):
    """A dense solver was asked to exceed its configured dimension cap."""


class NotUnitVector(SemilabError, ValueError):
    """A vector (or functional) that must have norm one does not."""


class ZeroVector(SemilabError, ValueError):
    """A nonzero vector was required."""


class NegativeTime(SemilabError, ValueError):
    """Semigroups are only evaluated at t >= 0."""


class StructureMismatch(SemilabError, ValueError):
    """Matrix entries contradict the declared structure hint."""


class LengthMismatch(SemilabError, ValueError):
    """Parameter lists that must align have different lengths."""


class InvalidParameter(SemilabError, ValueError):
    """A scalar parameter is outside its admissible range."""


class UnsupportedSpace(SemilabError, ValueError):
    """The operation is not defined for the given sequence space."""


class ConvergenceFailure(SemilabError, ArithmeticError):
    """An iterative or dense solver failed to reach its tolerance."""


class UnwrapAliasing(SemilabError, ArithmeticError):
    """Adjacent phase samples are too far apart to unwrap unambiguously."""


class NoAdmissiblePrefix(SemilabError, ArithmeticError):
    """Even the first grid point violates the small-time off-diagonal bound."""


class ConfigurationError(SemilabError, ValueError):
    """A run configuration (file, flags or environment) is invalid."""


class UnknownScenario(ConfigurationError):
    """The requested scenario name is not registered."""


class InvalidGrid(ConfigurationError):
    """A time grid is malformed or too coarse for the requested analysis."""


class IoFailure(SemilabError, OSError):
    """Reports could not be written."""
