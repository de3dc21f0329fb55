"""Exception hierarchy.

CLI exit codes hang off three families: ``ValidationError`` (2),
``PrecisionUnreachable`` (3) and ``UnsupportedShape`` (4).
"""


class KleinTraceError(Exception):
    """Base class for all package errors."""


class ValidationError(KleinTraceError, ValueError):
    """Input data violates a documented precondition."""


class PrecisionUnreachable(KleinTraceError):
    """Adaptive refinement or precision escalation exceeded its budget."""


class UnsupportedShape(KleinTraceError):
    """The quantization polynomial is outside the implemented families."""


class UnpairedBoundaryRoot(ValidationError):
    pass


class RealityViolated(ValidationError):
    pass


class NonRealCoefficients(ValidationError):
    pass


class DegreeTooHigh(ValidationError):
    pass


class MissingVanishingAtZero(ValidationError):
    pass


class NonIntegrable(ValidationError):
    pass


class AtomOffAxis(ValidationError):
    pass


class AtomNotAtBoundaryRoot(ValidationError):
    pass


class EvaluationAtPole(ValidationError):
    pass


class SampleAtPole(ValidationError):
    pass


class InsufficientMoments(ValidationError):
    pass


class DegenerateTrace(KleinTraceError):
    """A Gram determinant vanishes: the trace form is degenerate."""


class DegeneratePade(DegenerateTrace):
    pass


class ZeroNorm(DegenerateTrace):
    pass


class SingularStep(KleinTraceError):
    """A discrete Painleve step hit a (near) singular denominator."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
