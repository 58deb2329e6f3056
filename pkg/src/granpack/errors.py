"""Exception hierarchy shared by all stages of the pipeline."""


class GranpackError(Exception):
    """Base class for every error raised by this package."""


# granulometry
class CurveError(GranpackError, ValueError):
    pass


class EmptyInput(CurveError):
    pass


class MalformedRow(CurveError):
    pass


class NonMonotone(CurveError):
    pass


class DuplicateDiameter(CurveError):
    pass


class IncompleteCurve(CurveError):
    """The largest sieve does not pass 100 % of the material."""


class DegenerateHistogram(GranpackError, ValueError):
    pass


class EmptySample(GranpackError, ValueError):
    pass


# distributions / special functions
class DomainError(GranpackError, ValueError):
    pass


class NonFinite(GranpackError, ArithmeticError):
    pass


class QuadratureFailure(GranpackError, ArithmeticError):
    pass


class RejectionStall(GranpackError, RuntimeError):
    pass


# fitting
class NonConvergence(GranpackError, RuntimeError):
    pass


class DegenerateSample(GranpackError, ValueError):
    pass


class TooFewSamples(GranpackError, ValueError):
    pass


class NoConvergedFit(GranpackError, RuntimeError):
    pass


# packing
class NonFiniteMoment(GranpackError, ArithmeticError):
    pass


class DomainTooSmall(UserWarning):
    """Even one mean-sized disk exceeds the solid-area budget of the domain."""


class FirstParticleFailed(GranpackError, RuntimeError):
    pass


class RadiiExhausted(GranpackError, RuntimeError):
    """All drawn radii were placed but the porosity is still above target.

    The partial packing is kept on the ``packing`` attribute.
    """

    def __init__(self, message, packing=None):
        super().__init__(message)
        self.packing = packing


class SchemaError(GranpackError, ValueError):
    pass
