"""Exception hierarchy.

Domain errors (bad input, hypothesis failures, points outside the annulus)
derive from :class:`DomainViolation`; numerical breakdowns derive from
:class:`NumericalFailure`. The CLI maps the two families to exit codes 2 and 3.
"""


class MelnikovError(Exception):
    """Base class for all library errors."""


class DomainViolation(MelnikovError):
    pass


class NumericalFailure(MelnikovError):
    pass


class DegenerateZone(DomainViolation):
    """A zone has a^2 + b*c == 0 (or b == 0 where b is a divisor)."""


class HypothesisViolation(DomainViolation):
    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis


class NotASaddle(DomainViolation):
    pass


class OutOfAnnulus(DomainViolation):
    pass


class DomainError(DomainViolation):
    """Argument outside the domain of a basis function or Melnikov form."""


class QuadratureFailure(NumericalFailure):
    pass


class IllConditioned(NumericalFailure):
    pass


class SingularDesign(NumericalFailure):
    pass


class NonInvertibleConvention(NumericalFailure):
    pass


class SlidingDetected(NumericalFailure):
    pass


class StepFailure(NumericalFailure):
    pass


class OrbitEscaped(NumericalFailure):
    pass


class CycleNotFound(NumericalFailure):
    pass
