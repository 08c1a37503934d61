"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` (bad input, a
violated precondition) and :class:`NumericalError` (a computation that
could not reach its accuracy target). The CLI maps them to exit codes 1
and 2 respectively.
"""


class SupershiftError(Exception):
    """Base class for all package errors."""


class ValidationError(SupershiftError, ValueError):
    """A precondition on the inputs is violated."""


class NumericalError(SupershiftError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""


class PoleError(ValidationError):
    """Gamma function evaluated at a nonpositive integer."""


class DomainError(ValidationError):
    """Argument outside the domain where the operation is defined."""


class SingularTimeError(DomainError):
    """Time too close to a singular time of a propagator."""


class MarginError(DomainError):
    """Evaluation grid too close to a singular set."""


class TruncationError(ValidationError):
    """Requested truncation order exceeds the supported limit."""


class GrowthViolationError(ValidationError):
    """An analytic factor grows faster than its declared budget."""


class CoefficientOverflowError(NumericalError, OverflowError):
    """Coefficients exceed the representable floating-point range."""


class CertificateOverflowError(NumericalError, OverflowError):
    """A growth certificate constant is not finite."""


class NonConvergenceError(NumericalError):
    """A series did not meet its tail bound within the term budget."""


class QuadratureError(NumericalError):
    """Successive quadrature refinements disagree beyond tolerance."""


class ExtrapolationError(NumericalError):
    """Richardson extrapolants failed to converge."""
