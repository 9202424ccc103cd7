"""Exception hierarchy shared across the package.

Two families matter for the CLI / HTTP layer: InvalidInputError maps to
exit code 2 (HTTP 400), NumericalError maps to exit code 3 (HTTP 500).
"""


class RotcmcError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(RotcmcError):
    """The request itself is malformed or outside the domain of validity."""


class DomainError(InvalidInputError):
    """Arguments violate a mathematical precondition (e.g. C < c_min(H))."""


class AxisError(InvalidInputError):
    """The rotation angle K is undefined on the axis hyperbola C = -1/H."""


class DegenerateIntervalError(InvalidInputError):
    """Integration endpoints coincide (isoparametric boundary C = c_min)."""


class SingularityError(InvalidInputError):
    """An integrand was evaluated at (or too close to) a genuine pole."""


class OutOfRangeError(InvalidInputError):
    """A solver target lies outside the attainable range of the function."""


class StraddleError(InvalidInputError):
    """A finite-difference stencil straddles the C = -1/H discontinuity."""


class DegenerateSegmentError(InvalidInputError):
    """Consecutive polyline samples coincide within 1e-14."""


class NumericalError(RotcmcError):
    """A numerical routine failed to produce a trustworthy result."""


class ConvergenceError(NumericalError):
    """An iterative scheme hit its budget before reaching tolerance."""


class PoleProximityError(NumericalError):
    """A quadrature interval endpoint sits within 1e-13 of a pole."""
