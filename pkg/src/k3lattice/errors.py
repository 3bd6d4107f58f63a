"""Exception hierarchy.

The CLI maps these onto exit codes: invalid input 2, capacity 3,
theorem violation 4.
"""


class K3LatticeError(Exception):
    pass


class InvalidArgument(K3LatticeError, ValueError):
    pass


class NotFundamental(InvalidArgument):
    """Raised where a fundamental discriminant is required."""


class PreconditionError(InvalidArgument):
    pass


class SingularInput(InvalidArgument):
    pass


class CapacityError(K3LatticeError):
    """A bounded search or exhaustive check exceeded its cap."""


class TheoremViolation(K3LatticeError):
    """An internal consistency check failed.

    Every check raising this encodes a proven statement, so it signals an
    arithmetic bug rather than bad input.
    """


class ConstructionInvariantError(TheoremViolation):
    pass
