"""Exception types raised across the package."""


class NonInvertible(ArithmeticError):
    """A negative power or substitution needs the inverse of a non-monomial."""


class DivisionNotExact(ArithmeticError):
    """Exact polynomial division left a remainder."""


class UnknownIdentity(KeyError):
    pass


class MismatchedTables(ValueError):
    pass


class FactorizationFailed(ValueError):
    """An operator-valued coefficient lacks the expected single exponential factor."""


class EmptySafeRange(ValueError):
    """Truncation leaves no basis state on which an identity can be checked."""


class SingularSystem(ArithmeticError):
    pass


class InconsistentSystem(ArithmeticError):
    """The oracle's overdetermined equations disagree with the fitted coefficients."""
