"""Exception hierarchy shared by every module."""


class WellsumError(Exception):
    pass


class DomainError(WellsumError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RouteError(WellsumError, ValueError):
    """Coefficient route not applicable to the requested state."""


class RangeError(WellsumError, IndexError):
    """Table or row index outside the printed range."""


class UnsupportedError(WellsumError):
    """Requested reduction is not available in closed form."""


class ConvergenceError(WellsumError, ArithmeticError):
    """A series or quadrature failed to reach the requested accuracy."""
