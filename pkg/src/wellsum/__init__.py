"""wellsum: closed-form Bessel and hypergeometric series from the infinite well."""

from .errors import ConvergenceError, DomainError, RangeError, RouteError, UnsupportedError, WellsumError
from .exactval import ExactSum, ExactValue, beta_exact, exact_to_float, gamma_exact, pochhammer_exact
from .specfun import PrecisionContext

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "ExactSum",
    "ExactValue",
    "PrecisionContext",
    "RangeError",
    "RouteError",
    "UnsupportedError",
    "WellsumError",
    "beta_exact",
    "exact_to_float",
    "gamma_exact",
    "pochhammer_exact",
]
