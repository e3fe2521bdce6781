"""Exact arithmetic in Q[sqrt(pi)].

Every closed form produced by this package is a finite sum of terms
``q * pi**(k/2)`` with rational ``q``.  :class:`ExactValue` is one such term and
:class:`ExactSum` a canonical sum of terms with distinct powers of pi.
Rationals are plain :class:`fractions.Fraction` objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from numbers import Rational
from typing import Iterable, Union

from .errors import DomainError

Number = Union[int, Fraction]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class ExactValue:
    """``coeff * pi**(pi_half_power / 2)``."""

    coeff: Fraction
    pi_half_power: int = 0

    def __post_init__(self):
        c = as_rational(self.coeff)
        object.__setattr__(self, "coeff", c)
        if c == 0:
            object.__setattr__(self, "pi_half_power", 0)

    @classmethod
    def pi_power(cls, k: Number) -> "ExactValue":
        """``pi**k`` for integer or half-integer ``k``."""
        k2 = as_rational(k) * 2
        if k2.denominator != 1:
            raise DomainError(f"pi power must be a multiple of 1/2, got {k}")
        return cls(Fraction(1), int(k2))

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other):
        if isinstance(other, ExactSum):
            return ExactSum.of(self) * other
        if isinstance(other, ExactValue):
            return ExactValue(self.coeff * other.coeff, self.pi_half_power + other.pi_half_power)
        if isinstance(other, (int, Fraction)):
            return ExactValue(self.coeff * other, self.pi_half_power)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ExactValue):
            if other.is_zero:
                raise ZeroDivisionError("division by exact zero")
            return ExactValue(self.coeff / other.coeff, self.pi_half_power - other.pi_half_power)
        if isinstance(other, (int, Fraction)):
            return ExactValue(self.coeff / other, self.pi_half_power)
        if isinstance(other, ExactSum):
            return ExactSum.of(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return ExactValue(other) / self
        return NotImplemented

    def __neg__(self):
        return ExactValue(-self.coeff, self.pi_half_power)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ExactValue(1) / self ** (-k)
        return ExactValue(self.coeff**k, self.pi_half_power * k)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactValue(other)
        if isinstance(other, ExactSum):
            return ExactSum.of(self) + other
        if not isinstance(other, ExactValue):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.pi_half_power != other.pi_half_power:
            raise DomainError(
                "cannot add ExactValues with different pi powers "
                f"({self.pi_half_power}/2 vs {other.pi_half_power}/2); use ExactSum"
            )
        return ExactValue(self.coeff + other.coeff, self.pi_half_power)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __str__(self) -> str:
        return _format_term(self, leading=True)


def _format_term(v: ExactValue, leading: bool) -> str:
    c = v.coeff
    sign = "-" if c < 0 else ("" if leading else "+")
    c = abs(c)
    k = v.pi_half_power
    if k == 0:
        body = str(c)
    else:
        if k % 2 == 0:
            exp = k // 2
            pi = "pi" if abs(exp) == 1 else f"pi^{abs(exp)}"
        else:
            pi = f"pi^({abs(k)}/2)"
        num = c.numerator
        den = c.denominator
        if k > 0:
            top = pi if num == 1 else f"{num}*{pi}"
            body = top if den == 1 else f"{top}/{den}"
        else:
            bottom = pi if den == 1 else f"{den}*{pi}"
            body = f"{num}/({bottom})" if den != 1 else f"{num}/{bottom}"
    if leading:
        return f"{sign}{body}"
    return f" {sign} {body}"


class ExactSum:
    """Canonical sum of :class:`ExactValue` terms with distinct pi powers."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[ExactValue] = ()):
        acc: dict[int, Fraction] = {}
        for t in terms:
            if isinstance(t, (int, Fraction)):
                t = ExactValue(t)
            if t.is_zero:
                continue
            acc[t.pi_half_power] = acc.get(t.pi_half_power, Fraction(0)) + t.coeff
        self.terms: tuple[ExactValue, ...] = tuple(
            ExactValue(c, k) for k, c in sorted(acc.items()) if c != 0
        )

    @classmethod
    def of(cls, *values) -> "ExactSum":
        return cls(values)

    @classmethod
    def coerce(cls, v) -> "ExactSum":
        if isinstance(v, ExactSum):
            return v
        return cls.of(v)

    def canonical(self) -> "ExactSum":
        return ExactSum(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def single(self) -> ExactValue:
        """The only term; raises if the sum has more than one."""
        if not self.terms:
            return ExactValue(0)
        if len(self.terms) > 1:
            raise DomainError(f"{self} is not a single pi-power term")
        return self.terms[0]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (ExactValue, int, Fraction)):
            other = ExactSum.of(other)
        if not isinstance(other, ExactSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        if isinstance(other, (ExactValue, int, Fraction)):
            other = ExactSum.of(other)
        if not isinstance(other, ExactSum):
            return NotImplemented
        return ExactSum(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ExactSum(-t for t in self.terms)

    def __sub__(self, other):
        if isinstance(other, (ExactValue, int, Fraction)):
            other = ExactSum.of(other)
        if not isinstance(other, ExactSum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (ExactValue, int, Fraction)):
            other = ExactSum.of(other)
        if not isinstance(other, ExactSum):
            return NotImplemented
        return ExactSum(a * b for a in self.terms for b in other.terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ExactSum):
            other = other.single()
        if isinstance(other, (int, Fraction)):
            other = ExactValue(other)
        if not isinstance(other, ExactValue):
            return NotImplemented
        return ExactSum(t / other for t in self.terms)

    def __repr__(self):
        return f"ExactSum({list(self.terms)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        # descending pi power reads like the printed tables: 1/3 - pi^2/32
        ordered = sorted(self.terms, key=lambda t: t.pi_half_power)
        out = _format_term(ordered[0], leading=True)
        for t in ordered[1:]:
            out += _format_term(t, leading=False)
        return out

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"num": str(t.coeff.numerator), "den": str(t.coeff.denominator), "pi_half_power": t.pi_half_power}
                for t in self.terms
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ExactSum":
        return cls(
            ExactValue(Fraction(int(t["num"]), int(t["den"])), int(t["pi_half_power"])) for t in d["terms"]
        )

    @classmethod
    def from_json(cls, s: str) -> "ExactSum":
        return cls.from_dict(json.loads(s))


def _check_gamma_arg(z: Fraction) -> None:
    if z <= 0 or z.denominator not in (1, 2):
        raise DomainError(f"exact gamma needs a positive integer or half-integer, got {z}")


def gamma_exact(z) -> ExactValue:
    """Gamma at a positive integer or half-integer."""
    z = as_rational(z)
    _check_gamma_arg(z)
    if z.denominator == 1:
        return ExactValue(factorial(int(z) - 1))
    m = int(z - Fraction(1, 2))
    return ExactValue(Fraction(factorial(2 * m), 4**m * factorial(m)), 1)


def beta_exact(a, b) -> ExactValue:
    a, b = as_rational(a), as_rational(b)
    return gamma_exact(a) * gamma_exact(b) / gamma_exact(a + b)


def pochhammer_exact(a, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``."""
    if k < 0:
        raise DomainError("pochhammer index must be non-negative")
    a = as_rational(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def exact_to_float(v, ctx):
    """Numeric value of an ExactValue/ExactSum at the precision of ``ctx``."""
    mp = ctx.mp
    s = ExactSum.coerce(v)
    with mp.workprec(mp.prec + 24):
        total = mp.zero
        for t in s.terms:
            k = t.pi_half_power
            pi_part = mp.pi ** (k // 2) if k % 2 == 0 else mp.sqrt(mp.pi) ** k
            total += mp.mpf(t.coeff.numerator) / t.coeff.denominator * pi_part
    return +total
