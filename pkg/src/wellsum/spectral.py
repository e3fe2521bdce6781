"""States psi(x) = C x^alpha (1-x)^beta of the infinite well on [0, 1].

The sine eigenbasis is ``sqrt(2) sin(n pi x)`` with energies ``n^2 pi^2``.
Expansion coefficients come from three independent routes:

* ``BesselEqual`` (alpha = beta half-integer): the Poisson integral gives
  ``C_n = sqrt(2/K) sqrt(pi) Gamma(alpha+1) (n pi)^(-alpha-1/2) sin(n pi/2) J_(alpha+1/2)(n pi/2)``;
* ``Hypergeometric``: ``C_n = sqrt(2/K) I(n pi)`` with
  ``I(b) = b B(alpha+2, beta+1) 2F3(...; -b^2/4)``;
* ``Quadrature``: the coefficient integral itself, by tanh-sinh.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

from . import formulas
from .errors import DomainError, RouteError
from .exactval import ExactValue, as_rational, beta_exact, exact_to_float
from .specfun import Integrand, PrecisionContext, bessel_j, gamma_real, pfq, quadrature

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class WaveState:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = as_rational(self.alpha), as_rational(self.beta)
        if a < HALF or b < HALF:
            raise DomainError(f"states need alpha, beta >= 1/2, got ({a}, {b})")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def exact(self) -> bool:
        """True when alpha and beta are integers or half-integers."""
        return self.alpha.denominator in (1, 2) and self.beta.denominator in (1, 2)

    def reflected(self) -> "WaveState":
        return WaveState(self.beta, self.alpha)

    def __str__(self):
        return f"({self.alpha}, {self.beta})"


class CoeffRoute(enum.Enum):
    BESSEL_EQUAL = "BesselEqual"
    HYPERGEOMETRIC = "Hypergeometric"
    QUADRATURE = "Quadrature"

    @classmethod
    def parse(cls, text: str) -> "CoeffRoute":
        key = text.replace("-", "").replace("_", "").lower()
        for r in cls:
            if r.value.lower() == key or r.name.replace("_", "").lower() == key:
                return r
        raise RouteError(f"unknown coefficient route {text!r}")


def _as_state(s) -> WaveState:
    return s if isinstance(s, WaveState) else WaveState(*s)


def normalization_constant(s) -> ExactValue:
    """``C^2 = 1/K = 1/B(2 alpha+1, 2 beta+1)``, exactly."""
    s = _as_state(s)
    if not s.exact:
        raise DomainError(f"{s} has no exact normalization; use normalization_numeric")
    return ExactValue(1) / formulas.normalization_K(s.alpha, s.beta)


def _gamma_ratio_beta(a, b, ctx):
    g = lambda x: gamma_real(x, ctx)
    return g(a) * g(b) / g(a + b)


def normalization_numeric(s, ctx: PrecisionContext):
    """``1/K`` for any rational state."""
    s = _as_state(s)
    mp = ctx.mp
    if s.exact:
        return exact_to_float(normalization_constant(s), ctx)
    a, b = ctx.mpf(s.alpha), ctx.mpf(s.beta)
    with mp.workprec(ctx.precision_bits + 16):
        out = 1 / _gamma_ratio_beta(2 * a + 1, 2 * b + 1, ctx)
    return +out


def _sqrt_two_over_K(s: WaveState, ctx: PrecisionContext):
    return ctx.mp.sqrt(2 * normalization_numeric(s, ctx))


def _bessel_equal(s: WaveState, n: int, ctx: PrecisionContext):
    if s.alpha != s.beta or s.alpha.denominator != 2:
        raise RouteError(f"BesselEqual needs alpha = beta half-integer, got {s}")
    r = n % 4
    if r in (0, 2):
        return ctx.mp.zero
    sign = 1 if r == 1 else -1
    order = int(s.alpha + HALF)
    mp = ctx.mp
    with mp.workprec(ctx.precision_bits + 16):
        pref = _sqrt_two_over_K(s, ctx) * exact_to_float(
            ExactValue.pi_power(HALF) * formulas.gamma_exact(s.alpha + 1), ctx
        )
        npi = exact_to_float(ExactValue(n, 2), ctx)
        j = bessel_j(order, ExactValue(Fraction(n, 2), 2), ctx)
        out = sign * pref * npi ** (-(ctx.mpf(s.alpha) + HALF)) * j
    return +out


def hyper_factor(s, n: int, ctx: PrecisionContext):
    """The reduced pFq of the coefficient integral at ``-n^2 pi^2/4``."""
    s = _as_state(s)
    ups, lows = formulas.hyper_parameters(s.alpha, s.beta)
    return pfq(ups, lows, ExactValue(Fraction(-n * n, 4), 4), ctx)


def _hyper_B_numeric(s: WaveState, ctx: PrecisionContext):
    if s.exact:
        return exact_to_float(beta_exact(s.alpha + 2, s.beta + 1), ctx)
    return _gamma_ratio_beta(ctx.mpf(s.alpha) + 2, ctx.mpf(s.beta) + 1, ctx)


def _hypergeometric(s: WaveState, n: int, ctx: PrecisionContext):
    mp = ctx.mp
    with mp.workprec(ctx.precision_bits + 16):
        npi = exact_to_float(ExactValue(n, 2), ctx)
        out = _sqrt_two_over_K(s, ctx) * npi * _hyper_B_numeric(s, ctx) * hyper_factor(s, n, ctx)
    return +out


def _quadrature(s: WaveState, n: int, ctx: PrecisionContext):
    f = Integrand(s.alpha, s.beta, "sin", freq=ExactValue(n, 2))
    mp = ctx.mp
    with mp.workprec(ctx.precision_bits + 16):
        out = _sqrt_two_over_K(s, ctx) * quadrature(f, 0, 1, ctx)
    return +out


_ROUTES = {
    CoeffRoute.BESSEL_EQUAL: _bessel_equal,
    CoeffRoute.HYPERGEOMETRIC: _hypergeometric,
    CoeffRoute.QUADRATURE: _quadrature,
}


def coeff(s, n: int, route: CoeffRoute, ctx: PrecisionContext):
    """The n-th sine-basis coefficient ``C_n`` of the normalized state."""
    s = _as_state(s)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if isinstance(route, str):
        route = CoeffRoute.parse(route)
    return _ROUTES[route](s, int(n), ctx)


def routes_for(s) -> list[CoeffRoute]:
    s = _as_state(s)
    out = [CoeffRoute.HYPERGEOMETRIC, CoeffRoute.QUADRATURE]
    if s.alpha == s.beta and s.alpha.denominator == 2:
        out.insert(0, CoeffRoute.BESSEL_EQUAL)
    return out


def parseval_partial(s, N: int, route: CoeffRoute, ctx: PrecisionContext):
    """``sum_{n<=N} C_n^2``."""
    if N < 1:
        raise DomainError("N must be at least 1")
    mp = ctx.mp
    total = mp.zero
    with mp.workprec(ctx.precision_bits + 16):
        for n in range(1, N + 1):
            c = coeff(s, n, route, ctx)
            total += c * c
    return +total


# ----------------------------------------------------------- energy moments


def energy_moment_integral(s, moment: int) -> ExactValue:
    """Exact ``<H>`` (moment 1) or ``<H^2>`` (moment 2) in units hbar^2/2m = a = 1."""
    s = _as_state(s)
    a, b = s.alpha, s.beta
    if moment == 1:
        if a <= HALF or b <= HALF:
            raise DomainError("<H> is finite only for alpha, beta > 1/2")
        if not s.exact:
            raise DomainError(f"{s} has no exact moment")
        return a * b * beta_exact(2 * a - 1, 2 * b - 1) / ((2 * a + 2 * b - 1) * formulas.normalization_K(a, b))
    if moment == 2:
        if a <= Fraction(3, 2) or b <= Fraction(3, 2):
            raise DomainError("<H^2> closed form needs alpha, beta > 3/2")
        if not s.exact:
            raise DomainError(f"{s} has no exact moment")
        # sum (n^2 pi^2)^2 C_n^2 = pi^4 * prefactor * HyperSq(alpha, beta, 6)
        return formulas.PI**4 * formulas.hyper_prefactor(a, b) * formulas.n6_sum_closed(a, b)
    raise DomainError("moment must be 1 or 2")


def second_derivative_poly(alpha, beta) -> tuple[Fraction, Fraction, Fraction]:
    """P with ``(x^a (1-x)^b)'' = x^(a-2) (1-x)^(b-2) P(x)``, lowest degree first."""
    a, b = as_rational(alpha), as_rational(beta)
    aa, bb, ab = a * (a - 1), b * (b - 1), a * b
    return (aa, -2 * aa - 2 * ab, aa + 2 * ab + bb)


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return tuple(out)


def energy_moment_quadrature(s, moment: int, ctx: PrecisionContext, tol=None):
    """Numeric ``int psi (-psi'')`` (moment 1) or ``int (psi'')^2`` (moment 2)."""
    s = _as_state(s)
    a, b = s.alpha, s.beta
    P = second_derivative_poly(a, b)
    c2 = normalization_numeric(s, ctx)
    if moment == 1:
        if a <= HALF or b <= HALF:
            raise DomainError("<H> is finite only for alpha, beta > 1/2")
        f = Integrand(2 * a - 2, 2 * b - 2, "poly", poly=P, scale=-c2)
    elif moment == 2:
        if a <= Fraction(3, 4) or b <= Fraction(3, 4):
            raise DomainError("(psi'')^2 is not integrable for alpha or beta <= 3/4")
        f = Integrand(2 * a - 4, 2 * b - 4, "poly", poly=_poly_mul(P, P), scale=c2)
    else:
        raise DomainError("moment must be 1 or 2")
    return quadrature(f, 0, 1, ctx, tol=tol)


# ------------------------------------------------------------------ sampling


def wavefunction(s, x, ctx: PrecisionContext):
    s = _as_state(s)
    mp = ctx.mp
    x = ctx.mpf(x)
    if x <= 0 or x >= 1:
        return mp.zero
    return mp.sqrt(normalization_numeric(s, ctx)) * x ** ctx.mpf(s.alpha) * (1 - x) ** ctx.mpf(s.beta)


def sample_wavefunction(s, points: int, ctx: PrecisionContext | None = None) -> list[tuple]:
    """``points`` equally spaced samples (x, psi(x)) on [0, 1], ends included."""
    if points < 2:
        raise DomainError("need at least two sample points")
    ctx = ctx or PrecisionContext()
    out = []
    for i in range(points):
        x = Fraction(i, points - 1)
        out.append((ctx.mpf(x), wavefunction(s, x, ctx)))
    return out


def write_samples_csv(samples, out: TextIO | None = None, digits: int | None = None, ctx=None) -> str:
    """CSV with header ``x,psi``; fixed-point decimals."""
    if digits is None:
        bits = ctx.precision_bits if ctx is not None else 64
        digits = max(6, int(bits * 0.30103) - 2)
    buf = io.StringIO()
    buf.write("x,psi\n")
    for x, y in samples:
        buf.write(f"{_fixed(x, digits)},{_fixed(y, digits)}\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def _fixed(v, digits: int) -> str:
    """``v`` rounded to ``digits`` decimals, without exponent notation."""
    import mpmath

    with mpmath.workprec(int(digits * 3.33) + 64):
        scaled = int(mpmath.nint(mpmath.mpf(v) * mpmath.mpf(10) ** digits))
    sign = "-" if scaled < 0 else ""
    head, tail = divmod(abs(scaled), 10**digits)
    return f"{sign}{head}.{tail:0{digits}d}"
