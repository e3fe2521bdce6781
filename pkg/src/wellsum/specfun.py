"""Arbitrary-precision special functions with controlled absolute error.

All series are summed in binary fixed point (GMP integers through mpmath's
backend).  The working precision is raised by the number of bits an
alternating series can lose to cancellation, so the absolute error of every
result stays below ``ctx.target_abs_error``.

Arguments that are exact rational multiples of pi (an ``ExactValue`` with
``pi_half_power == 2``) take a fast path: the series variable becomes
``pi**2``, whose fixed-point powers are cached, and every term ratio is a
small rational.  Blocks of terms are then combined by rectangular splitting,
which replaces most big-by-big multiplications with big-by-small ones.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import mpmath
import numpy as np
from mpmath.libmp import MPZ, from_man_exp, pi_fixed

from .errors import ConvergenceError, DomainError
from .exactval import ExactValue, as_rational

LOG2E = math.log2(math.e)
MAX_TERMS = 10**6
BLOCK = 32


@dataclass(frozen=True)
class PrecisionContext:
    """Precision settings for one computation.

    ``precision_bits`` is the mantissa size of returned values, which are
    accurate to ``target_abs_error = 2**(guard_bits - precision_bits)``.
    Each context owns a private mpmath context, so contexts can be used from
    several threads at once.
    """

    precision_bits: int = 320
    guard_bits: int = 32
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise DomainError("precision_bits must be at least 64")
        if self.guard_bits < 16:
            raise DomainError("guard_bits must be at least 16")
        mp = mpmath.MPContext()
        mp.prec = self.precision_bits
        object.__setattr__(self, "mp", mp)

    @property
    def target_abs_error(self):
        return self.mp.ldexp(self.mp.one, self.guard_bits - self.precision_bits)

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.precision_bits, self.guard_bits)

    def mpf(self, x):
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        if isinstance(x, ExactValue):
            from .exactval import exact_to_float

            return exact_to_float(x, self)
        return self.mp.mpf(x)

    def __reduce__(self):
        return (PrecisionContext, (self.precision_bits, self.guard_bits))


Arg = Union[ExactValue, Fraction, int, float, "mpmath.mpf"]

# ---------------------------------------------------------------- fixed point

_pow_cache: dict[tuple, list] = {}
_pow_lock = threading.Lock()


def _round_up(w: int, step: int = 128) -> int:
    return -(-w // step) * step


def _powers(y, W: int, m: int) -> list:
    pows = [MPZ(1) << W]
    for _ in range(m):
        pows.append((pows[-1] * y) >> W)
    return pows


def _pi2_powers(W: int, m: int) -> list:
    """Fixed-point ``pi**(2i)``, i = 0..m, at scale ``2**W`` (write-once cache)."""
    key = ("pi2", W, m)
    got = _pow_cache.get(key)
    if got is not None:
        return got
    pi = pi_fixed(W + 32) >> 32
    pows = _powers((pi * pi) >> W, W, m)
    with _pow_lock:
        return _pow_cache.setdefault(key, pows)


class _Ratio:
    """Term ratio ``rho_k / rho_{k-1} = a0 prod(c + d k) / (b0 prod(e + f k))``.

    All constants are integers; ``num`` and ``den`` hold the (c, d) pairs.
    """

    __slots__ = ("a0", "b0", "num", "den")

    def __init__(self, a0: int, b0: int, num, den):
        self.a0, self.b0 = a0, b0
        self.num = tuple(num)
        self.den = tuple(den)

    def A(self, k: int) -> int:
        v = self.a0
        for c, d in self.num:
            v *= c + d * k
        return v

    def B(self, k: int) -> int:
        v = self.b0
        for c, d in self.den:
            v *= c + d * k
        return v

    def log2(self, k: int) -> float:
        a = self.A(k)
        if a == 0:
            return -math.inf
        return math.log2(abs(a)) - math.log2(abs(self.B(k)))


def _scan_terms(ratio: _Ratio, log2y: float, target_bits: float, m: int):
    """Terms needed, log2 of the largest term, and per-block maxima.

    ``blockmax[j]`` is the largest log2 term size over indices
    ``j*m .. (j+1)*m`` (both ends included).  The scan stops once the term
    ratio is below 1/2 and the current term is below ``2**-target_bits``.
    Past that point the ratios of every series used here keep decreasing, so
    the neglected tail is at most the last term.  The estimate runs in double
    precision on log2 sizes, which is ample for choosing precisions.
    """
    span = 1024
    while True:
        k = np.arange(1, span + 1, dtype=np.float64)
        r = np.full(span, math.log2(abs(ratio.a0)) - math.log2(abs(ratio.b0)) + log2y)
        stop = None
        for c, d in ratio.num:
            v = np.abs(c + d * k)
            zero = np.flatnonzero(v == 0)
            if zero.size:
                stop = int(zero[0]) if stop is None else min(stop, int(zero[0]))
            r += np.log2(np.where(v == 0, 1.0, v))
        for c, d in ratio.den:
            r -= np.log2(np.abs(c + d * k))
        logt = np.concatenate(([0.0], np.cumsum(r)))
        if stop is not None:
            # A(stop + 1) == 0: terms 0..stop survive
            K = stop + 1
        else:
            done = np.flatnonzero((r < -1.0) & (logt[1:] < -target_bits))
            K = int(done[0]) + 2 if done.size else None
        if K is not None:
            break
        if span >= MAX_TERMS:
            raise ConvergenceError(f"series needs more than {MAX_TERMS} terms")
        span *= 4
    logt = logt[:K]
    peak = max(float(logt.max()), 0.0)
    nblocks = -(-K // m)
    blockmax = [float(logt[j * m : (j + 1) * m + 1].max()) for j in range(nblocks)]
    return K, peak, blockmax


def _hyper_fixed(ratio: _Ratio, powers_at: Callable[[int], list], scales: list[int], m: int):
    """``sum_k rho_k Y**k`` in fixed point with ``rho_0 = 1``.

    Terms are grouped in blocks of ``m`` and combined by Horner's rule from
    the last block down.  Block ``j`` is computed at scale ``2**scales[j]``
    (chosen from the size of its leading term) using ``powers_at(scale)``,
    the list of ``Y**i`` for i = 0..m at that scale.  Returns the sum at
    scale ``2**scales[0]``.
    """
    A, B = ratio.A, ratio.B
    total = MPZ(0)
    prev_scale = scales[-1]
    for j in range(len(scales) - 1, -1, -1):
        W = scales[j]
        ypow = powers_at(W)
        base = j * m
        suf = [1] * (m + 1)
        for i in range(m - 1, -1, -1):
            suf[i] = suf[i + 1] * B(base + i + 1)
        acc = MPZ(0)
        pre = 1
        for i in range(m):
            acc += (pre * suf[i]) * ypow[i]
            pre *= A(base + i + 1)
            if pre == 0:
                break
        if total and pre:
            acc += pre * ((ypow[m] * total) >> prev_scale)
        total = acc // suf[0]
        prev_scale = W
    return total


def _to_mpf(ctx: PrecisionContext, man, exp: int):
    return ctx.mp.make_mpf(from_man_exp(MPZ(man), exp, ctx.precision_bits, "n"))


def _pi_multiple(x) -> Fraction | None:
    """``q`` when ``x`` is exactly ``q*pi``, else None."""
    if isinstance(x, ExactValue) and (x.pi_half_power == 2 or x.is_zero):
        return x.coeff
    return None


def _series(ratio: _Ratio, y_num, cancel_arg: float, extra_bits: float, ctx: PrecisionContext):
    """Evaluate ``sum rho_k Y**k``; returns (fixed-point value, scale).

    ``Y`` is ``pi**2`` when ``y_num`` is None (the rational part of the
    argument is folded into ``ratio``), else the mpf ``y_num``.
    ``cancel_arg`` is the argument magnitude controlling cancellation and
    ``extra_bits`` the size of a prefactor the sum is later multiplied by.

    The peak working precision is ``precision_bits + 1.5*|x|*log2(e) + 32``
    (or the measured peak term size if larger); blocks whose leading term is
    smaller run at proportionally fewer bits.
    """
    target = ctx.precision_bits + ctx.guard_bits + max(extra_bits, 0.0)
    if y_num is None:
        log2y = 2 * math.log2(math.pi)
    else:
        if y_num == 0:
            return MPZ(1), 0
        log2y = float(ctx.mp.log(abs(y_num), 2))
    m = BLOCK
    K, peak, blockmax = _scan_terms(ratio, log2y, target, m)
    escalation = max(math.ceil(1.5 * cancel_arg * LOG2E), math.ceil(peak))
    slack = 40 + K.bit_length()
    W = _round_up(math.ceil(target) + escalation + slack)
    nblocks = -(-K // m)
    while len(blockmax) < nblocks:
        blockmax.append(blockmax[-1])
    scales = [min(W, _round_up(math.ceil(target + max(L, -target / 2)) + slack)) for L in blockmax[:nblocks]]
    if y_num is None:
        powers_at = lambda w: _pi2_powers(w, m)
    else:
        full = _powers(_fixed_from_mpf(y_num, W), W, m)
        local: dict[int, list] = {}

        def powers_at(w):
            got = local.get(w)
            if got is None:
                got = local[w] = [v >> (W - w) for v in full]
            return got

    return _hyper_fixed(ratio, powers_at, scales, m), scales[0]


def _check_order(p) -> int:
    if int(p) != p or p < 0:
        raise DomainError(f"Bessel order must be a non-negative integer, got {p}")
    if p > 64:
        raise DomainError("Bessel order above 64 is not supported")
    return int(p)


def _arg_value(x, ctx: PrecisionContext):
    return ctx.mpf(x)


def _bessel_fixed(p: int, x, ctx: PrecisionContext, extra_bits: float = 0.0):
    """J_p(x) as (fixed-point integer, W) with absolute error near 2**-(target)."""
    q = _pi_multiple(x)
    xv = float(q) * math.pi if q is not None else float(_arg_value(x, ctx))
    if xv < 0:
        raise DomainError("Bessel argument must be non-negative")
    if xv == 0:
        return (MPZ(1) if p == 0 else MPZ(0)), 0
    # prefactor (x/2)^p / p!
    log2pref = p * math.log2(xv / 2) - math.lgamma(p + 1) * LOG2E if p else 0.0
    extra = max(log2pref, 0.0) + extra_bits
    if q is not None:
        # Y = x^2/4 = (q^2/4) pi^2
        num, den = q.numerator ** 2, 4 * q.denominator ** 2
        ratio = _Ratio(-num, den, (), ((0, 1), (p, 1)))
        s, W = _series(ratio, None, xv, extra, ctx)
        pi = pi_fixed(W + 32) >> 32
        half = (pi * q.numerator) // (2 * q.denominator)  # x/2
    else:
        ratio = _Ratio(-1, 1, (), ((0, 1), (p, 1)))
        with ctx.mp.workprec(ctx.precision_bits + int(1.5 * xv * LOG2E) + 64):
            xm = _arg_value(x, ctx)
            y = xm * xm / 4
        s, W = _series(ratio, y, xv, extra, ctx)
        half = _fixed_from_mpf(xm / 2, W)
    if s == 0 and W == 0:
        return s, W
    t = MPZ(1) << W
    for j in range(1, p + 1):
        t = (t * half >> W) // j
    return (s * t) >> W, W


def _fixed_from_mpf(v, W: int):
    man, exp = v.man_exp if v != 0 else (0, 0)
    sign = -1 if v < 0 else 1
    man = abs(MPZ(man)) if man else MPZ(0)
    r = man << (W + exp) if W + exp >= 0 else man >> (-(W + exp))
    return sign * r


def bessel_j(order: int, x: Arg, ctx: PrecisionContext):
    """Bessel function of the first kind J_order(x) by its ascending series.

    ``x`` may be an mpf/float/int/Fraction, or an ``ExactValue`` equal to a
    rational multiple of pi (fast path).
    """
    p = _check_order(order)
    s, W = _bessel_fixed(p, x, ctx)
    return _to_mpf(ctx, s, -W)


def bessel_j_orders(pmax: int, x: Arg, ctx: PrecisionContext) -> list:
    """``[J_0(x), ..., J_pmax(x)]``.

    J_pmax and J_(pmax-1) come from the ascending series; lower orders follow
    from the three-term recurrence run downwards, the direction in which it
    is stable.  Extra guard bits cover the growth of J_k/J_pmax.
    """
    pmax = _check_order(pmax)
    if pmax == 0:
        return [bessel_j(0, x, ctx)]
    q = _pi_multiple(x)
    xv = float(q) * math.pi if q is not None else float(_arg_value(x, ctx))
    if xv == 0:
        return [ctx.mp.one] + [ctx.mp.zero] * pmax
    grow = pmax * math.log2(max(2.0, 2 * pmax / xv)) + 2 * math.log2(pmax + 1) + 16
    hi, W1 = _bessel_fixed(pmax, x, ctx, extra_bits=grow)
    lo, W2 = _bessel_fixed(pmax - 1, x, ctx, extra_bits=grow)
    W = max(W1, W2)
    hi <<= W - W1
    lo <<= W - W2
    if q is not None:
        inv_x = (MPZ(q.denominator) << (2 * W)) // (pi_fixed(W + 32) >> 32) // q.numerator
    else:
        with ctx.mp.workprec(W + 32):
            inv_x = _fixed_from_mpf(1 / ctx.mp.mpf(x), W)
    vals = [None] * (pmax + 1)
    vals[pmax], vals[pmax - 1] = hi, lo
    for k in range(pmax - 1, 0, -1):
        vals[k - 1] = ((2 * k * vals[k] * inv_x) >> W) - vals[k + 1]
    return [_to_mpf(ctx, v, -W) for v in vals]


# ----------------------------------------------------------- hypergeometric


def _param_ints(params: Sequence) -> list[tuple[int, int]]:
    out = []
    for c in params:
        c = as_rational(c)
        out.append((c.numerator, c.denominator))
    return out


def _check_lowers(lowers):
    for b in lowers:
        b = as_rational(b)
        if b <= 0 and b.denominator == 1:
            raise DomainError(f"lower parameter {b} is a non-positive integer")


def pfq(uppers: Sequence, lowers: Sequence, z: Arg, ctx: PrecisionContext):
    """Generalized hypergeometric series pFq(uppers; lowers; z).

    ``z`` may be an mpf-like value, or an ``ExactValue`` that is a rational
    multiple of pi**2 (fast path used for the ``-n^2 pi^2 / 4`` arguments).
    Only entire or terminating series are supported (p <= q + 1 with
    termination, or p <= q).
    """
    _check_lowers(lowers)
    ups = _param_ints(uppers)
    lows = _param_ints(lowers)
    if isinstance(z, ExactValue) and z.is_zero:
        return ctx.mp.one
    if isinstance(z, ExactValue) and z.pi_half_power == 4:
        r = z.coeff
        zmag = abs(float(r)) * math.pi**2
        exact = True
    else:
        zval = ctx.mpf(z)
        if zval == 0:
            return ctx.mp.one
        r = Fraction(1)
        zmag = abs(float(zval))
        exact = False
    if len(ups) > len(lows) + 1 or (len(ups) == len(lows) + 1 and zmag >= 1):
        terminating = any(n <= 0 and n % d == 0 for n, d in ups)
        if not terminating:
            raise ConvergenceError("pFq series diverges or converges too slowly for direct summation")
    updens = math.prod(d for _, d in ups)
    lowdens = math.prod(d for _, d in lows)

    ratio = _Ratio(
        r.numerator * lowdens,
        r.denominator * updens,
        [(n - d, d) for n, d in ups],
        [(0, 1)] + [(n - d, d) for n, d in lows],
    )

    cancel = 2 * math.sqrt(zmag) if (exact and r < 0) or (not exact and zval < 0) else 0.0
    if exact:
        s, W = _series(ratio, None, cancel, 0.0, ctx)
    else:
        s, W = _series(ratio, zval, cancel, 0.0, ctx)
    return _to_mpf(ctx, s, -W)


def kummer_diff(nu, denom, b: Arg, ctx: PrecisionContext):
    """``[1F1(nu; denom; i b) - 1F1(nu; denom; -i b)] / (2i)`` as a real series.

    ``denom = mu + nu`` with ``mu > 0``, ``nu > -1`` and ``nu != 0``.
    ``b`` may be an ``ExactValue`` rational multiple of pi.
    """
    nu = as_rational(nu)
    denom = as_rational(denom)
    mu = denom - nu
    if not (mu > 0 and nu > -1 and nu != 0):
        raise DomainError(f"kummer_diff needs mu>0, nu>-1, nu!=0 (nu={nu}, mu={mu})")
    q = _pi_multiple(b)
    bv = float(q) * math.pi if q is not None else float(ctx.mpf(b))
    if bv == 0:
        return ctx.mp.zero
    nn, nd = nu.numerator, nu.denominator
    dn, dd = denom.numerator, denom.denominator
    # rho_m / rho_{m-1} = -(nu+2m-1)(nu+2m) / ((2m)(2m+1)(d+2m-1)(d+2m)) * b^2
    if q is not None:
        qn, qd = q.numerator ** 2, q.denominator ** 2
    else:
        qn, qd = 1, 1

    ratio = _Ratio(
        -qn * dd * dd,
        qd * nd * nd,
        ((nn - nd, 2 * nd), (nn, 2 * nd)),
        ((0, 2), (1, 2), (dn - dd, 2 * dd), (dn, 2 * dd)),
    )

    lead = abs(bv * float(nu) / float(denom))
    extra = max(math.log2(lead), 0.0) if lead > 0 else 0.0
    if q is not None:
        s, W = _series(ratio, None, bv, extra, ctx)
        pi = pi_fixed(W + 32) >> 32
        lead_fixed = pi * q.numerator * nn * dd // (q.denominator * nd * dn)
    else:
        bm = ctx.mpf(b)
        with ctx.mp.workprec(ctx.precision_bits + int(1.5 * abs(bv) * LOG2E) + 64):
            y = bm * bm
            lead_m = bm * ctx.mpf(nu) / ctx.mpf(denom)
        s, W = _series(ratio, y, abs(bv), extra, ctx)
        with ctx.mp.workprec(W + 32):
            lead_fixed = _fixed_from_mpf(lead_m, W)
    return _to_mpf(ctx, (s * lead_fixed) >> W, -W)


def gamma_real(x, ctx: PrecisionContext):
    xv = ctx.mpf(x)
    if xv <= 0:
        raise DomainError("gamma_real needs x > 0")
    return ctx.mp.gamma(xv)


# ---------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class Integrand:
    """``x**alpha (1-x)**beta * w(x)`` on [0, 1].

    ``weight`` is ``"one"``, ``"sin"`` or ``"cos"`` (argument ``freq * x``) or
    ``"poly"`` with coefficients ``poly`` in increasing degree.
    """

    alpha: Fraction
    beta: Fraction
    weight: str = "one"
    freq: object = None
    poly: tuple = ()
    scale: object = 1

    def __post_init__(self):
        if self.weight not in ("one", "sin", "cos", "poly"):
            raise DomainError(f"unknown weight {self.weight!r}")
        if as_rational(self.alpha) <= -1 or as_rational(self.beta) <= -1:
            raise DomainError("endpoint exponents must exceed -1")

    def oscillations(self) -> int:
        if self.weight in ("sin", "cos") and self.freq is not None:
            q = _pi_multiple(self.freq)
            f = float(q) * math.pi if q is not None else float(self.freq)
            return int(abs(f) / math.pi) + 1
        return 1

    def bind(self, ctx: PrecisionContext) -> Callable:
        """``F(x, 1 - x)``; the complement is passed in so it stays exact near 1."""
        mp = ctx.mp
        a = ctx.mpf(as_rational(self.alpha))
        b = ctx.mpf(as_rational(self.beta))
        scale = ctx.mpf(self.scale)
        if self.weight in ("sin", "cos"):
            f = ctx.mpf(self.freq)
            trig = mp.sin if self.weight == "sin" else mp.cos
            w = lambda x: trig(f * x)
        elif self.weight == "poly":
            coeffs = [ctx.mpf(as_rational(c)) if not isinstance(c, float) else ctx.mpf(c) for c in self.poly]
            w = lambda x: mp.polyval(coeffs[::-1], x)
        else:
            w = lambda x: 1
        return lambda x, omx: scale * x**a * omx**b * w(x)


def quadrature(f, a, b, ctx: PrecisionContext, tol=None):
    """Tanh-sinh integral of ``f`` over [a, b].

    ``f`` is an :class:`Integrand` (interval split at the oscillation
    period) or a plain callable.  Raises :class:`ConvergenceError` when the
    estimated error stays above ``tol`` (default ``ctx.target_abs_error``).
    """
    mp = ctx.mp
    tol = ctx.target_abs_error if tol is None else tol
    with mp.workprec(ctx.precision_bits + ctx.guard_bits + 16):
        lo, hi = ctx.mpf(a), ctx.mpf(b)
        if not isinstance(f, Integrand):
            val, err = mp.quad(f, [lo, hi], method="tanh-sinh", error=True, maxdegree=12)
        else:
            if lo < 0 or hi > 1 or lo > hi:
                raise DomainError("an Integrand lives on [0, 1]")
            F = f.bind(ctx)
            pieces = f.oscillations()
            half = mp.mpf(1) / 2
            val, err = mp.zero, mp.zero
            # left of 1/2 integrate in x, right of 1/2 in y = 1 - x, so both
            # endpoint singularities sit at an exactly representable zero;
            # x = t^m then makes a negative endpoint exponent harmless
            halves = ((lambda x: F(x, 1 - x), lo, min(hi, half), as_rational(f.alpha)),
                      (lambda y: F(1 - y, y), 1 - hi, min(1 - lo, half), as_rational(f.beta)))
            for g, u0, u1, expo in halves:
                if u1 <= u0:
                    continue
                m = math.ceil(1 / (expo + 1)) if expo < 0 else 1
                if m > 1:
                    g = (lambda g, m: lambda t: m * t ** (m - 1) * g(t**m))(g, m)
                    u0, u1 = mp.root(u0, m), mp.root(u1, m)
                k = max(1, -(-pieces // 2))
                pts = [u0 + (u1 - u0) * i / k for i in range(k + 1)]
                v, e = mp.quad(g, pts, method="tanh-sinh", error=True, maxdegree=12)
                val += v
                err += e
    if not err <= tol:
        raise ConvergenceError(f"quadrature error estimate {mpmath.nstr(err, 5)} above tolerance")
    return +val
