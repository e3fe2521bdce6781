"""Brute-force summation of series families against their closed forms.

A family is summed over its first N indices.  The remainder is bounded by

* Bessel families: Landau's bound ``|J_p(x)| <= 0.7858 x^(-1/3)`` (all
  p >= 0, x > 0) and the integral test, which is rigorous;
* HyperSq with alpha = beta half-integer: the same bound through the
  Bessel form of the coefficients (rigorous);
* other HyperSq: a power law fitted to the maxima of the trailing quarter of
  the terms, times 64.  Reported with ``bound_kind = "heuristic"``.

Summation order is fixed (blocks of 64 terms, then a balanced pairwise
tree), so results do not depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import threading
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from . import formulas
from .errors import DomainError, UnsupportedError
from .exactval import ExactSum, ExactValue, exact_to_float, gamma_exact, beta_exact
from .formulas import BesselSeries, HyperSeries, SeriesFamily
from .specfun import PrecisionContext, bessel_j_orders, pfq

LANDAU_C = 0.7858
SAFETY = 64
BLOCK = 64
PMAX = 10


class Verdict:
    PASS = "Pass"
    FAIL = "Fail"
    NO_EXACT = "NoExact"


# --------------------------------------------------------------- term cache


class _TermCache:
    """Write-once store of Bessel vectors and pFq values, keyed by precision."""

    def __init__(self):
        self._lock = threading.Lock()
        self._bessel: dict = {}
        self._hyper: dict = {}

    def bessel(self, n: int, pmax: int, ctx: PrecisionContext) -> list:
        key = (ctx.precision_bits, ctx.guard_bits, n)
        got = self._bessel.get(key)
        if got is not None and len(got) > pmax:
            return got
        vals = bessel_j_orders(max(pmax, PMAX), ExactValue(Fraction(n, 2), 2), ctx)
        with self._lock:
            cur = self._bessel.get(key)
            if cur is None or len(cur) < len(vals):
                self._bessel[key] = vals
                cur = vals
        return cur

    def hyper(self, alpha, beta, n: int, ctx: PrecisionContext):
        key = (ctx.precision_bits, ctx.guard_bits, alpha, beta, n)
        got = self._hyper.get(key)
        if got is None:
            ups, lows = formulas.hyper_parameters(alpha, beta)
            got = pfq(ups, lows, ExactValue(Fraction(-n * n, 4), 4), ctx)
            with self._lock:
                got = self._hyper.setdefault(key, got)
        return got

    def clear(self):
        with self._lock:
            self._bessel.clear()
            self._hyper.clear()


CACHE = _TermCache()


def term_value(fam: SeriesFamily, n: int, ctx: PrecisionContext):
    """The summand of ``fam`` at index n."""
    mp = ctx.mp
    # cached values may belong to another context; rebuild them in ours so
    # the arithmetic below runs at our working precision
    mk = mp.make_mpf
    if isinstance(fam, BesselSeries):
        js = CACHE.bessel(n, fam.q, ctx)
        with mp.workprec(ctx.precision_bits + 16):
            v = mk(js[fam.p]._mpf_) * mk(js[fam.q]._mpf_) / mp.mpf(n) ** fam.e
        return +v
    f = mk(CACHE.hyper(fam.alpha, fam.beta, n, ctx)._mpf_)
    with mp.workprec(ctx.precision_bits + 16):
        v = mp.mpf(n) ** fam.w * f * f
    return +v


def _chunk_worker(fam, ns, bits, guard):
    ctx = PrecisionContext(bits, guard)
    return [term_value(fam, n, ctx)._mpf_ for n in ns]


def compute_terms(fam: SeriesFamily, ns: Sequence[int], ctx: PrecisionContext, workers: int = 1, processes: bool = False):
    """Terms at the given indices, in order; optionally spread over workers."""
    if workers <= 1 or len(ns) < 2:
        return [term_value(fam, n, ctx) for n in ns]
    chunks = [list(ns[i::workers]) for i in range(workers)]
    if processes:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_chunk_worker, [fam] * workers, chunks, [ctx.precision_bits] * workers, [ctx.guard_bits] * workers))
        parts = [[ctx.mp.make_mpf(t) for t in part] for part in parts]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda c: [term_value(fam, n, ctx) for n in c], chunks))
    out = [None] * len(ns)
    for i, part in enumerate(parts):
        out[i::workers] = part
    return out


def deterministic_sum(values: Sequence, ctx: PrecisionContext):
    """Blocks of 64 summed left to right, then a balanced pairwise tree."""
    mp = ctx.mp
    with mp.workprec(ctx.precision_bits + 32):
        level = []
        for i in range(0, len(values), BLOCK):
            s = mp.zero
            for v in values[i : i + BLOCK]:
                s += v
            level.append(s)
        if not level:
            return mp.zero
        while len(level) > 1:
            nxt = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]


# ---------------------------------------------------------------- tail bounds


def _power_tail(A: float, gamma: float, n0: int, step: int) -> float:
    """Upper bound of ``sum_{n = n0, n0+step, ...} A n^-gamma`` (gamma > 1)."""
    if gamma <= 1:
        return math.inf
    return A * (n0**-gamma + n0 ** (1 - gamma) / ((gamma - 1) * step))


def _step(fam: SeriesFamily) -> int:
    return 2 if isinstance(fam, BesselSeries) and fam.parity != "all" else 1


def bessel_tail_bound(fam: BesselSeries, N: int) -> float:
    n0 = fam.indices(N + 1)[-1]
    A = LANDAU_C**2 * (math.pi / 2) ** (-2 / 3)
    return _power_tail(A, fam.e + 2 / 3, n0, _step(fam))


def hyper_tail_bound_rigorous(fam: HyperSeries, N: int) -> float:
    """alpha = beta half-integer: n^w F_n^2 <= A n^(w-2) (n pi)^(-2 alpha-1) (n pi/2)^(-2/3)."""
    a = fam.alpha
    g = float(exact_to_float(gamma_exact(a + 1), PrecisionContext(64)))
    B = float(exact_to_float(beta_exact(a + 2, a + 1), PrecisionContext(64)))
    A = math.pi * g * g * LANDAU_C**2 / (math.pi**2 * B * B)
    A *= math.pi ** (-2 * float(a) - 1) * (math.pi / 2) ** (-2 / 3)
    gamma = 2 * float(a) + 1 + 2 / 3 - (fam.w - 2)
    return _power_tail(A, gamma, N + 1, 1)


def fitted_tail_bound(ns: Sequence[int], terms: Sequence, N: int, step: int = 1) -> tuple[float, dict]:
    """Power-law fit on the block maxima of the trailing 25% of the terms."""
    k = len(terms)
    start = (3 * k) // 4
    tail_n = ns[start:]
    tail_t = [abs(float(t)) for t in terms[start:]]
    nb = max(4, min(32, len(tail_t) // 8))
    size = max(1, len(tail_t) // nb)
    xs, ys = [], []
    for i in range(0, len(tail_t) - size + 1, size):
        m = max(tail_t[i : i + size])
        if m > 0:
            xs.append(math.log(tail_n[i + size - 1]))
            ys.append(math.log(m))
    info = {"points": len(xs)}
    if len(xs) < 3:
        return math.inf, info
    slope, intercept = statistics.linear_regression(xs, ys)
    gamma = -slope
    info.update(exponent=gamma, amplitude=math.exp(intercept))
    bound = SAFETY * _power_tail(math.exp(intercept), gamma, ns[-1] + step, step)
    return bound, info


# ----------------------------------------------------------------- results


@dataclass
class SumResult:
    family: SeriesFamily
    exact: ExactSum
    numeric: object
    tail_bound: float
    terms_used: int
    bound_kind: str
    precision_bits: int
    difference: object = None
    relative: object = None
    verdict: str = Verdict.NO_EXACT
    rounding_bound: float = 0.0
    doubling_ok: bool | None = None
    notes: dict = field(default_factory=dict)

    def __iter__(self):
        # unpacks as (partial, tail_bound)
        return iter((self.numeric, self.tail_bound))

    @property
    def relative_error(self):
        return self.relative

    def to_dict(self, digits: int = 40) -> dict:
        return {
            "family": str(self.family),
            "kind": self.family.kind,
            "params": [str(x) for x in self.family.params],
            "exact": self.exact.to_dict() if self.exact is not None else None,
            "exact_text": str(self.exact) if self.exact is not None else None,
            "numeric": mpmath.nstr(self.numeric, digits),
            "difference": mpmath.nstr(self.difference, 6) if self.difference is not None else None,
            "relative": mpmath.nstr(self.relative, 6) if self.relative is not None else None,
            "tail_bound": _fmt(self.tail_bound),
            "rounding_bound": _fmt(self.rounding_bound),
            "bound_kind": self.bound_kind,
            "terms": self.terms_used,
            "precision_bits": self.precision_bits,
            "verdict": self.verdict,
            "doubling_ok": self.doubling_ok,
        }


def short_number(text: str, digits: int = 20) -> str:
    """A decimal string shortened to ``digits`` significant digits."""
    with mpmath.workprec(int(len(text) * 3.4) + 16):
        return mpmath.nstr(mpmath.mpf(text), digits)


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6e}"


def sum_series(fam: SeriesFamily, N: int, ctx: PrecisionContext, workers: int = 1, processes: bool = False,
               exact: ExactSum | None = None) -> SumResult:
    """Sum the first N terms of ``fam`` and bound the rest."""
    if N < 8:
        raise DomainError("N must be at least 8")
    ns = fam.indices(N)
    terms = compute_terms(fam, ns, ctx, workers, processes)
    total = deterministic_sum(terms, ctx)
    notes = {}
    if isinstance(fam, BesselSeries):
        bound, kind = bessel_tail_bound(fam, N), "rigorous"
    elif fam.alpha == fam.beta and fam.alpha.denominator == 2:
        bound, kind = hyper_tail_bound_rigorous(fam, N), "rigorous"
    else:
        bound, notes = fitted_tail_bound(ns, terms, N)
        kind = "heuristic"
    # each term carries at most ~4 target errors (two factors plus rounding)
    rounding = 4 * N * float(ctx.target_abs_error) * max(1.0, float(max((abs(t) for t in terms), default=1)))
    return SumResult(fam, exact, +total, bound, N, kind, ctx.precision_bits, rounding_bound=rounding, notes=notes)


def certify(fam: SeriesFamily, exact=None, N: int = 2000, ctx: PrecisionContext | None = None,
            workers: int = 1, processes: bool = False, doubling_sample: int = 4) -> SumResult:
    """Sum, compare with the closed form and give a verdict.

    ``exact`` defaults to the generated closed form; a family without one
    gets verdict NoExact.  Pass means
    ``|numeric - exact| <= tail_bound + rounding_bound`` and the sampled
    terms are unchanged (within the error target) at twice the precision.
    """
    ctx = ctx or PrecisionContext()
    if exact is None:
        try:
            exact = formulas.family_closed(fam)
        except UnsupportedError:
            exact = None
    else:
        exact = ExactSum.coerce(exact)
    res = sum_series(fam, N, ctx, workers, processes, exact=exact)
    if doubling_sample:
        res.doubling_ok = doubling_check(fam, N, ctx, doubling_sample)
    if exact is None:
        res.verdict = Verdict.NO_EXACT
        return res
    mp = ctx.mp
    with mp.workprec(ctx.precision_bits + 32):
        ev = exact_to_float(exact, ctx)
        diff = abs(res.numeric - ev)
        res.difference = diff
        res.relative = diff / abs(ev) if ev != 0 else None
    if not math.isinf(res.tail_bound) and diff <= res.tail_bound + res.rounding_bound and res.doubling_ok is not False:
        res.verdict = Verdict.PASS
    else:
        res.verdict = Verdict.FAIL
    return res


def doubling_check(fam: SeriesFamily, N: int, ctx: PrecisionContext, sample: int = 4) -> bool:
    """Terms at the first and last ``sample`` indices agree at doubled precision."""
    ns = fam.indices(N)
    pick = sorted(set(ns[:sample] + ns[-sample:]))
    hi = ctx.doubled()
    tol = 8 * ctx.target_abs_error
    for n in pick:
        a = term_value(fam, n, ctx)
        b = term_value(fam, n, hi)
        if abs(a - ctx.mp.mpf(b)) > tol * max(1, abs(a)):
            return False
    return True


# ------------------------------------------------------------- identities


@dataclass
class IdentityResult:
    name: str
    target: ExactSum
    numeric: object
    deviation: object
    bound: float
    verdict: str
    parts: list

    def to_dict(self) -> dict:
        return {
            "identity": self.name,
            "target": str(self.target),
            "numeric": mpmath.nstr(self.numeric, 40),
            "deviation": mpmath.nstr(self.deviation, 6),
            "bound": _fmt(self.bound),
            "verdict": self.verdict,
            "parts": self.parts,
        }


def identity24_check(N: int = 2000, ctx: PrecisionContext | None = None, workers: int = 1,
                     terms=None) -> IdentityResult:
    """The nine-series relation of the state (1/2, 7/2), summed numerically.

    ``terms`` overrides the (coefficient, family) list, for negative controls.
    """
    ctx = ctx or PrecisionContext()
    terms = formulas.EQ24_TERMS if terms is None else terms
    mp = ctx.mp
    total = mp.zero
    bound = 0.0
    parts = []
    with mp.workprec(ctx.precision_bits + 32):
        for coeff, fam in terms:
            s = sum_series(fam, N, ctx, workers, exact=ExactSum())
            c = exact_to_float(coeff, ctx)
            total += c * s.numeric
            bound += abs(float(c)) * (s.tail_bound + s.rounding_bound)
            parts.append({"coeff": str(coeff), "family": str(fam), "partial": mpmath.nstr(s.numeric, 30)})
        target = formulas.EQ24_TARGET
        dev = abs(total - exact_to_float(target, ctx))
    verdict = Verdict.PASS if dev <= bound else Verdict.FAIL
    return IdentityResult("eq24", ExactSum.of(target), +total, dev, bound, verdict, parts)


def parseval_certify(state, N: int = 2000, ctx: PrecisionContext | None = None, route=None) -> IdentityResult:
    """``sum_{n<=N} C_n^2`` against 1; passes when ``0 < 1 - partial <= bound``."""
    from . import spectral

    ctx = ctx or PrecisionContext()
    s = state if isinstance(state, spectral.WaveState) else spectral.WaveState(*state)
    if route is None:
        route = spectral.routes_for(s)[0]
    ns = list(range(1, N + 1))
    sq = [c * c for c in (spectral.coeff(s, n, route, ctx) for n in ns)]
    partial = deterministic_sum(sq, ctx)
    with ctx.mp.workprec(ctx.precision_bits + 32):
        dev = 1 - partial
    if s.alpha == s.beta and s.alpha.denominator == 2:
        pref = float(exact_to_float(formulas.hyper_prefactor(s.alpha, s.beta), ctx))
        bound, kind = pref * hyper_tail_bound_rigorous(HyperSeries(s.alpha, s.beta, 2), N), "rigorous"
    else:
        bound, _ = fitted_tail_bound(ns, sq, N)
        kind = "heuristic"
    slack = 4 * N * float(ctx.target_abs_error)
    ok = 0 < dev + slack and dev <= bound + slack
    return IdentityResult(f"parseval{s}", ExactSum.of(1), +partial, dev, bound,
                          Verdict.PASS if ok else Verdict.FAIL, [{"bound_kind": kind, "route": route.value}])


# ----------------------------------------------------------------- reports


def report_json(results: Iterable) -> str:
    return json.dumps([r.to_dict() for r in results], indent=2)


def report_markdown(results: Iterable) -> str:
    rows = [r.to_dict() for r in results]
    out = ["| family | exact | numeric | |diff| | tail bound | bound | N | verdict |",
           "|---|---|---|---|---|---|---|---|"]
    for d in rows:
        if "family" not in d:
            out.append(f"| {d['identity']} | {d['target']} | {short_number(d['numeric'])} | {d['deviation']} | {d['bound']} | | | {d['verdict']} |")
            continue
        out.append(
            f"| {d['family']} | {d['exact_text']} | {short_number(d['numeric'])} | {d['difference']} | "
            f"{d['tail_bound']} | {d['bound_kind']} | {d['terms']} | {d['verdict']} |"
        )
    return "\n".join(out) + "\n"


def report_csv(results: Iterable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "exact", "numeric", "difference", "tail_bound", "bound_kind", "terms", "verdict"])
    for r in results:
        d = r.to_dict()
        if "family" in d:
            w.writerow([d["family"], d["exact_text"], d["numeric"], d["difference"], d["tail_bound"],
                        d["bound_kind"], d["terms"], d["verdict"]])
        else:
            w.writerow([d["identity"], d["target"], d["numeric"], d["deviation"], d["bound"], "", "", d["verdict"]])
    return buf.getvalue()
