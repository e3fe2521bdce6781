"""Closed forms for the Bessel and hypergeometric series families.

Every table value is generated, never stored.  The generators are

* the Parseval relation of a well state, expanded into Bessel series
  (:func:`state_expansion`), solved for its one unknown family;
* the general n^2, n^4 and n^6 formulas for the hypergeometric form;
* the two all-n Schloemilch relations (:func:`nis1_closed`,
  :func:`nis2_closed`), which split an all-n sum into odd and even parts.

The printed values in :mod:`wellsum.golden` are only compared against.

Bessel expansion
----------------
With ``x = (1+t)/2``, ``m = min(alpha, beta)``, ``d = |alpha-beta|`` and
``z = n pi/2`` the coefficient integral becomes::

    I(n pi) = 2**-(2m+d+1) [sin z * P(z) + cos z * Q(z)]

where ``P`` collects the even powers ``t**j`` of ``(1 -+ t)**d`` and ``Q``
the odd ones.  ``T_j = int t**j (1-t^2)**m trig(z t) dt`` starts from the
Poisson integral ``T_0 = c z**-nu J_nu(z)`` (``nu = m + 1/2``) and obeys
``T_(j+1) = -T_j'`` for even j, ``+T_j'`` for odd j.  Orders above
``nu + 1`` are lowered with the three-term recurrence, so P and Q are
Laurent polynomials in ``1/z`` times ``J_nu`` and ``J_(nu+1)``.  Odd n see
only ``P**2`` and even n only ``Q**2``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Union

from .errors import DomainError, RangeError, UnsupportedError
from .exactval import ExactSum, ExactValue, as_rational, beta_exact, gamma_exact

HALF = Fraction(1, 2)
PI = ExactValue.pi_power(1)


# ------------------------------------------------------------------ families


@dataclass(frozen=True)
class BesselSeries:
    """``sum J_p(n pi/2) J_q(n pi/2) / n**e`` over odd, even or all n >= 1.

    The even family is written in the tables as ``sum_k J_p J_q(k pi)/(2k)**e``
    which is the same sum with ``n = 2k``.
    """

    parity: str  # "odd" | "even" | "all"
    p: int
    q: int
    e: int

    def __post_init__(self):
        if self.parity not in ("odd", "even", "all"):
            raise DomainError(f"unknown parity {self.parity!r}")
        if self.p < 0 or self.q < 0:
            raise DomainError("Bessel orders must be non-negative")
        if self.p > self.q:
            p, q = self.q, self.p
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "q", q)

    @property
    def kind(self) -> str:
        head = {"odd": "Odd", "even": "Even", "all": "AllN"}[self.parity]
        if self.parity == "all":
            return "AllNBesselProd"
        return head + ("BesselSq" if self.p == self.q else "BesselProd")

    @property
    def params(self) -> tuple:
        if self.p == self.q and self.parity != "all":
            return (self.p, self.e)
        return (self.p, self.q, self.e)

    def indices(self, count: int) -> list[int]:
        """The first ``count`` values of n."""
        if self.parity == "odd":
            return [2 * k + 1 for k in range(count)]
        if self.parity == "even":
            return [2 * k for k in range(1, count + 1)]
        return list(range(1, count + 1))

    def __str__(self):
        return f"{self.kind}({', '.join(str(x) for x in self.params)})"


@dataclass(frozen=True)
class HyperSeries:
    """``sum_n n**w [pFq(uppers; lowers; -n^2 pi^2/4)]**2`` for the state (alpha, beta).

    The pFq is the 2F3 of the coefficient integral, with matching
    parameters cancelled (:func:`pfq_reduce`).
    """

    alpha: Fraction
    beta: Fraction
    w: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        object.__setattr__(self, "beta", as_rational(self.beta))
        lo = {2: HALF, 4: HALF, 6: Fraction(3, 2)}.get(self.w)
        if lo is None:
            raise DomainError(f"HyperSq power must be 2, 4 or 6, got {self.w}")
        ok = min(self.alpha, self.beta) >= lo if self.w == 2 else min(self.alpha, self.beta) > lo
        if not ok:
            raise DomainError(f"HyperSq(w={self.w}) outside its domain at ({self.alpha}, {self.beta})")

    kind = "HyperSq"

    @property
    def params(self) -> tuple:
        return (self.alpha, self.beta, self.w)

    @property
    def parameters(self) -> tuple[list[Fraction], list[Fraction]]:
        return hyper_parameters(self.alpha, self.beta)

    def indices(self, count: int) -> list[int]:
        return list(range(1, count + 1))

    def __str__(self):
        return f"HyperSq({self.alpha}, {self.beta}, {self.w})"


SeriesFamily = Union[BesselSeries, HyperSeries]


def OddBesselSq(p: int, e: int) -> BesselSeries:
    return BesselSeries("odd", p, p, e)


def OddBesselProd(p: int, q: int, e: int) -> BesselSeries:
    return BesselSeries("odd", p, q, e)


def EvenBesselSq(p: int, e: int) -> BesselSeries:
    return BesselSeries("even", p, p, e)


def EvenBesselProd(p: int, q: int, e: int) -> BesselSeries:
    return BesselSeries("even", p, q, e)


def AllNBesselProd(p: int, q: int, e: int) -> BesselSeries:
    return BesselSeries("all", p, q, e)


def HyperSq(alpha, beta, w: int) -> HyperSeries:
    return HyperSeries(alpha, beta, w)


def family_to_dict(f: SeriesFamily) -> dict:
    return {"kind": f.kind, "params": [str(x) for x in f.params], "label": str(f)}


def family_from_dict(d: dict) -> SeriesFamily:
    kind = d["kind"]
    ps = [as_rational(x) for x in d["params"]]
    if kind == "HyperSq":
        return HyperSq(ps[0], ps[1], int(ps[2]))
    ints = [int(x) for x in ps]
    ctor = {
        "OddBesselSq": OddBesselSq,
        "OddBesselProd": OddBesselProd,
        "EvenBesselSq": EvenBesselSq,
        "EvenBesselProd": EvenBesselProd,
        "AllNBesselProd": AllNBesselProd,
    }.get(kind)
    if ctor is None:
        raise DomainError(f"unknown family kind {kind!r}")
    return ctor(*ints)


# --------------------------------------------------------- general formulas


def _state(alpha, beta, lo: Fraction, strict: bool) -> tuple[Fraction, Fraction]:
    a, b = as_rational(alpha), as_rational(beta)
    bad = (min(a, b) <= lo) if strict else (min(a, b) < lo)
    if bad:
        rel = ">" if strict else ">="
        raise DomainError(f"needs alpha, beta {rel} {lo}, got ({a}, {b})")
    for v in (a, b):
        if v.denominator not in (1, 2):
            raise DomainError(f"exact closed forms need integer or half-integer parameters, got {v}")
    return a, b


def normalization_K(alpha, beta) -> ExactValue:
    """``K = int x^(2 alpha) (1-x)^(2 beta) dx = B(2 alpha+1, 2 beta+1)``."""
    a, b = as_rational(alpha), as_rational(beta)
    return beta_exact(2 * a + 1, 2 * b + 1)


def _hyper_B(a: Fraction, b: Fraction) -> ExactValue:
    return beta_exact(a + 2, b + 1)


def parseval_sum_closed(alpha, beta) -> ExactValue:
    """``HyperSq(alpha, beta, 2) = K / (2 pi^2 B(alpha+2, beta+1)^2)``."""
    a, b = _state(alpha, beta, HALF, strict=False)
    return normalization_K(a, b) / (2 * PI**2 * _hyper_B(a, b) ** 2)


def n4_sum_closed(alpha, beta) -> ExactValue:
    """``HyperSq(alpha, beta, 4)``; equivalent to the mean energy."""
    a, b = _state(alpha, beta, HALF, strict=True)
    num = a * b * beta_exact(2 * a - 1, 2 * b - 1)
    return num / (2 * PI**4 * (2 * a + 2 * b - 1) * _hyper_B(a, b) ** 2)


def n6_sum_closed(alpha, beta) -> ExactValue:
    """``HyperSq(alpha, beta, 6)``; equivalent to the mean squared energy."""
    a, b = _state(alpha, beta, Fraction(3, 2), strict=True)
    g = gamma_exact
    num = 3 * a * b * (b - 1) * g(2 * a - 1) * g(2 * b - 3)
    den = 4 * PI**6 * (2 * a - 3) * (2 * a + 2 * b - 5) * (2 * a + 2 * b - 3) * g(2 * a + 2 * b - 6)
    ratio = g(a + b + 3) / (g(a + 2) * g(b + 1))
    return num / den * ratio**2


def _check_pq(p, q):
    if int(p) != p or int(q) != q or p < 1 or q < 1:
        raise DomainError(f"p, q must be positive integers, got ({p}, {q})")
    return int(p), int(q)


def nis1_closed(p: int, q: int) -> ExactSum:
    """``sum_n J_p J_q(n pi/2) / n^(p+q)`` over all n >= 1."""
    p, q = _check_pq(p, q)
    g = gamma_exact
    h = HALF
    quarter_pi = PI / 4
    # (pi/4)^(p+q-1/2) = (pi/4)^(p+q) * 2 / sqrt(pi)
    power = quarter_pi ** (p + q) * 2 / ExactValue.pi_power(h)
    first = g(p + q) * power / (g(p + q + h) * g(p + h) * g(q + h))
    second = quarter_pi ** (p + q) / (2 * g(p + 1) * g(q + 1))
    return ExactSum.of(first, -second)


def nis2_closed(p: int, q: int) -> ExactValue:
    """``sum_n J_p J_q(n pi/2) / n^(p+q-2)`` over all n >= 1, for p + q > 2."""
    p, q = _check_pq(p, q)
    if p + q <= 2:
        raise DomainError("nis2 needs p + q > 2 (Gamma pole at p + q - 2 = 0)")
    g = gamma_exact
    h = HALF
    # (pi/4)^(p+q-5/2) = (pi/4)^(p+q-2) * 2 / sqrt(pi)
    power = (PI / 4) ** (p + q - 2) * 2 / ExactValue.pi_power(h)
    return power * g(p + q - 2) / (2 * g(p - h) * g(q - h) * g(p + q - h))


# ------------------------------------------------------------ hypergeometric


def pfq_reduce(uppers: Iterable, lowers: Iterable) -> tuple[list[Fraction], list[Fraction]]:
    """Cancel parameters common to both lists; both results sorted."""
    ups = sorted(as_rational(u) for u in uppers)
    lows = sorted(as_rational(v) for v in lowers)
    out_u = []
    for u in ups:
        if u in lows:
            lows.remove(u)
        else:
            out_u.append(u)
    return out_u, lows


def hyper_parameters(alpha, beta) -> tuple[list[Fraction], list[Fraction]]:
    """Reduced parameters of the 2F3 in ``I(b) = b B(alpha+2, beta+1) 2F3(...; -b^2/4)``."""
    a, b = as_rational(alpha), as_rational(beta)
    uppers = [(a + 2) / 2, (a + 3) / 2]
    lowers = [(a + b + 3) / 2, (a + b + 4) / 2, Fraction(3, 2)]
    return pfq_reduce(uppers, lowers)


def hyper_prefactor(alpha, beta) -> ExactValue:
    """``sum n^(2r) |C_n|^2 = hyper_prefactor * HyperSq(alpha, beta, 2r+2)``."""
    a, b = as_rational(alpha), as_rational(beta)
    return 2 * PI**2 * _hyper_B(a, b) ** 2 / normalization_K(a, b)


# --------------------------------------------------------- Bessel expansion

# A Laurent form is {(order, k): coeff} meaning coeff * J_order(z) * z**-k.
Laurent = dict


def _add(acc: Laurent, key, c):
    if c:
        v = acc.get(key, 0) + c
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)


def _derivative(f: Laurent) -> Laurent:
    """d/dz [J_a z^-k] = (a-k) J_a z^(-k-1) - J_(a+1) z^-k."""
    out: Laurent = {}
    for (a, k), c in f.items():
        _add(out, (a, k + 1), c * (a - k))
        _add(out, (a + 1, k), -c)
    return out


def _lower_orders(f: Laurent, nu: int) -> Laurent:
    """Rewrite orders above nu+1 with J_a = 2(a-1)/z J_(a-1) - J_(a-2)."""
    out = dict(f)
    while True:
        top = max((a for a, _ in out), default=nu)
        if top <= nu + 1:
            return out
        for (a, k), c in list(out.items()):
            if a == top:
                del out[(a, k)]
                _add(out, (a - 1, k + 1), c * 2 * (a - 1))
                _add(out, (a - 2, k), -c)


def _square(f: Laurent) -> dict:
    """{(p, q, e): coeff} of f**2 with p <= q."""
    out: dict = {}
    items = list(f.items())
    for (a1, k1), c1 in items:
        for (a2, k2), c2 in items:
            p, q = min(a1, a2), max(a1, a2)
            _add(out, (p, q, k1 + k2), c1 * c2)
    return out


def _half_integer_state(alpha, beta) -> tuple[Fraction, Fraction]:
    a, b = as_rational(alpha), as_rational(beta)
    if a.denominator != 2 or b.denominator != 2:
        raise DomainError(f"Bessel expansion needs half-integer alpha and beta, got ({a}, {b})")
    if a < HALF or b < HALF:
        raise DomainError("alpha and beta must be at least 1/2")
    return a, b


def parity_parts(alpha, beta) -> tuple[Laurent, Laurent, int]:
    """P (odd n) and Q (even n) as Laurent forms in the J_nu, J_(nu+1) basis."""
    a, b = _half_integer_state(alpha, beta)
    m = min(a, b)
    d = int(abs(a - b))
    nu = int(m + HALF)
    t: list[Laurent] = [{(nu, nu): Fraction(1)}]
    for j in range(d):
        step = _derivative(t[-1])
        if j % 2 == 0:
            step = {key: -c for key, c in step.items()}
        t.append(_lower_orders(step, nu))
    P: Laurent = {}
    Q: Laurent = {}
    for j in range(d + 1):
        target = P if j % 2 == 0 else Q
        for key, c in t[j].items():
            _add(target, key, comb(d, j) * c)
    return P, Q, nu


def state_expansion(alpha, beta, r: int = 0) -> dict[BesselSeries, ExactValue]:
    """``sum_n n^(2r) |C_n|^2`` as an exact combination of Bessel series.

    Returns ``{family: coefficient}``.  For r = 0 the combination equals 1.
    """
    a, b = _half_integer_state(alpha, beta)
    P, Q, nu = parity_parts(a, b)
    m = min(a, b)
    d = int(abs(a - b))
    # |C_n|^2 = (2/K) 2^(-2(2m+d+1)) c^2 [P^2 or Q^2],  c = sqrt(pi) Gamma(m+1) 2^nu
    c2 = PI * gamma_exact(m + 1) ** 2 * Fraction(4) ** nu
    pref = 2 * c2 / normalization_K(a, b) / Fraction(4) ** int(2 * m + d + 1)
    out: dict[BesselSeries, ExactValue] = {}
    for parity, form in (("odd", P), ("even", Q)):
        for (p, q, k), c in _square(form).items():
            # z^-k = (2/pi)^k n^-k
            e = k - 2 * r
            if e <= 1:
                raise DomainError(f"weighted series n^{2 * r}|C_n|^2 diverges for state ({a}, {b})")
            fam = BesselSeries(parity, p, q, e)
            coeff = pref * c * (2 / PI) ** k
            prev = out.get(fam)
            out[fam] = coeff if prev is None else prev + coeff
    return {f: v for f, v in out.items() if not v.is_zero}


def bessel_conversion(alpha, beta) -> BesselSeries:
    """The table family a half-integer state produces."""
    a, b = _half_integer_state(alpha, beta)
    d = abs(a - b)
    if d > 2:
        raise UnsupportedError(
            f"|alpha - beta| = {d} > 2: the Parseval relation keeps several unknown series"
        )
    m = min(a, b)
    if d == 0:
        p = int(a + HALF)
        return OddBesselSq(p, 2 * p)
    if d == 1:
        p = int(max(a, b) + HALF)
        return EvenBesselSq(p, 2 * p - 2)
    p = int(m + HALF)
    return OddBesselProd(p, p + 1, 2 * p + 1)


def state_for(fam: BesselSeries) -> tuple[Fraction, Fraction] | None:
    """The state whose Parseval relation defines ``fam`` (alpha <= beta)."""
    p, q, e = fam.p, fam.q, fam.e
    if fam.parity == "odd" and p == q and e == 2 * p and p >= 1:
        return (p - HALF, p - HALF)
    if fam.parity == "even" and p == q and e == 2 * p - 2 and p >= 2:
        return (p - Fraction(3, 2), p - HALF)
    if fam.parity == "odd" and q == p + 1 and e == 2 * p + 1 and p >= 1:
        return (p - HALF, p + Fraction(3, 2))
    return None


# -------------------------------------------------------------- the DAG


@dataclass(frozen=True)
class Derivation:
    """One node of the subtraction DAG."""

    family: BesselSeries
    value: ExactSum
    rule: str
    consumes: tuple[BesselSeries, ...]


class _WriteOnceCache:
    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict = {}

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()


_dag = _WriteOnceCache()


def clear_cache() -> None:
    """Forget every derived closed form (for cold-start timing)."""
    _dag.clear()


def _solve_parseval(fam: BesselSeries, state) -> Derivation:
    expansion = state_expansion(*state)
    if fam not in expansion:
        raise UnsupportedError(f"{fam} does not occur in the expansion of state {state}")
    rest = ExactSum()
    consumed = []
    for other, coeff in expansion.items():
        if other == fam:
            continue
        consumed.append(other)
        rest = rest + coeff * derive(other).value
    value = (ExactSum.of(1) - rest) / expansion[fam]
    return Derivation(fam, value, f"parseval{tuple(str(s) for s in state)}", tuple(consumed))


def derive(fam: BesselSeries) -> Derivation:
    """Closed form of a Bessel family, with the rule and inputs used.

    Raises :class:`UnsupportedError` when no generator reaches ``fam``.
    """
    hit = _dag.get(fam)
    if hit is not None:
        return hit
    p, q, e = fam.p, fam.q, fam.e
    state = state_for(fam)
    if state is not None:
        node = _solve_parseval(fam, state)
    elif fam.parity == "all" and e == p + q and p >= 1:
        node = Derivation(fam, nis1_closed(p, q), "nis1", ())
    elif fam.parity == "all" and e == p + q - 2 and p >= 1 and p + q > 2:
        node = Derivation(fam, ExactSum.of(nis2_closed(p, q)), "nis2", ())
    else:
        partner = BesselSeries("odd" if fam.parity == "even" else "even", p, q, e)
        whole = BesselSeries("all", p, q, e)
        if fam.parity in ("odd", "even") and state_for(partner) is not None and _has_nis(whole):
            node = Derivation(
                fam, derive(whole).value - derive(partner).value, "all-minus-partner", (whole, partner)
            )
        else:
            raise UnsupportedError(f"no closed form generator reaches {fam}")
    return _dag.put(fam, node)


def _has_nis(f: BesselSeries) -> bool:
    return f.p >= 1 and (f.e == f.p + f.q or (f.e == f.p + f.q - 2 and f.p + f.q > 2))


def family_closed(fam: SeriesFamily) -> ExactSum:
    """Exact value of any supported series family."""
    if isinstance(fam, HyperSeries):
        gen = {2: parseval_sum_closed, 4: n4_sum_closed, 6: n6_sum_closed}[fam.w]
        return ExactSum.of(gen(fam.alpha, fam.beta))
    return derive(fam).value


def moment_route_value(p: int, r: int) -> ExactSum:
    """``OddBesselSq(p, 2p - 2r)`` from the n^(2r+2) general formula at alpha = beta = p - 1/2.

    r = 1 uses the n^4 formula (the Table 6 family), r = 2 the n^6 formula.
    """
    a = Fraction(p) - HALF
    gen = {1: n4_sum_closed, 2: n6_sum_closed}.get(r)
    if gen is None:
        raise DomainError("moment route needs r in {1, 2}")
    expansion = state_expansion(a, a, r)
    (fam, coeff), = expansion.items()
    total = hyper_prefactor(a, a) * gen(a, a)
    return ExactSum.of(total / coeff)


# ------------------------------------------------------- identity (24)

EQ24_STATE = (HALF, Fraction(7, 2))
EQ24_TARGET = ExactValue(Fraction(4, 9))
EQ24_TERMS: tuple[tuple[ExactValue, BesselSeries], ...] = (
    (ExactValue(9, -4), EvenBesselSq(1, 4)),
    (ExactValue(4), OddBesselSq(1, 2)),
    (ExactValue(576, -8), EvenBesselSq(2, 6)),
    (ExactValue(-96, -4), EvenBesselSq(2, 4)),
    (ExactValue(4), EvenBesselSq(2, 2)),
    (ExactValue(81, -4), OddBesselSq(2, 4)),
    (ExactValue(-144, -6), EvenBesselProd(1, 2, 5)),
    (ExactValue(12, -2), EvenBesselProd(1, 2, 3)),
    (ExactValue(-36, -2), OddBesselProd(1, 2, 3)),
)


# ------------------------------------------------------------------ tables

TABLE_ROWS: dict[int, list] = {
    1: list(range(1, 11)),
    2: list(range(1, 10)),
    3: list(range(2, 11)),
    4: list(range(1, 11)),
    5: list(range(1, 10)),
    6: list(range(2, 11)),
    7: [
        (Fraction(a), Fraction(b, 2))
        for a, b in ((1, 1), (2, 1), (3, 1), (1, 3), (2, 3), (3, 3), (1, 5), (2, 5), (3, 5))
    ],
}


def table_family(table: int, row) -> SeriesFamily:
    key = normalize_row(table, row)
    if table == 1:
        return OddBesselSq(key, 2 * key)
    if table == 2:
        return OddBesselProd(key, key + 1, 2 * key + 1)
    if table == 3:
        return EvenBesselSq(key, 2 * key - 2)
    if table == 4:
        return EvenBesselSq(key, 2 * key)
    if table == 5:
        return EvenBesselProd(key, key + 1, 2 * key + 1)
    if table == 6:
        return OddBesselSq(key, 2 * key - 2)
    return HyperSq(key[0], key[1], 2)


def table_state(table: int, row) -> tuple[Fraction, Fraction] | None:
    """The well state behind a row of Tables 1-3 and 7 (None for 4-6)."""
    key = normalize_row(table, row)
    if table == 7:
        return key
    if table in (1, 2, 3):
        return state_for(table_family(table, key))
    return None


def normalize_row(table: int, row):
    """Canonical row key: p for Tables 1-6, (alpha, beta) for Table 7.

    Tables 2 and 5 also accept ``(p, p+1)`` or ``"p;q"``; Table 7 accepts
    ``"alpha,beta"`` strings.
    """
    if table not in TABLE_ROWS:
        raise RangeError(f"there is no table {table}")
    key = row
    if table == 7:
        if isinstance(row, str):
            parts = row.replace(";", ",").split(",")
            if len(parts) != 2:
                raise RangeError(f"Table 7 rows are 'alpha,beta', got {row!r}")
            row = tuple(parts)
        try:
            key = (as_rational(row[0]), as_rational(row[1]))
        except (TypeError, ValueError, IndexError) as exc:
            raise RangeError(f"bad Table 7 row {row!r}") from exc
    else:
        if isinstance(row, str):
            row = tuple(int(x) for x in row.replace(",", ";").split(";")) if (";" in row or "," in row) else int(row)
        if isinstance(row, tuple):
            if table not in (2, 5) or len(row) != 2 or row[1] != row[0] + 1:
                raise RangeError(f"row {row!r} not in Table {table}")
            row = row[0]
        key = row
    if key not in TABLE_ROWS[table]:
        raise RangeError(f"row {row!r} is outside the printed range of Table {table}")
    return key


@dataclass(frozen=True)
class TableRow:
    table: int
    row: object
    family: SeriesFamily
    exact: ExactSum
    printed: ExactSum
    match: bool
    state: tuple | None
    rule: str
    consumes: tuple
    norm_generated: ExactValue | None = None
    norm_printed: Fraction | None = None
    norm_a_power_printed: Fraction | None = None
    norm_match: bool = True

    def to_dict(self) -> dict:
        out = {
            "table": self.table,
            "row": _row_label(self.table, self.row),
            "family": str(self.family),
            "params": [str(x) for x in self.family.params],
            "exact": self.exact.to_dict(),
            "exact_text": str(self.exact),
            "paper_printed": self.printed.to_dict(),
            "paper_printed_text": str(self.printed),
            "match": self.match,
            "rule": self.rule,
            "consumes": [str(f) for f in self.consumes],
        }
        if self.state is not None:
            out["state"] = [str(self.state[0]), str(self.state[1])]
        if self.norm_generated is not None:
            out["normalization_squared"] = str(self.norm_generated)
            out["normalization_printed"] = str(self.norm_printed)
            out["normalization_match"] = self.norm_match
        return out


def _row_label(table, key) -> str:
    if table == 7:
        return f"{key[0]},{key[1]}"
    if table in (2, 5):
        return f"{key};{key + 1}"
    return str(key)


def table_entry(table: int, row) -> TableRow:
    """Generated closed form of one table row, compared with the printed value."""
    from .golden import printed_normalization, printed_value

    key = normalize_row(table, row)
    fam = table_family(table, key)
    if isinstance(fam, HyperSeries):
        exact = family_closed(fam)
        rule, consumes = "parseval-general", ()
    else:
        node = derive(fam)
        exact, rule, consumes = node.value, node.rule, node.consumes
    printed = printed_value(table, key)
    state = table_state(table, key)
    extra = {}
    if state is not None:
        c2, a_pow = printed_normalization(table, key)
        gen = ExactValue(1) / normalization_K(*state)
        a_expected = state[0] + state[1] + HALF
        extra = dict(
            norm_generated=gen,
            norm_printed=c2,
            norm_a_power_printed=a_pow,
            norm_match=(gen == ExactValue(c2) and a_pow == a_expected),
        )
    return TableRow(table, key, fam, exact, printed, exact == printed, state, rule, tuple(consumes), **extra)


def table(table_no: int) -> list[TableRow]:
    if table_no not in TABLE_ROWS:
        raise RangeError(f"there is no table {table_no}")
    return [table_entry(table_no, r) for r in TABLE_ROWS[table_no]]
