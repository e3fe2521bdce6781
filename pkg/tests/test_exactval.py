import json
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from wellsum import DomainError, ExactSum, ExactValue, PrecisionContext
from wellsum.exactval import as_rational, beta_exact, exact_to_float, gamma_exact, pochhammer_exact

PI = ExactValue.pi_power(1)
half_ints = st.integers(1, 60).map(lambda k: F(k, 2))


def test_as_rational():
    assert as_rational("3/4") == F(3, 4)
    assert as_rational(5) == F(5)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_pi_power_rejects_quarter():
    with pytest.raises(DomainError):
        ExactValue.pi_power(F(1, 4))


def test_zero_has_no_pi_power():
    assert ExactValue(0, 7) == ExactValue(0)


@given(half_ints)
def test_gamma_matches_sympy(z):
    g = gamma_exact(z)
    c, k = oracles.gamma_exact(z)
    assert (g.coeff, g.pi_half_power) == (c, k)


def test_gamma_values():
    assert gamma_exact(F(1, 2)) == ExactValue.pi_power(F(1, 2))
    assert gamma_exact(F(5, 2)) == ExactValue(F(3, 4), 1)
    assert gamma_exact(6) == ExactValue(120)


@pytest.mark.parametrize("z", [0, -1, F(-1, 2), F(1, 3)])
def test_gamma_domain(z):
    with pytest.raises(DomainError):
        gamma_exact(z)


@given(half_ints)
def test_gamma_recurrence(z):
    assert gamma_exact(z + 1) == ExactValue(z) * gamma_exact(z)


@given(half_ints)
def test_legendre_duplication(z):
    lhs = gamma_exact(z) * gamma_exact(z + F(1, 2))
    rhs = ExactValue(F(2) ** int(1 - 2 * z), 1) * gamma_exact(2 * z)
    assert lhs == rhs


@given(half_ints, half_ints)
def test_beta_symmetric(a, b):
    assert beta_exact(a, b) == beta_exact(b, a)


def test_beta_values():
    assert beta_exact(2, 2) == ExactValue(F(1, 6))
    assert beta_exact(F(1, 2), F(1, 2)) == PI


@given(st.integers(-20, 20).map(lambda k: F(k, 3)), st.integers(0, 12))
def test_pochhammer_matches_sympy(a, k):
    assert pochhammer_exact(a, k) == oracles.pochhammer(a, k)


def test_pochhammer_negative_index():
    with pytest.raises(DomainError):
        pochhammer_exact(1, -1)


def test_sum_canonical():
    s = ExactSum.of(ExactValue(F(1, 3)), ExactValue(F(-1, 32), 4), ExactValue(F(1, 32), 4))
    assert s == ExactSum.of(F(1, 3))
    assert len(ExactSum.of(ExactValue(1, 2), ExactValue(-1, 2))) == 0


def test_sum_printing():
    assert str(ExactSum.of(F(2, 3), ExactValue(F(-1, 32), 4))) == "2/3 - pi^2/32"
    assert str(ExactSum.of(ExactValue(F(3675, 2048), -4))) == "3675/(2048*pi^2)"


terms = st.lists(
    st.builds(ExactValue, st.fractions(max_denominator=10**6), st.integers(-30, 30)), max_size=6
)


@given(terms)
def test_json_roundtrip(ts):
    s = ExactSum(ts)
    text = s.to_json()
    assert ExactSum.from_json(text) == s
    for t in json.loads(text)["terms"]:
        assert isinstance(t["num"], str) and isinstance(t["den"], str)


@given(terms, terms)
def test_sum_arithmetic(a, b):
    a, b = ExactSum(a), ExactSum(b)
    assert (a + b) - b == a
    assert a - a == ExactSum()


def test_to_float_two_pi_sq_over_315():
    v = exact_to_float(ExactValue(F(2, 315), 4), PrecisionContext(320))
    with mpmath.workdps(100):
        ref = 2 * mpmath.pi**2 / 315
        assert abs(v - ref) < mpmath.mpf(10) ** -90
    assert mpmath.nstr(v, 10) == "0.06266415493"


def test_to_float_half_powers():
    ctx = PrecisionContext(256)
    v = exact_to_float(ExactValue(3, -3), ctx)
    with mpmath.workdps(80):
        assert abs(v - 3 / mpmath.pi**1.5) < mpmath.mpf(10) ** -70
