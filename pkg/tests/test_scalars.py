import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siegel_modp.scalars import (
    ModScalar,
    NotPIntegralError,
    PrimeModulus,
    bernoulli,
    divisors,
    format_rational,
    parse_rational,
    reduce_scalar,
    v_p,
)


def trial_valuation(x: Fraction, p: int) -> int:
    def count(n):
        c = 0
        while n % p == 0:
            n //= p
            c += 1
        return c

    return count(abs(x.numerator)) - count(x.denominator)


def test_v_p_examples():
    assert v_p(5, 5) == 1
    assert v_p(0, 5) == math.inf
    assert v_p(240, 5) == 1
    assert v_p(Fraction(3, 25), 5) == -2
    assert v_p(240, 5) == trial_valuation(Fraction(240), 5)


nonzero_rationals = st.fractions().filter(lambda x: x != 0)


@settings(max_examples=1000)
@given(nonzero_rationals, nonzero_rationals, st.sampled_from([5, 7, 11, 13]))
def test_v_p_is_additive(x, y, p):
    assert v_p(x * y, p) == v_p(x, p) + v_p(y, p)


def test_bernoulli_recurrence_values():
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(6) == Fraction(1, 42)
    assert -2 * 4 / bernoulli(4) == 240
    assert -2 * 6 / bernoulli(6) == -504
    assert bernoulli(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("k", [0, 3, -2])
def test_bernoulli_rejects_bad_index(k):
    with pytest.raises(ValueError):
        bernoulli(k)


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert sum(d**3 for d in divisors(6)) == 252
    with pytest.raises(ValueError):
        divisors(0)


def test_prime_modulus_validation():
    assert PrimeModulus(19).p == 19
    for bad in (4, 3, 2, 21, 1 << 65):
        with pytest.raises(ValueError):
            PrimeModulus(bad)
    # Miller-Rabin against a sieve-free check for small n
    from siegel_modp.scalars import is_probable_prime

    for n in range(2, 2000):
        assert is_probable_prime(n) == all(n % d for d in range(2, math.isqrt(n) + 1))
    assert is_probable_prime((1 << 61) - 1)


def test_reduce_rejects_non_p_integral():
    assert reduce_scalar(Fraction(1, 24), 11) == pow(24, -1, 11)
    with pytest.raises(NotPIntegralError) as info:
        reduce_scalar(Fraction(3, 22), 11, where=(1, 0, 1))
    assert (info.value.numerator, info.value.denominator, info.value.p) == (3, 22, 11)


residues = st.integers(min_value=0, max_value=10)


@given(residues, residues, residues)
def test_modscalar_field_laws(a, b, c):
    x, y, z = (ModScalar(v, 11) for v in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if x:
        assert x * x.inverse() == ModScalar(1, 11)


@given(st.fractions(), st.sampled_from([5, 7, 13]), st.integers(-5, 5))
def test_reduce_round_trip(x, p, k):
    if x.denominator % p == 0:
        return
    r = ModScalar.reduce(x, p)
    lifted = r.residue + k * p
    assert ModScalar.reduce(lifted, p) == r


def test_rational_text_form():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-8, 4)) == "-2"
    assert parse_rational("-3/2") == Fraction(-3, 2)
    assert parse_rational("7") == 7
