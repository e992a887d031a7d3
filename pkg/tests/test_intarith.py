import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from primnormal import intarith
from primnormal.errors import CapExceeded
from primnormal.intarith import IntFactorization, factorize


@pytest.mark.parametrize(
    "n, expected",
    [(80, [(2, 4), (5, 1)]), (2, [(2, 1)]), (5**5 - 1, [(2, 2), (11, 1), (71, 1)])],
)
def test_factorize_examples(n, expected):
    f = factorize(n)
    assert list(f.factors) == expected
    assert f.to_list() == [list(pe) for pe in expected]
    assert f.value == n


@pytest.mark.parametrize("n, phi", [(8, 4), (62, 30), (80, 32)])
def test_euler_phi_examples(n, phi):
    assert intarith.euler_phi(n) == phi
    assert intarith.euler_phi(factorize(n)) == phi


def test_big_w_int_examples():
    assert intarith.big_w_int(80) == 4
    assert intarith.big_w_int(2) == 2
    # 781 = 11 * 71 has two prime factors
    assert factorize(781).factors == ((11, 1), (71, 1))
    assert intarith.big_w_int((5**5 - 1) // 4) == 4


@pytest.mark.parametrize("t, th", [(8, Fraction(1, 2)), (26, Fraction(6, 13)), (124, Fraction(15, 31))])
def test_theta_examples(t, th):
    assert intarith.theta(t) == th


@pytest.mark.parametrize("t, rad", [(80, 10), (26, 26), (124, 62)])
def test_squarefree_part(t, rad):
    assert intarith.squarefree_part(t) == rad


def test_w_bound_constants():
    assert intarith.universal_w_constant(4) < 4.9
    assert intarith.universal_w_constant(8) < 4514.7
    # primes up to 2^a all missing: empty product
    assert intarith.w_bound_constant(17 * 19, 4) == 1.0
    assert intarith.universal_w_constant(8, exclude=[5]) < 2760.39


def test_ramanujan_bound():
    assert intarith.ramanujan_bound(5, 1) == pytest.approx(3.6 * math.log(5))
    assert intarith.ramanujan_bound(5, 1) == pytest.approx(5.794, abs=1e-3)
    assert 3124 / intarith.euler_phi(3124) < intarith.ramanujan_bound(5, 1)


def test_factor_power_minus_one_matches_plain_factoring():
    for p, e in [(3, 12), (5, 10), (7, 9), (3, 53), (5, 36)]:
        assert factor_dict(intarith.factor_power_minus_one(p, e)) == sympy.factorint(p**e - 1)


def test_cap_is_enforced():
    # product of two 70-bit primes is beyond a 100-bit cap
    a, b = sympy.nextprime(2**70), sympy.nextprime(2**71)
    with pytest.raises(CapExceeded):
        factorize(a * b, cap=2**100)


def test_as_prime_power():
    assert intarith.as_prime_power(125) == (5, 3)
    assert intarith.as_prime_power(9811) == (9811, 1)
    assert intarith.as_prime_power(12) is None
    assert intarith.as_prime_power(1) is None


def factor_dict(f: IntFactorization) -> dict[int, int]:
    return dict(f.to_list())


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=10**15))
def test_factorize_agrees_with_sympy(n):
    assert factor_dict(factorize(n)) == sympy.factorint(n)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=10**9))
def test_arithmetic_functions_agree_with_sympy(n):
    assert intarith.euler_phi(n) == sympy.totient(n)
    assert intarith.mobius(n) == sympy.mobius(n)
    assert intarith.divisors(n) == sympy.divisors(n)
    assert intarith.big_w_int(n) == 2 ** len(sympy.primefactors(n))


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=2, max_value=10**6))
def test_mobius_sums_to_zero_over_divisors(n):
    # sum_{d|n} mu(d) = 0 for n > 1; the identity behind every indicator
    assert sum(intarith.mobius(d) for d in intarith.divisors(n)) == 0
    assert intarith.theta(n) == Fraction(intarith.euler_phi(n), n)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=2, max_value=10**12))
def test_is_prime_agrees_with_sympy(n):
    assert intarith.is_prime(n) == sympy.isprime(n)
