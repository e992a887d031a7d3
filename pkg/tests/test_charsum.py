import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primnormal import charsum, intarith, structure
from primnormal.charsum import AddCharacter, MultCharacter, eval_add_char, eval_mult_char, gauss_sum_g2
from primnormal.errors import NotADivisor, PreconditionViolated
from primnormal.ffield import field_for
from primnormal.fqpoly import FqPolynomial, poly_phi


def naive_mult_char(eta: MultCharacter, v: tuple) -> complex:
    """Discrete log by repeated multiplication, no tables."""
    F = eta.field
    if not any(v):
        return 1 if eta.is_trivial else 0
    cur, j = F.one, 0
    while cur != v:
        cur = F.mul(cur, F.generator)
        j += 1
    return cmath.exp(2j * math.pi * eta.index * j / eta.order_d)


def naive_add_char(F, delta: tuple, v: tuple) -> complex:
    t = F.abs_trace(F.mul(delta, v))
    return cmath.exp(2j * math.pi * t / F.p)


def test_mult_char_examples():
    F = field_for(5, 2)
    g = F.wrap(F.generator)
    triv = MultCharacter(F, 1, 0)
    assert eval_mult_char(triv, F.wrap(F.zero)) == 1
    assert all(eval_mult_char(triv, F.wrap(v)) == 1 for v in list(F.elements())[1:])
    quad = MultCharacter(F, 2, 1)
    assert eval_mult_char(quad, g) == pytest.approx(-1)
    with pytest.raises(NotADivisor):
        MultCharacter(F, 5, 1)
    with pytest.raises(PreconditionViolated):
        MultCharacter(F, 4, 2)


@pytest.mark.parametrize("q, n", [(3, 2), (5, 2), (3, 3)])
def test_characters_match_naive_evaluation(q, n):
    F = field_for(q, n)
    elems = list(F.elements())
    for d in intarith.divisors(F.order):
        for eta in charsum.characters_of_order(F, d):
            for v in elems:
                assert abs(eval_mult_char(eta, F.wrap(v)) - naive_mult_char(eta, v)) < 1e-9
    for delta in elems[::3]:
        chi = AddCharacter(F, delta)
        for v in elems:
            assert abs(eval_add_char(chi, F.wrap(v)) - naive_add_char(F, delta, v)) < 1e-9


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_mult_char_is_multiplicative(data):
    F = field_for(7, 2)
    d = data.draw(st.sampled_from(intarith.divisors(F.order)))
    eta = data.draw(st.sampled_from(charsum.characters_of_order(F, d)))
    pick = st.integers(1, F.size - 1).map(lambda i: F.wrap(F.from_index(i)))
    a, b = data.draw(pick), data.draw(pick)
    assert abs(eval_mult_char(eta, a * b) - eval_mult_char(eta, a) * eval_mult_char(eta, b)) < 1e-9


def naive_g2(eta, delta) -> complex:
    F = eta.field
    return sum(naive_mult_char(eta, v) * naive_add_char(F, delta, F.mul(v, v)) for v in F.elements())


@pytest.mark.parametrize("q, n", [(3, 2), (5, 2)])
def test_gauss_sum_matches_naive(q, n):
    F = field_for(q, n)
    for d in intarith.divisors(F.order):
        for eta in charsum.characters_of_order(F, d):
            for delta in F.elements():
                assert abs(gauss_sum_g2(eta, AddCharacter(F, delta)) - naive_g2(eta, delta)) < 1e-6


def test_gauss_sum_trivial_pair():
    for q, n in [(5, 2), (3, 3), (7, 2)]:
        F = field_for(q, n)
        assert abs(gauss_sum_g2(MultCharacter(F, 1, 0), AddCharacter(F, F.zero)) - F.size) < 1e-6


def test_g2_of_trivial_eta_and_nonzero_c_is_a_quadratic_sum():
    # G_2(eta_1, chi_c) = sum_w chi(c w^2) has modulus q^(n/2), not 0
    F = field_for(5, 2)
    for c in range(1, 5):
        val = gauss_sum_g2(MultCharacter(F, 1, 0), AddCharacter(F, F.embed(c)))
        assert abs(val - charsum.quadratic_char_sum(F, F.embed(c))) < 1e-9
        assert abs(abs(val) - F.q ** (F.n / 2)) < 1e-6


def test_delta_classes():
    for q, n in [(3, 2), (3, 3)]:
        F = field_for(q, n)
        sizes = charsum.delta_class_sizes(F)
        classes = charsum.field_tables(F).delta_classes()
        one = FqPolynomial.one(F.base)
        x1 = FqPolynomial(F.base, [F.base.neg(1), 1])
        assert [F.from_index(i) for i in classes[one]] == [F.zero]
        assert sorted(classes[x1]) == sorted(F.index(F.embed(c)) for c in range(1, q))
        for D in structure.xn_minus_one_divisors(F):
            assert sizes[D] == poly_phi(D)


def test_char_indicator_examples():
    F = field_for(3, 2)
    assert charsum.char_indicator_cross_check(F, 8, FqPolynomial.x_n_minus_one(F.base, 2))


def test_trace_indicator_examples():
    F = field_for(3, 2)
    zero = F.wrap(F.zero)
    hits = [i for i in range(F.size) if abs(charsum.trace_indicator(F, 1, zero, i) - 1) < 1e-9]
    assert len(hits) == 3
    assert hits == [i for i in range(F.size) if F.trace(F.from_index(i), 1) == F.zero]
    with pytest.raises(PreconditionViolated):
        charsum.trace_indicator_cross_check(F, 1, F.wrap(F.x()))


def test_trace_indicators_partition_unity():
    F = field_for(3, 4)
    for m in (1, 2):
        betas = [F.wrap(b) for b in F.subfield_elements(m)]
        for i in range(0, F.size, 5):
            total = sum(charsum.trace_indicator(F, m, b, i) for b in betas)
            assert abs(total - 1) < 1e-9


def test_count_identity_on_small_field():
    F = field_for(5, 3)
    one = FqPolynomial.one(F.base)
    for b in range(5):
        rep = charsum.count_identity(F, one, 1, F.wrap(F.embed(b)))
        assert rep.identity_holds
        assert rep.inequality_holds
        assert rep.hypotheses_hold
