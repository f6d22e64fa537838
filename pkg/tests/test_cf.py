import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lmspectra.cf import (
    CFExpansion,
    LEVY_CONSTANT,
    best_approximations,
    cf_expand,
    cf_from_enclosure,
    continuant,
    convergents,
    determinant_check,
    euler_rule_oracle,
    evaluate,
    format_cf,
    hurwitz_counterexample_count,
    hurwitz_witness,
    iter_convergents,
    parse_cf,
    pi_cf,
    transpose_value,
)
from lmspectra.errors import DomainError, InsufficientPrecision
from lmspectra.surd import QuadraticSurd, parse_real

words = st.lists(st.integers(1, 9), min_size=1, max_size=12)


def test_expand_rational_is_euclid():
    cf = cf_expand(Fraction(355, 113))
    assert (cf.a0, cf.quotients) == (3, (7, 16))
    assert cf.is_canonical()
    assert cf.value() == Fraction(355, 113)
    # the non-canonical twin has the same value but fails the last-quotient rule
    twin = CFExpansion(3, (7, 15, 1))
    assert twin.value() == Fraction(355, 113) and not twin.is_canonical()
    assert str(cf_expand(7)) == "[7]"


def test_expand_surds_find_period():
    assert str(cf_expand("(1+sqrt(5))/2")) == "[1]~(1)"
    assert str(cf_expand("sqrt(2)")) == "[1]~(2)"
    assert str(cf_expand("1+sqrt(2)")) == "[2]~(2)"
    assert str(cf_expand("sqrt(12)")) == "[3]~(2,6)"
    for text in ["(3+sqrt(21))/6", "(7-sqrt(13))/5", "sqrt(462)"]:
        x = parse_real(text)
        assert cf_expand(x).value() == x


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        cf_expand("sqrt(-5)")
    with pytest.raises(ZeroDivisionError):
        cf_expand("(1+sqrt(5))/0")
    with pytest.raises(DomainError):
        cf_expand(1, max_terms=0)


def test_pi_convergents():
    pi = pi_cf(20)
    assert pi.terms(15) == [3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1]
    prefix = parse_cf("[3;7,15,1,...]")
    got = [convergents(prefix, n).fraction for n in range(4)]
    assert got == [3, Fraction(22, 7), Fraction(333, 106), Fraction(355, 113)]
    assert prefix.enclosure().contains(pi.enclosure().mid)


def test_fibonacci_and_seeds():
    assert convergents(cf_expand("(1+sqrt(5))/2"), 5).fraction == Fraction(13, 8)
    seed = convergents(CFExpansion(2, (3,)), -1)
    assert (seed.p, seed.q, seed.p_prev, seed.q_prev) == (1, 0, 0, 1)
    assert determinant_check(seed) == 1
    with pytest.raises(IndexError):
        convergents(CFExpansion(2, (3,)), 2)


def test_determinant_examples():
    assert determinant_check(convergents(CFExpansion(2, (3,)), 1)) == 1
    assert determinant_check(convergents(parse_cf("[3;7]"), 1)) == 1


@given(st.integers(-20, 20), st.lists(st.integers(1, 50), max_size=30))
def test_determinant_identity(a0, quotients):
    for cp in iter_convergents(CFExpansion(a0, quotients)):
        assert determinant_check(cp) == (-1) ** (cp.index - 1)
        assert math.gcd(cp.p, cp.q) == 1


def test_continuant_examples():
    assert continuant([2]) == 2 and continuant([1, 2]) == 3
    assert continuant([2, 1, 3]) == continuant([3, 1, 2]) == 11
    assert continuant([]) == 1 and euler_rule_oracle([]) == 1
    assert euler_rule_oracle([2, 1, 3]) == 11
    assert euler_rule_oracle([4, 7]) == 29
    with pytest.raises(DomainError):
        euler_rule_oracle([1] * 21)


@given(words)
def test_continuant_transposition_and_euler(word):
    assert continuant(word) == continuant(word[::-1]) == euler_rule_oracle(word)
    assert evaluate([0, *word]).denominator == transpose_value(word).denominator == continuant(word)


def test_transpose_value():
    assert transpose_value([2, 1, 3]) == Fraction(3, 11)
    assert evaluate([0, 2, 1, 3]) == Fraction(4, 11)
    assert transpose_value([1, 2, 1]) == evaluate([0, 1, 2, 1])
    assert transpose_value([5]) == Fraction(1, 5)


def brute_force_best(alpha, Q):
    out = []
    for q in range(1, Q + 1):
        base = math.floor(q * alpha)
        for p in (base - 1, base, base + 1, base + 2):
            if math.gcd(p, q) == 1 and 4 * q * q * (q * alpha - p) ** 2 < 1:
                out.append(Fraction(p, q))
    return out


def test_best_approximations_examples():
    pi = pi_cf(25)
    assert Fraction(22, 7) in best_approximations(pi, 200)
    assert Fraction(355, 113) in best_approximations(pi, 10 ** 6)
    phi = cf_expand("(1+sqrt(5))/2")
    got = best_approximations(phi, 8)
    assert set(got) <= {1, 2, Fraction(3, 2), Fraction(5, 3), Fraction(8, 5), Fraction(13, 8)}
    assert got == brute_force_best(phi.value(), 8)
    with pytest.raises(InsufficientPrecision):
        best_approximations(parse_cf("[3;7,15,...]"), 10 ** 6)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 300).filter(lambda d: math.isqrt(d) ** 2 != d), st.integers(-5, 5), st.integers(1, 6))
def test_best_approximations_match_brute_force(d, a, c):
    alpha = (a + QuadraticSurd.sqrt(d)) / c
    cf = cf_expand(alpha)
    got = best_approximations(cf, 300)
    assert got == brute_force_best(alpha, 300)
    convs = [cp.fraction for cp in iter_convergents(cf, 40) if cp.q <= 300]
    assert set(got) <= set(convs)
    assert len(got) >= (len(convs) + 1) // 2 - 1  # a0 may be the only miss among the first pair


def test_hurwitz_examples():
    assert hurwitz_witness(pi_cf(20), 1) in (0, 1, 2)
    assert hurwitz_witness(cf_expand("sqrt(2)-1"), 3) in (2, 3, 4)
    phi = cf_expand("(1+sqrt(5))/2")
    for n in range(1, 30):
        assert hurwitz_witness(phi, n) in (n - 1, n, n + 1)


def test_hurwitz_counterexamples_plateau_and_monotone():
    assert hurwitz_counterexample_count(1, 100) == hurwitz_counterexample_count(1, 5000)
    small = hurwitz_counterexample_count(Fraction(1, 1000), 100)
    assert small >= hurwitz_counterexample_count(1, 100)
    assert hurwitz_counterexample_count(Fraction(1, 1000), 100) == hurwitz_counterexample_count(Fraction(1, 1000), 3000)
    assert hurwitz_counterexample_count(100, 10 ** 3) == 0


def test_format_and_parse():
    for text in ["[3;7,16]", "[1]~(1)", "[0;1,2]~(8,1,3)", "[3;7,15,1,...]", "[7]"]:
        assert format_cf(parse_cf(text)) == text
    with pytest.raises(DomainError):
        parse_cf("3;7")


def test_enclosure_prefix():
    lo, hi = Fraction(31415926, 10 ** 7), Fraction(31415927, 10 ** 7)
    cf = cf_from_enclosure(lo, hi)
    assert cf.terms(4) == [3, 7, 15, 1]
    enc = cf.enclosure()
    assert enc.lo <= lo and hi <= enc.hi


def test_tail_and_transposed_prefix():
    cf = cf_expand("(7-sqrt(13))/5")
    alpha = cf.value()
    for n in range(0, 8):
        head = cf.terms(n)
        if n == 0:
            continue
        assert QuadraticSurd.__eq__(alpha, _mobius(head, cf.tail(n)))
    assert cf.transposed_prefix(4) == evaluate([0, cf.term(3), cf.term(2), cf.term(1)])


def _mobius(head, tail):
    from lmspectra.cf import mobius_tail
    return mobius_tail(head, tail)


def test_levy_helper_is_seeded():
    from lmspectra.cf import levy_estimate
    assert levy_estimate(50, 5, seed=3) == levy_estimate(50, 5, seed=3)
    assert abs(LEVY_CONSTANT - 3.27582291872) < 1e-10
