import random
from fractions import Fraction

import pytest

from lmspectra.cf import evaluate
from lmspectra.errors import DomainError
from lmspectra.spectrum import (
    FREIMAN_S,
    FREIMAN_S_INF,
    BiSequence,
    freiman_constant,
    hall_ray_alpha,
    lagrange_value,
    markov_value,
    parse_bisequence,
    perron_identity_check,
    sup_markov_over_shift,
)
from lmspectra.surd import QuadraticSurd, compare


def sqrt(n):
    return QuadraticSurd.sqrt(n)


def test_periodic_values_are_exact():
    assert markov_value(BiSequence.periodic((1,))).exact == sqrt(5)
    assert markov_value(BiSequence.periodic((2,))).exact == sqrt(8)
    assert markov_value(BiSequence.periodic((1, 2))).exact == sqrt(12)
    assert lagrange_value(BiSequence.periodic((1, 1, 2, 2))).exact == markov_value(
        BiSequence.periodic((1, 1, 2, 2))
    ).exact


def test_markov_value_of_a_limit_sequence_is_three():
    # at either 2: 2 + [0; 2, 1, 1, ...] + [0; 1, 1, ...] = 3 exactly
    assert markov_value(parse_bisequence("(1)* 22 (1)*")).exact == 3
    assert markov_value(parse_bisequence("(211112)* 2112 (211112)*")).exact == 3
    assert compare(markov_value(parse_bisequence("(2)* (1)*")).value.lo, 3) > 0


def test_freiman_sequences():
    s = markov_value(parse_bisequence(FREIMAN_S)).value
    assert abs(float(s.mid) - 3.1181201781) < 1e-7
    s_inf = markov_value(parse_bisequence(FREIMAN_S_INF)).value
    assert abs(float(s_inf.mid) - 3.293044265) < 1e-8
    ell = lagrange_value(parse_bisequence(FREIMAN_S)).value
    assert ell.hi < s.lo  # m(s) lies in M but not L


def test_freiman_constant_decimal_value():
    c = freiman_constant()
    assert abs(float(c) - 4.527829566) < 1e-9
    assert c == (2221564096 + 283748 * sqrt(462)) / 491993569


def test_lagrange_at_most_markov_on_random_sequences():
    rng = random.Random(3)
    for _ in range(25):
        word = lambda k: tuple(rng.randint(1, 3) for _ in range(k))
        theta = BiSequence(word(rng.randint(1, 3)), word(rng.randint(0, 4)), word(rng.randint(1, 3)))
        ell, m = lagrange_value(theta).value, markov_value(theta).value
        assert ell.lo <= m.hi


def test_markov_value_is_shift_invariant():
    theta = parse_bisequence("(12)* 2213 (21)*")
    base = markov_value(theta).value
    for k in range(-7, 8):
        other = markov_value(theta.shift(k)).value
        assert other.overlaps(base)
        assert abs(float(other.mid) - float(base.mid)) < 1e-12


def test_markov_value_matches_brute_force_floats():
    theta = parse_bisequence("(2)* 13122 (11)*")
    letters = [theta.letter(i) for i in range(-60, 60)]
    best = 0.0
    for n in range(20, 100):
        fwd = float(evaluate(letters[n:]))
        bwd = float(evaluate([0] + letters[:n][::-1]))
        best = max(best, fwd + bwd)
    assert abs(best - float(markov_value(theta))) < 1e-12


def test_perron_identity_on_random_surds():
    rng = random.Random(11)
    for _ in range(20):
        d = rng.choice([2, 3, 5, 6, 7, 10, 13, 19, 21])
        alpha = QuadraticSurd(Fraction(rng.randint(-20, 20), rng.randint(1, 5)), Fraction(rng.randint(1, 9), rng.randint(1, 5)), d)
        for n in range(0, 8):
            assert perron_identity_check(alpha, n) == 0


def test_perron_identity_rejects_rationals():
    with pytest.raises(DomainError):
        perron_identity_check(Fraction(1, 2), 3)


def test_sup_over_full_shifts():
    for A, d in [(1, 5), (2, 12)]:
        res = sup_markov_over_shift([(a,) for a in range(1, A + 1)], tol=Fraction(1, 10 ** 8))
        assert res.value.contains(sqrt(d))
    res = sup_markov_over_shift([(1,), (2,), (3,)], tol=Fraction(1, 10 ** 6))
    assert res.value.contains(sqrt(21))


def test_sup_over_b1_is_below_three_and_a_half():
    res = sup_markov_over_shift([(2, 1, 1, 2), (2, 1, 1, 1, 1, 2)], tol=Fraction(1, 10 ** 6))
    assert res.value.hi <= Fraction(7, 2)
    assert res.value.lo > 3
    # a periodic concatenation attains a value inside the enclosure range
    theta = BiSequence.periodic((2, 1, 1, 2) * 3 + (2, 1, 1, 1, 1, 2) * 3)
    assert markov_value(theta).value.hi <= res.value.hi


@pytest.mark.parametrize("ell", [Fraction(6), Fraction(36, 5), Fraction(1000, 7), Fraction(9)])
def test_hall_ray_alpha(ell):
    ray = hall_ray_alpha(ell, depth=20)
    assert ray.height.contains(ell)
    assert float(ray.height.width) < 1e-6
    lo, hi = (float(x) for x in (sqrt(2) - 1, 4 * (sqrt(2) - 1)))
    assert lo <= float(ell - ray.c0) <= hi
    assert max(ray.a + ray.b) <= 4
    # evaluate f at the c0 of the last block straight from the emitted quotients
    q = list(ray.alpha.quotients)
    pos = len(q) - 1 - len(ray.a)
    assert q[pos] == ray.c0
    fwd = float(evaluate(q[pos:]))
    bwd = float(evaluate([0] + q[:pos][::-1]))
    assert abs(fwd + bwd - float(ell)) < 1e-6


def test_hall_ray_prefers_largest_c0():
    # 7.2 - 7 = 0.2 is below sqrt2 - 1, so only c0 = 6 is feasible
    assert hall_ray_alpha(Fraction(36, 5), depth=8).c0 == 6
    assert hall_ray_alpha(Fraction(15, 2), depth=8).c0 == 7


def test_hall_ray_domain():
    with pytest.raises(DomainError):
        hall_ray_alpha(5)
