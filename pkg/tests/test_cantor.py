import itertools
import math
import random
from fractions import Fraction

import pytest

from lmspectra.cantor import (
    NOT_FOUND,
    WordAlphabet,
    continuant_multiset,
    cylinder,
    cylinder_length,
    dimension_bracket,
    generate_cover,
    hall_interval_check,
    hensley_asymptotic,
    hensley_check,
    hull,
    sumset_stab,
    transpose_dimension_check,
)
from lmspectra.cf import evaluate
from lmspectra.errors import DomainError
from lmspectra.surd import QuadraticSurd

C2 = WordAlphabet.letters(2)


def test_cylinder_examples():
    c = cylinder((1,))
    assert (c.lo, c.hi) == (Fraction(1, 2), Fraction(1))
    c = cylinder((2, 1))
    assert (c.lo, c.hi) == (Fraction(1, 3), Fraction(2, 5))
    assert c.length == Fraction(1, 15)


def test_cylinder_length_formula_matches_endpoints():
    rng = random.Random(5)
    for _ in range(200):
        word = tuple(rng.randint(1, 6) for _ in range(rng.randint(1, 8)))
        assert cylinder(word).length == cylinder_length(word)


def test_cover_is_disjoint_and_nested():
    cover = generate_cover(C2, 5)
    assert len(cover) == 32
    for a, b in zip(cover, cover[1:]):
        assert a.hi <= b.lo
    parents = generate_cover(C2, 4)
    for c in cover:
        assert any(p.lo <= c.lo and c.hi <= p.hi for p in parents)


def test_alphabet_must_be_primitive():
    with pytest.raises(DomainError):
        WordAlphabet(((1,), (1, 2)))
    assert WordAlphabet.parse("2.1,1.1.2").words == ((2, 1), (1, 1, 2))


def test_hull_of_c2():
    lo, hi = hull(C2)
    r3 = QuadraticSurd.sqrt(3)
    assert lo <= (r3 - 1) / 2 and hi >= r3 - 1
    assert float(hi - lo) - float(r3 - 1) / 2 < 1e-12


def test_hull_contains_sampled_points():
    B = WordAlphabet.parse("2.1,1.1.2,3")
    lo, hi = hull(B)
    rng = random.Random(2)
    for _ in range(100):
        letters = list(itertools.chain.from_iterable(rng.choice(B.words) for _ in range(12)))
        x = evaluate([0] + letters)
        assert lo - Fraction(1, 10 ** 6) <= x <= hi + Fraction(1, 10 ** 6)


@pytest.mark.parametrize(
    "A, depth, value",
    [(2, 8, 0.531280506277205), (3, 5, 0.705660908028738), (4, 4, 0.788945557483)],
)
def test_dimension_brackets_of_c_a(A, depth, value):
    b = dimension_bracket(WordAlphabet.letters(A), depth)
    assert b.lower <= value <= b.upper
    assert b.width <= 1e-3


def test_cover_bracket_is_cruder_but_valid():
    b = dimension_bracket(C2, 10, method="cover")
    assert b.lower <= 0.531280506 <= b.upper


def test_transposed_alphabets_share_continuants_and_dimension():
    B = WordAlphabet.parse("2.1,1.1.2")
    assert continuant_multiset(B, 4) == continuant_multiset(B.transpose(), 4)
    cover, cover_t = transpose_dimension_check(B, 6)
    assert (cover.lower, cover.upper) == (cover_t.lower, cover_t.upper)
    tr, tr_t = transpose_dimension_check(B, 6, method="transfer")
    assert tr.lower <= tr_t.upper and tr_t.lower <= tr.upper


def test_hensley_brackets_are_monotone_and_near_asymptotic():
    reports = [hensley_check(A) for A in (5, 10, 20)]
    lowers = [r.bracket.lower for r in reports]
    assert lowers == sorted(lowers)
    for r in reports:
        assert r.gap < 0.01
    assert abs(hensley_asymptotic(20) - 0.9635) < 1e-3


def test_sumset_stab_finds_points_in_hall_interval():
    c4 = WordAlphabet.letters(4)
    w = sumset_stab(Fraction(1), c4, c4)
    assert w and w.lo <= 1 <= w.hi
    a, b = w.cylinders
    assert a.lo + b.lo <= 1 <= a.hi + b.hi


def test_sumset_stab_outside_the_interval():
    c4 = WordAlphabet.letters(4)
    assert sumset_stab(Fraction(3, 10), c4, c4) is NOT_FOUND
    assert sumset_stab(Fraction(17, 10), c4, c4) is NOT_FOUND


def test_hall_interval_grid():
    lo, hi = math.sqrt(2) - 1, 4 * (math.sqrt(2) - 1)
    xs = [Fraction(lo + (hi - lo) * (k + 0.5) / 200) for k in range(200)]
    assert hall_interval_check(xs) == []
