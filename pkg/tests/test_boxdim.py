import math
import random
from fractions import Fraction

import pytest

from lmspectra.boxdim import (
    Feasibility,
    ScaleWord,
    bm_alphabet,
    bm_lower_bound,
    box_dimension,
    count_C_plus,
    count_table,
    d_estimate,
    effective_max_letter,
    exp_floor,
    feasible_cylinder,
    letter_sup,
    scale_of_denominator,
    unstable_scale,
)
from lmspectra.cf import continuant
from lmspectra.errors import DomainError
from lmspectra.surd import QuadraticSurd, compare

SQRT12 = QuadraticSurd.sqrt(12)


def test_exp_floor_small_values():
    assert [exp_floor(k) for k in range(6)] == [1, 2, 7, 20, 54, 148]


def test_scale_of_denominator_against_floats():
    rng = random.Random(0)
    for _ in range(500):
        n = rng.randint(1, 10 ** 12)
        assert scale_of_denominator(n) == math.floor(math.log(n))
    assert scale_of_denominator(7) == 1 and scale_of_denominator(8) == 2


def test_unstable_scale_examples():
    assert unstable_scale((1,)) == 0
    assert unstable_scale((2, 1)) == 2
    assert unstable_scale(()) == 0


def test_unstable_scale_superadditive():
    rng = random.Random(42)
    for _ in range(10_000):
        a = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 8)))
        b = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 8)))
        k = rng.randint(1, 4)
        assert unstable_scale(a + b + (k,)) >= unstable_scale(a) + unstable_scale(b)


def test_minimal_words():
    assert ScaleWord.of((2, 1)).is_minimal_for(2)
    assert not ScaleWord.of((2, 1)).is_minimal_for(3)
    assert ScaleWord.of(()).is_minimal_for(0)


def test_letter_bounds():
    assert letter_sup(1) == QuadraticSurd.sqrt(5)
    assert letter_sup(2) == SQRT12
    assert effective_max_letter(SQRT12) == 2
    assert effective_max_letter(Fraction(7, 2)) == 3
    # a 3 whose neighbours are at most 3 forces f >= (6 + sqrt21)/3 > sqrt12
    assert compare((6 + QuadraticSurd.sqrt(21)) / 3, SQRT12) > 0


def test_feasible_cylinder_examples():
    assert feasible_cylinder((1, 5, 1), Fraction(49, 10)) is Feasibility.NO
    assert feasible_cylinder((1,) * 10, 3) is Feasibility.YES
    assert feasible_cylinder((3,), SQRT12) is Feasibility.NO
    assert feasible_cylinder((3,), "sqrt(12)") is Feasibility.NO
    assert feasible_cylinder((1, 2, 2, 1), SQRT12) is Feasibility.YES


def test_feasible_cylinder_rejects_t_out_of_range():
    with pytest.raises(DomainError):
        feasible_cylinder((1,), 5)
    with pytest.raises(DomainError):
        feasible_cylinder((1,), 2.9)


def test_no_is_inherited_by_extensions():
    t = Fraction(31, 10)
    rng = random.Random(7)
    for _ in range(200):
        w = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 10)))
        if feasible_cylinder(w, t) is Feasibility.NO:
            for a in (1, 2):
                assert feasible_cylinder(w + (a,), t) is Feasibility.NO


def test_sqrt12_counts_only_words_over_1_and_2():
    table = count_table(SQRT12, 20)
    for rec in table.records:
        assert rec.count_maybe == 0
        assert rec.count_yes == rec.count_letters_12
    # C(2) words minimal for r, counted directly
    for r in range(0, 12):
        direct = sum(1 for w in _words_12(r) if ScaleWord.of(w).is_minimal_for(r))
        assert table.record(r).count_yes == direct


def _words_12(r):
    out, stack = [], [()]
    while stack:
        w = stack.pop()
        out.append(w)
        if w == () or unstable_scale(w) < r:
            stack.extend(w + (a,) for a in (1, 2))
    return out


def test_just_below_sqrt12_still_excludes_threes():
    t = Fraction(34641, 10000)
    table = count_table(t, 10)
    for rec in table.records:
        assert rec.count == rec.count_letters_12


@pytest.mark.parametrize("t", [Fraction(3), Fraction(31, 10), Fraction(7, 2)])
def test_submultiplicativity(t):
    table = count_table(t, 12)
    for r in range(0, 7):
        for s in range(0, 7):
            big = table.record(r + s)
            for mode in ("count", "count_yes"):
                assert getattr(big, mode) <= 4 * getattr(table.record(r), mode) * getattr(table.record(s), mode)


def test_counts_monotone_in_t():
    ts = [Fraction(3), Fraction(305, 100), Fraction(31, 10), Fraction(32, 10), Fraction(34, 10), SQRT12, Fraction(7, 2)]
    tables = [count_table(t, 10) for t in ts]
    for r in range(11):
        for mode in ("count", "count_yes"):
            values = [getattr(tab.record(r), mode) for tab in tables]
            assert values == sorted(values)


def test_count_record_at_three():
    rec = count_C_plus(3, 0)
    assert rec.count >= 1


def test_box_dimension_sequence_running_inf():
    box = box_dimension(SQRT12, 14)
    assert box.estimate == min(box.sequence)
    assert box.estimate >= 0.531  # an upper estimate


def test_d_estimate_saturates_at_sqrt12_and_is_monotone():
    d = [d_estimate(t, r_max=10)["upper"] for t in (Fraction(3), Fraction(31, 10), Fraction(33, 10), SQRT12)]
    assert d == sorted(d)
    assert d[-1] == 1.0


def test_bm_alphabet():
    assert bm_alphabet(1).words == ((2, 1, 1, 2), (2, 1, 1, 1, 1, 2))
    with pytest.raises(DomainError):
        bm_alphabet(0)


@pytest.mark.parametrize("m", [1, 2])
def test_bm_lower_bound(m):
    res = bm_lower_bound(m)
    assert res.certified
    assert res.d_lower > 0


def test_counts_agree_with_continuant_definition():
    # scale computed from continuants directly
    w = (1, 2, 2, 1, 3)
    q, q1 = continuant(w), continuant(w[:-1])
    assert unstable_scale(w) == math.floor(math.log(q * (q + q1)))
