import math
import random
from fractions import Fraction

import pytest

from lmspectra.cf import CFExpansion
from lmspectra.errors import DomainError
from lmspectra.lattice import (
    HolonomyVector,
    Lattice2,
    area,
    decompose,
    lagrange_via_lattice,
    recompose_error,
    systole,
)
from lmspectra.spectrum import BiSequence, lagrange_value
from lmspectra.surd import QuadraticSurd


def _random_sl2z(rng, steps=6):
    a, b, c, d = 1, 0, 0, 1
    for _ in range(steps):
        k = rng.randint(-4, 4)
        if rng.random() < 0.5:
            a, b = a + k * c, b + k * d
        else:
            c, d = c + k * a, d + k * b
    return a, b, c, d


def test_systole_examples():
    assert systole(Lattice2.identity()).length_squared == 1
    assert systole(Lattice2(2, 0, 0, Fraction(1, 2))).length_squared == Fraction(1, 4)


def test_determinant_must_be_one():
    with pytest.raises(DomainError):
        Lattice2(2, 0, 0, 1)


def test_systole_invariant_under_change_of_basis():
    rng = random.Random(8)
    bases = [Lattice2.identity(), Lattice2(3, 1, 5, 2), Lattice2.unipotent("(1+sqrt(5))/2"), Lattice2(2, 0, 0, Fraction(1, 2))]
    for _ in range(1000):
        X = rng.choice(bases)
        a, b, c, d = _random_sl2z(rng)
        Y = X.change_basis(a, b, c, d)
        s = systole(Y)
        assert s.length_squared == systole(X).length_squared
        entry = max(abs(float(v)) for v in (Y.g11, Y.g12, Y.g21, Y.g22))
        assert s.steps <= 2 + math.log2(entry + 1) * 2


def test_systole_of_golden_lattice():
    X = Lattice2.unipotent("(1+sqrt(5))/2")
    s = systole(X)
    assert abs(float(s.length.mid) ** 2 - float(s.length_squared)) < 1e-15
    p, q = s.vector.source
    assert math.gcd(p, q) == 1


def test_area_examples():
    assert area(HolonomyVector(Fraction(3), Fraction(1, 3))) == 1
    phi = QuadraticSurd.sqrt(5) / 2 + Fraction(1, 2)
    v = Lattice2.unipotent(phi).vector(8, 5)
    assert area(v) == abs(5 * (5 * phi - 8))
    assert area(v.scaled(2)) == area(v)


def test_vector_must_be_primitive():
    with pytest.raises(DomainError):
        Lattice2.identity().vector(2, 4)


def test_lagrange_via_lattice_golden_and_silver():
    r = lagrange_via_lattice("(1+sqrt(5))/2", 10 ** 4)
    assert r.value.contains(QuadraticSurd.sqrt(5))
    assert abs(float(r.window_max.mid) - math.sqrt(5)) < 1e-4
    r = lagrange_via_lattice("1+sqrt(2)", 10 ** 4)
    assert r.value.contains(QuadraticSurd.sqrt(8))


def test_lagrange_via_lattice_agrees_with_continued_fractions():
    rng = random.Random(20)
    for _ in range(20):
        pre = [rng.randint(1, 4) for _ in range(rng.randint(0, 2))]
        period = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 3)))
        alpha = CFExpansion(rng.randint(-3, 3), pre, period).value()
        ell = lagrange_value(BiSequence.periodic(period)).value
        assert lagrange_via_lattice(alpha, 10 ** 5).value.overlaps(ell)


def test_lagrange_via_lattice_rejects_rationals():
    with pytest.raises(DomainError):
        lagrange_via_lattice(Fraction(3, 7))


def test_decomposition_recomposes():
    rng = random.Random(4)
    for _ in range(50):
        a, b, c, d = _random_sl2z(rng)
        if a == 0:
            continue
        X = Lattice2(a, b, c, d).change_basis(1, 0, 0, 1)
        assert recompose_error(X) < 1e-9
    dec = decompose(Lattice2.unipotent(Fraction(3, 2)))
    assert abs(dec.alpha - 1.5) < 1e-12 and abs(dec.s) < 1e-12 and abs(dec.t) < 1e-12
