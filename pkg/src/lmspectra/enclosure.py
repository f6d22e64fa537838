"""Certified rational enclosures and a few exactly-bounded constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class BoundedValue:
    """A real number known to lie in ``[lo, hi]`` (exact rational endpoints)."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x) -> "BoundedValue":
        return cls(Fraction(x), Fraction(x))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        """Exact membership test; ``x`` may be a rational or a quadratic surd."""
        return self.lo <= x <= self.hi

    def overlaps(self, other: "BoundedValue") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        if isinstance(other, BoundedValue):
            return BoundedValue(self.lo + other.lo, self.hi + other.hi)
        return BoundedValue(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __float__(self):
        return float(self.mid)

    def __str__(self):
        return f"{float(self.mid):.12g} +/- {float(self.width / 2):.3g}"


def hull(*values: BoundedValue) -> BoundedValue:
    return BoundedValue(min(v.lo for v in values), max(v.hi for v in values))


@lru_cache(maxsize=None)
def exp_bounds(k: int, terms: int = 0) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo < e**k < hi`` for an integer ``k >= 0``.

    Uses the Taylor series of ``e`` with the standard tail bound, then raises
    the bracket to the ``k``-th power.  Relative width is about ``10**-30``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Fraction(1), Fraction(1)
    terms = terms or 40
    s, term = Fraction(0), Fraction(1)
    for n in range(terms):
        s += term
        term /= n + 1
    # remaining tail sum_{n >= terms} 1/n! < 2/terms!
    lo, hi = s, s + 2 * term
    return lo ** k, hi ** k


def _arctan_inv_bounds(x: int, terms: int) -> tuple[Fraction, Fraction]:
    """Bounds on ``arctan(1/x)`` from the alternating series."""
    s = Fraction(0)
    for n in range(terms):
        s += Fraction((-1) ** n, (2 * n + 1) * x ** (2 * n + 1))
    nxt = Fraction(1, (2 * terms + 1) * x ** (2 * terms + 1))
    # alternating with decreasing terms: the next term bounds the error
    return (s, s + nxt) if terms % 2 == 0 else (s - nxt, s)


@lru_cache(maxsize=8)
def pi_bounds(digits: int = 60) -> tuple[Fraction, Fraction]:
    """Certified rational bracket of ``pi`` via Machin's formula."""
    terms = digits + 5
    a_lo, a_hi = _arctan_inv_bounds(5, terms)
    b_lo, b_hi = _arctan_inv_bounds(239, terms)
    return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo
