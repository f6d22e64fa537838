"""Unstable scales, the counts ``#C+(t, r)`` and the box dimension ``Delta+(t)``.

A finite word ``alpha`` names the cylinder ``I+(alpha)`` of reals
``[0; alpha, ...]``; its unstable scale is ``floor(log 1/|I+(alpha)|)``
(natural log).  ``P_r`` collects the words whose scale first reaches ``r``
and ``C+(t, r)`` those whose cylinder meets ``K_t+``, the forward halves of
sequences with Markov value at most ``t``.  Meeting ``K_t+`` is not finitely
decidable, so each word is classified YES / NO / MAYBE with certificates on
both sides, and counts are reported as a bracket.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from .cantor import WordAlphabet, dimension_bracket
from .cf import _purely_periodic_value, continuant
from .enclosure import exp_bounds
from .errors import BudgetExceeded, DomainError
from .spectrum import BiSequence, markov_value, sup_markov_over_shift
from .surd import QuadraticSurd, compare, parse_real

Real = Union[Fraction, QuadraticSurd]


class Feasibility(enum.Enum):
    YES = "YES"
    NO = "NO"
    MAYBE = "MAYBE"


# -- unstable scales ------------------------------------------------------------------

@lru_cache(maxsize=None)
def exp_floor(k: int) -> int:
    """``floor(e**k)`` exactly (``e**k`` is irrational for ``k >= 1``)."""
    terms = 40
    while True:
        lo, hi = exp_bounds(k, terms)
        if math.floor(lo) == math.floor(hi):
            return math.floor(lo)
        terms *= 2


def scale_of_denominator(n: int) -> int:
    """``floor(log n)`` for a positive integer ``n``, by exact comparison with ``e**k``."""
    if n < 1:
        raise DomainError("n must be positive")
    k = max(0, int(math.log(n)) - 1) if n.bit_length() < 1000 else int(n.bit_length() * math.log(2)) - 2
    # e**k <= n  iff  floor(e**k) < n  (or k = 0)
    while k + 1 >= 1 and exp_floor(k + 1) < n:
        k += 1
    while k > 0 and exp_floor(k) >= n:
        k -= 1
    return k


def unstable_scale(word: Sequence[int]) -> int:
    """``r+(alpha) = floor(log(q_n (q_n + q_{n-1})))``; the empty word has scale 0.

    Scales never go negative since ``q_n (q_n + q_{n-1}) >= 2`` for nonempty words.
    """
    word = tuple(word)
    q, q1 = continuant(word), continuant(word[:-1]) if word else 0
    return scale_of_denominator(q * (q + q1))


@dataclass(frozen=True)
class ScaleWord:
    word: tuple
    scale: int

    @classmethod
    def of(cls, word: Sequence[int]) -> "ScaleWord":
        return cls(tuple(word), unstable_scale(word))

    def is_minimal_for(self, r: int) -> bool:
        """Membership in ``P_r``: scale at least ``r`` while the parent's is below ``r``."""
        if not self.word:
            return r == 0
        return self.scale >= r > unstable_scale(self.word[:-1])


# -- thresholds ----------------------------------------------------------------------

def as_threshold(t) -> Real:
    if isinstance(t, str):
        t = parse_real(t)
    if isinstance(t, float):
        raise DomainError("pass t as an exact rational or surd string, not a float")
    return t if isinstance(t, QuadraticSurd) else Fraction(t)


def _check_t(t: Real):
    if not 3 <= t < 5:
        raise DomainError("t must lie in [3, 5)")


@lru_cache(maxsize=None)
def max_continued_tail(a: int) -> QuadraticSurd:
    """``max [0; b1, b2, ...]`` over letters ``1..a``: ``[0; 1, a, 1, a, ...]``."""
    if a == 1:
        return 1 / _purely_periodic_value((1,))
    return 1 / _purely_periodic_value((1, a))


def letter_sup(a: int) -> Real:
    """``sup m`` over all sequences with letters in ``1..a``: ``a + 2 [0; 1, a, 1, a, ...]``."""
    return a + 2 * max_continued_tail(a)


def effective_max_letter(t: Real) -> int:
    """Largest letter that can occur in a sequence with ``m <= t``.

    A letter ``a`` with neighbours at most ``A`` forces ``f >= a + 2/(A + 1)``;
    iterate ``A -> max{a : a + 2/(A+1) <= t}`` from ``floor(t)``.
    """
    A = math.floor(t)
    while True:
        new = max((a for a in range(1, A + 1) if compare(a + Fraction(2, A + 1), t) <= 0), default=0)
        if new == A:
            return A
        A = new


# -- classification of words ----------------------------------------------------------

def _float_tail(period: tuple) -> float:
    return float(_purely_periodic_value(period))


class _Classifier:
    """Caches everything that depends only on ``t``."""

    def __init__(self, t: Real):
        self.t = t
        self.t_float = float(t)
        self.A = effective_max_letter(t)
        A = self.A
        self.tail_lo = 1 + Fraction(1, A + 1)  # complete quotients of unknown tails
        self.tail_hi = Fraction(A + 1)
        self.tail_lo_f, self.tail_hi_f = float(self.tail_lo), float(self.tail_hi)
        # a word whose letters are all <= a is YES outright when letter_sup(a) <= t
        self.safe_letter = max((a for a in range(1, A + 1) if compare(letter_sup(a), t) <= 0), default=0)
        catalog = [(1,), (1, 2), (2, 1), (2,)]
        catalog += [(a,) for a in range(3, A + 1)] + [(a, 1) for a in range(3, A + 1)] + [(1, a) for a in range(3, A + 1)]
        self.catalog = [c for c in catalog if max(c) <= A]
        self._periodic_cache = {}
        self._last_fit = None

    # NO certificates --------------------------------------------------------------
    def window_lower_bound(self, word: tuple, i: int) -> Fraction:
        """Certified lower bound for ``f`` at position ``i`` of ``word`` over all extensions."""
        # forward [w_i; w_{i+1}, ..., w_n, tau]; backward [0; w_{i-1}, ..., w_1, tau']
        fwd = _moebius_min(word[i:], self.tail_lo, self.tail_hi, leading_zero=False)
        bwd = _moebius_min(word[:i][::-1], self.tail_lo, self.tail_hi, leading_zero=True)
        return fwd + bwd

    def certified_no(self, word: tuple) -> bool:
        if max(word) > self.A:
            return True
        floor = self.t_float - 2.0  # f_i < w_i + 2, so small letters never certify
        for i, a in enumerate(word):
            if a <= floor:
                continue
            bound = _float_window_min(word, i, self.tail_lo_f, self.tail_hi_f)
            if bound > self.t_float + 1e-9:
                return True
            if bound > self.t_float - 1e-9 and compare(self.window_lower_bound(word, i), self.t) > 0:
                return True
        return False

    # YES certificates -------------------------------------------------------------
    def completion_fits(self, word: tuple, left: tuple, right: tuple) -> bool:
        m = _float_markov(left, word, right, self._periodic_limits(left), self._periodic_limits(right))
        if m < self.t_float - 1e-9:
            return True
        if m > self.t_float + 1e-9:
            return False
        value = markov_value(BiSequence(left, word, right))
        if value.exact is not None:
            return compare(value.exact, self.t) <= 0
        return compare(value.value.hi, self.t) <= 0

    def _periodic_limits(self, period: tuple) -> float:
        if period not in self._periodic_cache:
            self._periodic_cache[period] = _float_markov(period, (), period, 0.0, 0.0)
        return self._periodic_cache[period]

    def classify(self, word: tuple, depth: int = 0, top: Optional[int] = None) -> Feasibility:
        """``top`` may pass the largest letter of ``word`` when the caller tracks it."""
        if not word:
            return Feasibility.YES if self.catalog else Feasibility.NO
        if top is None:
            top = max(word)
        if top <= self.safe_letter:
            return Feasibility.YES
        if self.certified_no(word):
            return Feasibility.NO
        pairs = [(left, right) for left in self.catalog for right in self.catalog]
        for left, right in [self._last_fit] + pairs if self._last_fit else pairs:
            if self.completion_fits(word, left, right):
                self._last_fit = (left, right)
                return Feasibility.YES
        if depth > 0 and all(
            self.classify(word + (b,), depth - 1) is Feasibility.NO for b in range(1, self.A + 1)
        ):
            return Feasibility.NO
        return Feasibility.MAYBE


def _moebius_min(letters: Sequence[int], tlo: Fraction, thi: Fraction, leading_zero: bool) -> Fraction:
    """Min over ``tau in [tlo, thi]`` of ``[l0; l1, ..., lk, tau]`` (or ``[0; l0, ..., tau]``)."""
    p, q, p1, q1 = 1, 0, 0, 1
    if leading_zero:
        p, q, p1, q1 = 0, 1, 1, 0
    for a in letters:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    x = Fraction(p * tlo + p1, q * tlo + q1)
    y = Fraction(p * thi + p1, q * thi + q1)
    return min(x, y)


def _float_window_min(word: tuple, i: int, tlo: float, thi: float) -> float:
    """Float version of the window lower bound at position ``i``."""
    x, y = tlo, thi
    for a in reversed(word[i:]):
        x, y = a + 1.0 / x, a + 1.0 / y
    fwd = min(x, y)
    x, y = tlo, thi
    for a in word[:i]:
        x, y = a + 1.0 / x, a + 1.0 / y
    bwd = min(1.0 / x, 1.0 / y) if i else 1.0 / thi
    return fwd + bwd


def _float_markov(left: tuple, core: tuple, right: tuple, left_limit: float, right_limit: float) -> float:
    """Float ``m`` of ``L* core R*`` over the positions that can carry the sup.

    Covers the core and two periods on each side; the tail limits are passed in.
    """
    letters = list(left) * 2 + list(core) + list(right) * 2
    n = len(letters)
    fwd = [0.0] * (n + 1)
    fwd[n] = _float_tail(right)
    for i in range(n - 1, -1, -1):
        fwd[i] = letters[i] + 1.0 / fwd[i + 1]
    bwd = [0.0] * (n + 1)  # bwd[i] = [a_{i-1}; a_{i-2}, ...]
    bwd[0] = _float_tail(left[::-1])
    for i in range(1, n + 1):
        bwd[i] = letters[i - 1] + 1.0 / bwd[i - 1]
    best = max(fwd[i] + 1.0 / bwd[i] for i in range(n))
    return max(best, left_limit, right_limit)


def feasible_cylinder(word: Sequence[int], t, depth: int = 0) -> Feasibility:
    """Does ``I+(word)`` meet ``K_t+``?

    NO when some position of the word has ``f > t`` for every extension, or
    when every ``depth``-letter extension is NO.  YES when the word sits inside
    a periodic completion (from a small catalogue) with ``m <= t``.
    """
    t = as_threshold(t)
    _check_t(t)
    return _classifier(t).classify(tuple(word), depth)


@lru_cache(maxsize=32)
def _classifier(t: Real) -> _Classifier:
    return _Classifier(t)


# -- counting --------------------------------------------------------------------------

@dataclass
class CountRecord:
    """``#C+(t, r)`` bracketed by YES-only and YES-or-MAYBE counts."""

    t: Real
    r: int
    count_yes: int
    count_maybe: int
    count_letters_12: int = 0

    @property
    def count(self) -> int:
        return self.count_yes + self.count_maybe

    @property
    def dim_estimate(self) -> float:
        if self.r == 0:
            return float("inf")
        return math.log(4 * self.count) / self.r


@dataclass
class CountTable:
    t: Real
    records: list
    nodes: int
    truncated: bool = False

    def record(self, r: int) -> CountRecord:
        return self.records[r]


def count_table(t, r_max: int, depth: int = 0, max_nodes: int = 20_000_000) -> CountTable:
    """Counts for every ``r <= r_max`` from a single depth-first walk.

    A word lies in ``P_r`` for ``r`` in ``(scale(parent), scale(word)]``; NO
    words are pruned together with all their extensions.
    """
    t = as_threshold(t)
    _check_t(t)
    clf = _classifier(t)
    yes = [0] * (r_max + 1)
    maybe = [0] * (r_max + 1)
    only12 = [0] * (r_max + 1)
    yes[0] = 1  # the empty word; scale 0
    only12[0] = 1
    thresholds = [exp_floor(k) for k in range(r_max + 2)]
    nodes = 0

    def scale_from(n: int, start: int) -> int:
        k = start
        while k + 1 <= r_max and thresholds[k + 1] < n:
            k += 1
        return k

    # stack entries: (word, q, q_prev, parent scale, largest letter)
    stack = [((a,), a, 1, 0, a) for a in range(clf.A, 0, -1)]
    while stack:
        word, q, q1, parent, top = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"count walk exceeded {max_nodes} words")
        status = clf.classify(word, depth, top)
        if status is Feasibility.NO:
            continue
        r = scale_from(q * (q + q1), parent)
        reached = r if r <= r_max else r_max
        for k in range(parent + 1, reached + 1):
            if thresholds[k] < q * (q + q1):
                if status is Feasibility.YES:
                    yes[k] += 1
                else:
                    maybe[k] += 1
                if top <= 2:
                    only12[k] += 1
        if not thresholds[r_max] < q * (q + q1):
            for a in range(clf.A, 0, -1):
                stack.append((word + (a,), a * q + q1, q, r, max(a, top)))
    records = [CountRecord(t, k, yes[k], maybe[k], only12[k]) for k in range(r_max + 1)]
    return CountTable(t, records, nodes)


def count_C_plus(t, r: int, depth: int = 0) -> CountRecord:
    if r < 0:
        raise DomainError("r must be non-negative")
    return count_table(t, r, depth).record(r)


# -- box dimension ------------------------------------------------------------------------

@dataclass
class BoxDimension:
    """``Delta+(t)`` from counts up to ``r_max``.

    ``estimate`` is ``inf_m (1/m) log(4 #C+(t, m))``, an upper estimate by
    submultiplicativity; ``sequence`` holds the terms for ``m = 1..r_max``.
    ``lower_estimate`` repeats the computation with YES-only counts.
    ``growth`` is the slope of ``log #C+`` over the second half of the
    scales, a sharper finite-size estimate of the same limit.
    """

    t: Real
    r_max: int
    estimate: float
    lower_estimate: float
    sequence: list
    growth: float
    table: CountTable = field(repr=False)


def box_dimension(t, r_max: int, depth: int = 0) -> BoxDimension:
    table = count_table(t, r_max, depth)
    seq, seq_yes = [], []
    for m in range(1, r_max + 1):
        rec = table.record(m)
        seq.append(math.log(4 * rec.count) / m if rec.count else float("-inf"))
        seq_yes.append(math.log(4 * rec.count_yes) / m if rec.count_yes else float("-inf"))
    half = max(1, r_max // 2)
    counts = [table.record(m).count for m in range(half, r_max + 1)]
    if len(counts) >= 2 and counts[0] > 0:
        growth = (math.log(counts[-1]) - math.log(counts[0])) / (len(counts) - 1)
    else:
        growth = float("nan")
    return BoxDimension(table.t, r_max, min(seq), min(seq_yes), seq, growth, table)


def d_estimate(t, r_max: int = 14, depth: int = 0) -> dict:
    """``d(t) = min(1, 2 Delta+(t))`` with the upper / lower counting modes."""
    box = box_dimension(t, r_max, depth)
    return {
        "t": box.t,
        "delta_upper": box.estimate,
        "delta_lower": box.lower_estimate,
        "upper": min(1.0, 2 * box.estimate),
        "lower": min(1.0, 2 * box.lower_estimate),
        "growth": min(1.0, 2 * box.growth),
        "box": box,
    }


# -- the B_m family -------------------------------------------------------------------------

def bm_alphabet(m: int) -> WordAlphabet:
    """``B_m = {2 1^(2m) 2, 2 1^(2m+2) 2}``."""
    if m < 1:
        raise DomainError("m must be at least 1")
    return WordAlphabet(((2,) + (1,) * (2 * m) + (2,), (2,) + (1,) * (2 * m + 2) + (2,)))


@dataclass
class BmLowerBound:
    m: int
    threshold: Fraction
    shift_sup: object
    dimension: object

    @property
    def certified(self) -> bool:
        return self.shift_sup.value.hi <= self.threshold and self.dimension.lower > 0

    @property
    def d_lower(self) -> float:
        """``d(3 + 2^-m) >= 2 HD(K(B_m))``."""
        return min(1.0, 2 * self.dimension.lower)


def bm_lower_bound(m: int, tol=Fraction(1, 10 ** 6), depth: int = 8) -> BmLowerBound:
    """Certify ``sup m(Sigma(B_m)) <= 3 + 2^-m`` and a positive dimension bracket."""
    B = bm_alphabet(m)
    sup = sup_markov_over_shift(B.words, tol)
    dim = dimension_bracket(B, depth)
    return BmLowerBound(m, 3 + Fraction(1, 2 ** m), sup, dim)
