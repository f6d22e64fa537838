"""Gauss-Cantor sets ``K(B) = {[0; g1, g2, ...] : g_i in B}``.

Covers by cylinders, dimension brackets, and the sum-set stabbing search
behind Hall's lemma ``C(4) + C(4) = [sqrt2 - 1, 4(sqrt2 - 1)]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .cf import continuant, evaluate
from .errors import BudgetExceeded, DomainError


@dataclass(frozen=True)
class WordAlphabet:
    """A finite primitive set of words: none is a prefix of another."""

    words: tuple

    def __post_init__(self):
        words = tuple(tuple(int(a) for a in w) for w in self.words)
        if not words or any(not w or min(w) < 1 for w in words):
            raise DomainError("words must be nonempty with positive letters")
        if len(set(words)) != len(words):
            raise DomainError("repeated word in alphabet")
        for u, v in itertools.permutations(words, 2):
            if v[: len(u)] == u:
                raise DomainError(f"alphabet not primitive: {u} is a prefix of {v}")
        object.__setattr__(self, "words", words)

    @classmethod
    def letters(cls, A: int) -> "WordAlphabet":
        """``C(A)``: single letters ``1..A``."""
        return cls(tuple((a,) for a in range(1, A + 1)))

    @classmethod
    def parse(cls, text: str) -> "WordAlphabet":
        """``"1,2"`` or ``"2.1,1.2.3"`` (letters of a word joined by dots)."""
        return cls(tuple(tuple(int(a) for a in w.split(".")) for w in text.split(",") if w.strip()))

    def transpose(self) -> "WordAlphabet":
        return WordAlphabet(tuple(w[::-1] for w in self.words))

    @property
    def max_letter(self) -> int:
        return max(max(w) for w in self.words)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __str__(self):
        return ",".join(".".join(map(str, w)) for w in self.words)


@dataclass(frozen=True)
class CylinderInterval:
    word: tuple
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def cylinder(word: Sequence[int]) -> CylinderInterval:
    """``I(beta)``: endpoints ``[0; beta]`` and ``[0; beta with last letter + 1]``."""
    word = tuple(word)
    if not word:
        raise DomainError("empty word")
    x = evaluate([0, *word])
    y = evaluate([0, *word[:-1], word[-1] + 1])
    return CylinderInterval(word, min(x, y), max(x, y))


def cylinder_length(word: Sequence[int]) -> Fraction:
    """``1 / (q_n (q_n + q_{n-1}))`` from continuants."""
    q, q1 = continuant(word), continuant(word[:-1])
    return Fraction(1, q * (q + q1))


def words_of_depth(B: WordAlphabet, n: int) -> Iterable[tuple]:
    for combo in itertools.product(B.words, repeat=n):
        yield tuple(itertools.chain.from_iterable(combo))


def generate_cover(B: WordAlphabet, n: int) -> list[CylinderInterval]:
    """The ``|B|^n`` cylinders ``I(g1 ... gn)``, sorted by left endpoint."""
    if n < 1:
        raise DomainError("depth must be positive")
    return sorted((cylinder(w) for w in words_of_depth(B, n)), key=lambda c: c.lo)


# -- hull of K(B) ------------------------------------------------------------------

def _branch_image(word: Sequence[int], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Image of ``[lo, hi]`` (in ``[0, 1]``) under ``x -> [0; word + x]``."""
    p, q, p1, q1 = 0, 1, 1, 0  # convergent state after a0 = 0
    for a in word:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    # [0; word, 1/x] = (p + p1 x) / (q + q1 x), monotone in x
    u = Fraction(p + p1 * lo, q + q1 * lo)
    v = Fraction(p + p1 * hi, q + q1 * hi)
    return (u, v) if u <= v else (v, u)


def _round_out(lo: Fraction, hi: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    scale = 1 << bits
    return Fraction(math.floor(lo * scale), scale), Fraction(math.ceil(hi * scale), scale)


def hull(B: WordAlphabet, iterations: int = 80) -> tuple[Fraction, Fraction]:
    """A rational interval containing ``K(B)``, close to its convex hull.

    Starts from ``[0, 1]`` and applies ``J -> hull(union of branch images of J)``;
    every iterate still contains ``K(B)``.
    """
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(iterations):
        images = [_branch_image(w, lo, hi) for w in B.words]
        new = _round_out(min(i[0] for i in images), max(i[1] for i in images))
        new = (max(new[0], lo), min(new[1], hi))
        if new == (lo, hi):
            break
        lo, hi = new
    return lo, hi


# -- dimension brackets ---------------------------------------------------------------

@dataclass(frozen=True)
class DimensionBracket:
    lower: float
    upper: float
    depth: int
    method: str

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def _word_matrices(B: WordAlphabet, n: int) -> np.ndarray:
    """Rows ``(q(g), q(g-), q(-g), q(-g-))`` for all ``g`` in ``B^n``.

    ``g-`` drops the last letter and ``-g`` the first, so ``[0; g] = q(-g)/q(g)``
    and the branch ``x -> [0; g, 1/x]`` is ``(q(-g) + q(-g-) x) / (q(g) + q(g-) x)``.
    """
    base = []
    for w in B.words:
        inner = continuant(w[1:-1]) if len(w) > 1 else 0
        base.append((continuant(w), continuant(w[:-1]), continuant(w[1:]), inner))
    base = np.array(base, dtype=float)
    M = base.copy()
    for _ in range(n - 1):
        # the 2x2 continuant matrices multiply under concatenation
        a, b, c, d = (M[:, k][:, None] for k in range(4))
        e, f, g, h = (base[:, k][None, :] for k in range(4))
        M = np.stack([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h], axis=-1).reshape(-1, 4)
    return M


def _cover_points(B: WordAlphabet, max_length: float) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints ``(left, right)`` of pieces of ``K(B)`` no longer than ``max_length``.

    A piece is the image of the hull of ``K(B)`` under a word's branch; words
    are refined until every piece is short enough.
    """
    J = hull(B)
    lefts, rights = [], []
    stack = [w for w in B.words]
    while stack:
        w = stack.pop()
        lo, hi = _branch_image(w, *J)
        if hi - lo > max_length:
            stack.extend(w + u for u in B.words)
        else:
            lefts.append(float(lo))
            rights.append(float(hi))
    return np.array(lefts), np.array(rights)


def _transfer_bracket(B: WordAlphabet, n: int, piece_length: float, tol: float) -> tuple[float, float]:
    """Bracket the zero of the pressure via the transfer operator.

    ``L_s h(x) = sum_b |T_b'(x)|^s h(T_b x)`` over the branches ``T_b`` of
    ``B``.  For positive ``g`` on ``K(B)`` the spectral radius of ``L_s`` lies
    between the min and max of ``L_s g / g``; we take ``g = L_s^n h0`` with
    ``h0(x) = (1 + x)^-s``, close to the eigenfunction.  Each term of
    ``L_s^n h0(x)`` is ``((q + q' x)(q + p + (q' + p') x))^-s``, decreasing
    in ``x``, so on a piece ``[u, v]`` of ``K(B)`` the ratio lies between
    ``g_{n+1}(v)/g_n(u)`` and ``g_{n+1}(u)/g_n(v)``.  The radius decreases
    in ``s`` and equals 1 at the dimension.
    """
    left, right = _cover_points(B, piece_length)
    pts = np.concatenate([left, right])[None, :]
    k = len(left)

    def log_terms(depth):
        M = _word_matrices(B, depth)
        q, q1, p, p1 = (M[:, j][:, None] for j in range(4))
        return np.log(q + q1 * pts) + np.log(q + p + (q1 + p1) * pts)

    log_n, log_m = log_terms(n), log_terms(n + 1)

    def log_sum(logs, s):
        z = -s * logs
        top = z.max(axis=0)
        return top + np.log(np.exp(z - top).sum(axis=0))

    def lower(s):
        return float(np.min(log_sum(log_m, s)[k:] - log_sum(log_n, s)[:k]))

    def upper(s):
        return float(np.max(log_sum(log_m, s)[:k] - log_sum(log_n, s)[k:]))

    s_lo = brentq(lower, 1e-6, 1.0, xtol=tol) if lower(1.0) < 0 < lower(1e-6) else 0.0
    s_hi = brentq(upper, 1e-6, 1.0 + 1e-9, xtol=tol) if upper(1.0 + 1e-9) < 0 else 1.0
    return s_lo - tol, s_hi + tol


def _cover_bracket(B: WordAlphabet, n: int, tol: float) -> tuple[float, float]:
    """Bracket from ``Z_n(s) = sum q(g)^(-2s)`` over ``B^n``.

    Continuants satisfy ``q(g)q(h) <= q(gh) <= 2 q(g)q(h)``, so
    ``log(4^-s Z_n)/n <= P(s) <= log(Z_n)/n`` for the pressure ``P``, whose
    zero is the dimension.  Depends only on the multiset of continuants.
    """
    logq = np.log(_word_matrices(B, n)[:, 0])

    def logZ(s):
        z = -2 * s * logq
        top = z.max()
        return float(top + np.log(np.exp(z - top).sum()))

    s_hi = brentq(logZ, 1e-9, 2.0, xtol=tol) if logZ(2.0) < 0 else 2.0
    s_lo = brentq(lambda s: logZ(s) - s * math.log(4), 1e-9, 2.0, xtol=tol)
    return s_lo - tol, s_hi + tol


def dimension_bracket(
    B: WordAlphabet, depth: int, method: str = "transfer", piece_length: float = 1e-4, tol: float = 1e-10
) -> DimensionBracket:
    """Bracket ``HD(K(B))``.

    ``method="transfer"`` (default) brackets the spectral radius of the
    transfer operator from ``depth`` iterates, evaluated on a cover of
    ``K(B)`` by pieces of length at most ``piece_length``.  ``method="cover"`` uses the continuant sums directly;
    it is cruder but symmetric under transposing the alphabet.
    """
    if len(B) < 2:
        raise DomainError("a Cantor set needs at least two words")
    if depth < 1:
        raise DomainError("depth must be positive")
    if method == "transfer":
        lo, hi = _transfer_bracket(B, depth, piece_length, tol)
    elif method == "cover":
        lo, hi = _cover_bracket(B, depth, tol)
    else:
        raise DomainError(f"unknown method {method!r}")
    return DimensionBracket(max(lo, 0.0), min(hi, 1.0), depth, method)


def transpose_dimension_check(B: WordAlphabet, depth: int, method: str = "cover"):
    """Brackets for ``K(B)`` and ``K(B^T)`` at equal depth (equal dimensions)."""
    return dimension_bracket(B, depth, method), dimension_bracket(B.transpose(), depth, method)


def continuant_multiset(B: WordAlphabet, depth: int) -> list[int]:
    """Sorted continuants of all words in ``B^depth`` (unchanged by transposing ``B``)."""
    return sorted(continuant(w) for w in words_of_depth(B, depth))


def hensley_asymptotic(A: int) -> float:
    return 1 - 6 / (math.pi ** 2 * A) - 72 * math.log(A) / (math.pi ** 4 * A ** 2)


@dataclass(frozen=True)
class HensleyReport:
    A: int
    bracket: DimensionBracket
    asymptotic: float

    @property
    def gap(self) -> float:
        """Distance from the asymptotic value to the bracket (0 if inside)."""
        b = self.bracket
        return max(b.lower - self.asymptotic, self.asymptotic - b.upper, 0.0)


def hensley_check(A: int, depth: Optional[int] = None) -> HensleyReport:
    """Dimension bracket of ``C(A)`` next to the two-term Hensley asymptotic."""
    if A < 2:
        raise DomainError("A must be at least 2")
    if depth is None:
        depth = max(1, int(math.log(50) / math.log(A)))
    bracket = dimension_bracket(WordAlphabet.letters(A), depth, piece_length=2e-3)
    return HensleyReport(A, bracket, hensley_asymptotic(A))


# -- sum-set stabbing ---------------------------------------------------------------------

class _NotFound:
    def __bool__(self):
        return False

    def __repr__(self):
        return "NOT_FOUND"


NOT_FOUND = _NotFound()


@dataclass(frozen=True)
class StabWitness:
    """Words ``first``, ``second`` whose pieces of the two Cantor sets sum over an
    interval ``[lo, hi]`` containing ``x``."""

    x: Fraction
    first: tuple
    second: tuple
    lo: Fraction
    hi: Fraction
    nodes: int

    @property
    def cylinders(self) -> tuple[CylinderInterval, CylinderInterval]:
        return cylinder(self.first), cylinder(self.second)


def sumset_stab(
    x,
    B: WordAlphabet,
    B2: WordAlphabet,
    tol=Fraction(1, 10 ** 9),
    min_length: int = 0,
    max_nodes: int = 1_000_000,
):
    """Search for ``x`` in ``K(B) + K(B2)``.

    Keeps a pair of pieces whose sum interval contains ``x`` and refines the
    longer piece (ties refine the first), backtracking depth first.  A piece
    is the image of the hull of the Cantor set under the word's branch, so
    pruning never discards a genuine solution.  Succeeds once both pieces are
    shorter than ``tol`` and both words have at least ``min_length`` letters;
    returns ``NOT_FOUND`` when every branch dies out.
    """
    x = Fraction(x)
    tol = Fraction(tol)
    J1, J2 = hull(B), hull(B2)
    nodes = 0

    def piece(word, J):
        return _branch_image(word, *J)

    def done(w1, i1, w2, i2):
        short = tol == 0 or (i1[1] - i1[0] < tol and i2[1] - i2[0] < tol)
        return short and len(w1) >= min_length and len(w2) >= min_length

    stack = []
    for u in reversed(B.words):
        for v in reversed(B2.words):
            stack.append((u, v))
    while stack:
        w1, w2 = stack.pop()
        i1, i2 = piece(w1, J1), piece(w2, J2)
        lo, hi = i1[0] + i2[0], i1[1] + i2[1]
        if not lo <= x <= hi:
            continue
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"stabbing search exceeded {max_nodes} nodes")
        if done(w1, i1, w2, i2):
            return StabWitness(x, w1, w2, lo, hi, nodes)
        len1, len2 = i1[1] - i1[0], i2[1] - i2[0]
        if min_length and tol == 0:
            refine_first = len(w1) <= len(w2) if len(w1) != len(w2) else len1 >= len2
        else:
            refine_first = len1 >= len2
        if refine_first:
            children = [(w1 + u, w2) for u in B.words]
        else:
            children = [(w1, w2 + v) for v in B2.words]
        stack.extend(reversed(children))
    return NOT_FOUND


def hall_interval_check(xs: Iterable, tol=Fraction(1, 10 ** 9)) -> list:
    """Stab every ``x`` in ``C(4) + C(4)``; returns the ``x`` values that failed."""
    c4 = WordAlphabet.letters(4)
    return [x for x in xs if not sumset_stab(x, c4, c4, tol)]
