"""Perron heights on bi-infinite sequences: ``f``, ``m(theta)`` and ``l(theta)``.

For ``theta = (..., a_-1, a_0, a_1, ...)`` the height at the origin is
``f = [a_0; a_1, a_2, ...] + [0; a_-1, a_-2, ...]``.  The Markov value is the
sup of ``f`` over all shifts, the Lagrange value the limsup to the right.

On eventually periodic sequences each half of ``f`` is an exact quadratic
surd, so heights are evaluated exactly and enclosed only at the end (the two
halves usually live in different quadratic fields).
"""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cf import _purely_periodic_value, cylinder_enclosure, evaluate, mobius_tail
from .enclosure import BoundedValue
from .errors import BudgetExceeded, DomainError
from .surd import QuadraticSurd, compare, parse_real

Real = Union[Fraction, QuadraticSurd]


def _primitive_root(word: tuple) -> tuple:
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and word[:k] * (n // k) == word:
            return word[:k]
    return word


@dataclass(frozen=True)
class BiSequence:
    """``... L L L core R R R ...`` with position 0 at ``core[origin]``.

    ``left_period`` is written in reading order: its last letter sits just
    left of the core.  ``origin`` may point outside the core, into either tail.
    """

    left_period: tuple
    core: tuple
    right_period: tuple
    origin: int = 0

    def __post_init__(self):
        for name in ("left_period", "core", "right_period"):
            object.__setattr__(self, name, tuple(int(a) for a in getattr(self, name)))
        if not self.left_period or not self.right_period:
            raise DomainError("periods must be nonempty")
        if any(a < 1 for a in self.left_period + self.core + self.right_period):
            raise DomainError("letters must be positive integers")

    @classmethod
    def periodic(cls, period: Sequence[int]) -> "BiSequence":
        return cls(tuple(period), (), tuple(period))

    def letter(self, i: int) -> int:
        """The letter at position ``i`` (position 0 is ``core[origin]``)."""
        j = i + self.origin
        if j < 0:
            return self.left_period[j % len(self.left_period)]
        if j < len(self.core):
            return self.core[j]
        return self.right_period[(j - len(self.core)) % len(self.right_period)]

    def window(self, start: int, stop: int) -> list[int]:
        return [self.letter(i) for i in range(start, stop)]

    @property
    def core_start(self) -> int:
        """Position of ``core[0]``."""
        return -self.origin

    @property
    def core_stop(self) -> int:
        """Position just after the core."""
        return len(self.core) - self.origin

    def shift(self, k: int = 1) -> "BiSequence":
        """``sigma^k``: the letter at position ``k`` moves to position 0."""
        return BiSequence(self.left_period, self.core, self.right_period, self.origin + k)

    def reversed(self) -> "BiSequence":
        """The mirror image ``i -> -i``."""
        return BiSequence(
            self.right_period[::-1], self.core[::-1], self.left_period[::-1], len(self.core) - 1 - self.origin
        )

    def canonical(self) -> "BiSequence":
        """Minimal periods and as much of the core as possible absorbed into them."""
        left, right = _primitive_root(self.left_period), _primitive_root(self.right_period)
        core, origin = list(self.core), self.origin
        while core and core[-1] == right[-1]:
            core.pop()
            right = right[-1:] + right[:-1]
        while core and core[0] == left[0]:
            core.pop(0)
            left = left[1:] + left[:1]
            origin -= 1
        return BiSequence(left, tuple(core), right, origin)

    def __str__(self):
        body = lambda w: "".join(map(str, w)) if all(a < 10 for a in w) else ",".join(map(str, w))
        core = " " + body(self.core) + " " if self.core else " "
        return f"({body(self.left_period)})*{core}({body(self.right_period)})*"


_SEQ_RE = re.compile(r"^\s*\(([^()]*)\)\*\s*([^()]*?)\s*(?:\(([^()]*)\)\*)?\s*$")


def _parse_word(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    if "," in text or " " in text:
        return tuple(int(t) for t in re.split(r"[,\s]+", text) if t)
    return tuple(int(c) for c in text)


def parse_bisequence(text: str, origin: int = 0, mirrored_left: bool = False) -> BiSequence:
    """Read ``"(L)* core (R)*"``; a lone ``"(P)*"`` is the purely periodic sequence.

    Digits may be run together (``"(221)* 11 (122)*"``) or comma separated
    for letters above 9.  The left period is in reading order, so its last
    letter touches the core; ``mirrored_left`` flips that convention.
    """
    m = _SEQ_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse bi-sequence {text!r}")
    left = _parse_word(m.group(1))
    core = _parse_word(m.group(2))
    right = _parse_word(m.group(3)) if m.group(3) is not None else left
    if mirrored_left:
        left = left[::-1]
    return BiSequence(left, core, right, origin)


# -- exact halves of f ---------------------------------------------------------

def forward_value(theta: BiSequence, n: int) -> Real:
    """``[a_n; a_{n+1}, ...]`` exactly."""
    stop = theta.core_stop
    R = theta.right_period
    if n >= stop:
        k = (n - stop) % len(R)
        return _purely_periodic_value(R[k:] + R[:k])
    return mobius_tail(theta.window(n, stop), _purely_periodic_value(R))


def backward_value(theta: BiSequence, n: int) -> Real:
    """``[0; a_{n-1}, a_{n-2}, ...]`` exactly."""
    start = theta.core_start
    L = theta.left_period[::-1]  # letters met while walking left
    if n - 1 < start:
        k = (start - n) % len(L)
        y = _purely_periodic_value(L[k:] + L[:k])
    else:
        head = [theta.letter(i) for i in range(n - 1, start - 1, -1)]
        y = mobius_tail(head, _purely_periodic_value(L))
    return 1 / y


def _enclose(x: Real, bits: int) -> BoundedValue:
    if isinstance(x, QuadraticSurd):
        return BoundedValue(*x.enclose(bits))
    return BoundedValue.exact(x)


def _bits_for(tol) -> int:
    tol = Fraction(tol)
    bits = 8
    while Fraction(1, 2 ** bits) * 40 > tol:
        bits += 8
    return bits + 16


@dataclass(frozen=True)
class PerronValue:
    """A certified height together with where it is attained.

    ``attained`` is a position, or a string naming the limit along a periodic
    tail when the sup is approached but not attained.  ``exact`` holds the
    value as a surd when both halves share a quadratic field.
    """

    value: BoundedValue
    attained: Union[int, str]
    exact: Optional[Real] = None

    def __float__(self):
        return float(self.value.mid)


def _height_exact(fwd: Real, bwd: Real) -> Optional[Real]:
    try:
        return fwd + bwd
    except ValueError:
        return None


def height_exact(theta: BiSequence, n: int = 0) -> tuple[Real, Real]:
    """The two halves of ``f(sigma^n theta)`` as exact numbers."""
    return forward_value(theta, n), backward_value(theta, n)


def height_f(theta: BiSequence, n: int = 0, depth: int = 40) -> BoundedValue:
    """Enclosure of ``f(sigma^n theta)`` from ``depth`` letters on each side.

    Unknown tails are only assumed to be at least 1, so the width is below
    ``2 * 2**-(depth-1)`` whatever the letters are.
    """
    if depth < 2:
        raise DomainError("depth must be at least 2")
    fwd = cylinder_enclosure(theta.window(n, n + depth))
    bwd = cylinder_enclosure([0] + [theta.letter(n - 1 - k) for k in range(depth)])
    return fwd + bwd


def _periodic_heights(period: tuple) -> list[tuple[Real, int]]:
    """Exact ``f`` at every phase of the purely periodic sequence ``period``."""
    theta = BiSequence.periodic(period)
    out = []
    for k in range(len(period)):
        out.append((forward_value(theta, k) + backward_value(theta, k), k))
    return out


def markov_value(theta: BiSequence, tol=Fraction(1, 10 ** 10)) -> PerronValue:
    """Certified ``m(theta) = sup_n f(sigma^n theta)``.

    Along a periodic tail the heights at a fixed phase form a Mobius orbit in
    the number of periods crossed, hence monotone or alternating and
    convergent.  So the sup over a tail is the larger of its first two
    periods and the limit, which is a height of the purely periodic sequence.
    """
    theta = theta.canonical()
    L, R = theta.left_period, theta.right_period
    bits = _bits_for(tol)
    candidates: list[tuple[BoundedValue, Union[int, str], Optional[Real]]] = []
    for n in range(theta.core_start - 2 * len(L), theta.core_stop + 2 * len(R)):
        fwd, bwd = height_exact(theta, n)
        enc = _enclose(fwd, bits) + _enclose(bwd, bits)
        candidates.append((enc, n, _height_exact(fwd, bwd)))
    for label, period in (("left", L), ("right", R)):
        for value, k in _periodic_heights(period):
            candidates.append((_enclose(value, bits), f"limit along the {label} period, phase {k}", value))
    return _best(candidates)


def _best(candidates) -> PerronValue:
    lo = max(c[0].lo for c in candidates)
    hi = max(c[0].hi for c in candidates)
    best = max(candidates, key=lambda c: c[0].lo)
    exact = best[2] if _pins(best, candidates) else None
    return PerronValue(BoundedValue(lo, hi), best[1], exact)


def _pins(best, candidates) -> bool:
    """True when the leader's exact value is provably the max."""
    if best[2] is None:
        return False
    for c in candidates:
        if c[0].hi <= best[0].lo:
            continue
        if c[2] is None:
            return False
        try:
            if compare(c[2], best[2]) > 0:
                return False
        except ValueError:
            return False
    return True


def lagrange_value(theta: BiSequence, tol=Fraction(1, 10 ** 10)) -> PerronValue:
    """Certified ``l(theta) = limsup_{n -> +inf} f(sigma^n theta)``.

    Only the right period matters; both halves of each limiting height lie in
    the same quadratic field, so the result is exact.
    """
    R = theta.canonical().right_period
    bits = _bits_for(tol)
    heights = _periodic_heights(R)
    value, k = max(heights, key=lambda h: h[0])
    return PerronValue(_enclose(value, bits), f"limit along the right period, phase {k}", value)


# -- Perron's identity ---------------------------------------------------------------

def perron_identity_check(alpha: QuadraticSurd, n: int) -> Real:
    """``alpha - p_n/q_n - (-1)^n / ((alpha_{n+1} + beta_{n+1}) q_n^2)``; exactly zero.

    ``alpha_{n+1}`` comes from iterating the Gauss map on ``alpha`` and
    ``beta_{n+1} = [0; a_n, ..., a_1]`` from the reversed quotients, so the
    two sides are computed independently of each other.
    """
    if isinstance(alpha, str):
        alpha = parse_real(alpha)
    if not isinstance(alpha, QuadraticSurd):
        raise DomainError("alpha must be an irrational quadratic surd")
    if n < 0:
        raise DomainError("n must be non-negative")
    quotients = []
    x: Real = alpha
    for _ in range(n + 1):
        a = x.floor()
        quotients.append(a)
        x = 1 / (x - a)
    alpha_next = x
    beta_next = evaluate([0, *reversed(quotients[1:])]) if n >= 1 else Fraction(0)
    conv = evaluate(quotients)
    q = conv.denominator
    rhs = Fraction((-1) ** n, q * q) / (alpha_next + beta_next)
    return alpha - conv - rhs


# -- Freiman's constant and examples ----------------------------------------------

FREIMAN_S = "(221221122)* 11 (221122122)*"
FREIMAN_S_INF = "(2)* 121122212 (1122212)*"


def freiman_constant() -> QuadraticSurd:
    """Start of Hall's ray: ``(2221564096 + 283748 sqrt(462)) / 491993569``.

    Equivalently ``4 + (253589820 + 283748 sqrt(462)) / 491993569 ~ 4.527829566``.
    A coefficient of 283798 would give 4.5278317..., off the known decimal value.
    """
    return 4 + (253589820 + 283748 * QuadraticSurd.sqrt(462)) / 491993569


# -- sup of m over a complete shift ------------------------------------------------

@dataclass
class ShiftSupResult:
    value: BoundedValue
    witness: tuple  # (left words, center word, offset, right words) of the best window
    nodes: int


def _moebius_range(state, tlo, thi) -> tuple[Fraction, Fraction]:
    p, q, p1, q1 = state
    x = Fraction(p * tlo + p1, q * tlo + q1)
    y = Fraction(p * thi + p1, q * thi + q1) if thi is not None else Fraction(p, q)
    return (x, y) if x <= y else (y, x)


def _push(state, letters):
    p, q, p1, q1 = state
    for a in letters:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    return (p, q, p1, q1)


def sup_markov_over_shift(
    words: Sequence[Sequence[int]], tol=Fraction(1, 10 ** 6), max_nodes: int = 2_000_000
) -> ShiftSupResult:
    """Enclosure of ``sup { m(theta) : theta a bi-infinite concatenation of words }``.

    Best-first branch and bound over windows ``(left words, center word,
    offset, right words)``.  Each window bounds ``f`` at the offset for every
    extension, with unknown continuations confined to ``[first letter, A+1]``.
    Lower bounds of windows are attained lower bounds of the sup.
    """
    words = [tuple(w) for w in words]
    if not words or any(not w or min(w) < 1 for w in words):
        raise DomainError("alphabet words must be nonempty and positive")
    tol = Fraction(tol)
    A = max(max(w) for w in words)
    t_fwd = (Fraction(min(w[0] for w in words)), Fraction(A + 1))
    t_bwd = (Fraction(min(w[-1] for w in words)), Fraction(A + 1))
    seed_fwd = (1, 0, 0, 1)
    seed_bwd = _push(seed_fwd, [0])

    def bounds(fstate, bstate):
        flo, fhi = _moebius_range(fstate, *t_fwd)
        blo, bhi = _moebius_range(bstate, *t_bwd)
        return flo + blo, fhi + bhi

    counter = itertools.count()
    heap = []
    best_lo, best_witness = Fraction(0), None
    for w in words:
        for j in range(len(w)):
            fs = _push(seed_fwd, w[j:])
            bs = _push(seed_bwd, reversed(w[:j]))
            lo, hi = bounds(fs, bs)
            node = ((), w, j, (), fs, bs, len(w) - j, j)
            if lo > best_lo:
                best_lo, best_witness = lo, node
            heapq.heappush(heap, (-hi, next(counter), lo, node))
    nodes = 0
    while heap:
        neg_hi, _, lo, node = heap[0]
        hi = -neg_hi
        if hi - best_lo <= tol:
            lw, w, j, rw = best_witness[:4]
            return ShiftSupResult(BoundedValue(best_lo, max(hi, best_lo)), (lw, w, j, rw), nodes)
        heapq.heappop(heap)
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"sup search exceeded {max_nodes} nodes; enclosure [{float(best_lo)}, {float(hi)}]")
        lw, w, j, rw, fs, bs, nf, nb = node
        for u in words:
            if nf <= nb:
                child = (lw, w, j, rw + (u,), _push(fs, u), bs, nf + len(u), nb)
            else:
                child = (lw + (u,), w, j, rw, fs, _push(bs, reversed(u)), nf, nb + len(u))
            clo, chi = bounds(child[4], child[5])
            if clo > best_lo:
                best_lo, best_witness = clo, child
            if chi > best_lo:
                heapq.heappush(heap, (-chi, next(counter), clo, child))
    # every branch was pruned below the best lower bound
    lw, w, j, rw = best_witness[:4]
    return ShiftSupResult(BoundedValue(best_lo, best_lo), (lw, w, j, rw), nodes)


# -- Hall's ray --------------------------------------------------------------------

@dataclass
class HallRay:
    """Output of :func:`hall_ray_alpha`.

    ``alpha`` lists ``[0; b_1, c_0, a_1, b_2, b_1, c_0, a_1, a_2, ...]`` block
    by block.  ``height`` encloses ``f`` at the ``c_0`` of the last block,
    which tends to ``l(alpha)`` as blocks grow.
    """

    target: Fraction
    c0: int
    a: tuple
    b: tuple
    alpha: "object"
    height: BoundedValue
    blocks: int = field(default=0)


def _hall_interval():
    r = QuadraticSurd.sqrt(2)
    return r - 1, 4 * (r - 1)


def hall_ray_alpha(ell, depth: int = 25, max_nodes: int = 200_000) -> HallRay:
    """A continued fraction whose Lagrange value is ``ell`` (any rational ``ell >= 6``).

    Picks the largest ``c_0`` in ``{5, ..., floor(ell)}`` with ``ell - c_0``
    in ``C(4) + C(4)``, splits ``ell - c_0 = [0; a...] + [0; b...]`` with
    digits at most 4, and emits blocks ``(b_n..b_1, c_0, a_1..a_n)`` for
    ``n = 1..depth``.
    """
    from .cantor import WordAlphabet, sumset_stab
    from .cf import CFExpansion

    ell = parse_real(ell) if isinstance(ell, str) else Fraction(ell)
    if ell < 6:
        raise DomainError("Hall's construction needs ell >= 6")
    lo, hi = _hall_interval()
    c0 = None
    for c in range(int(ell), 4, -1):
        x = ell - c
        if lo <= x <= hi:
            c0 = c
            break
    if c0 is None:
        raise DomainError(f"no c0 in 5..{int(ell)} puts ell - c0 in C(4)+C(4)")
    c4 = WordAlphabet.letters(4)
    witness = sumset_stab(ell - c0, c4, c4, tol=0, min_length=depth, max_nodes=max_nodes)
    if not witness:
        raise DomainError(f"{ell - c0} could not be split in C(4)+C(4)")
    a, b = witness.first[:depth], witness.second[:depth]
    quotients = []
    for n in range(1, depth + 1):
        quotients += list(reversed(b[:n])) + [c0] + list(a[:n])
    alpha = CFExpansion(0, quotients, truncated=True)
    fwd = cylinder_enclosure([c0, *a])
    bwd = cylinder_enclosure([0, *b])
    return HallRay(ell, c0, tuple(a), tuple(b), alpha, fwd + bwd, depth)
