"""Continued fractions: expansion, convergents, continuants, approximation tests.

Expansions are exact.  A rational expands by Euclid's algorithm into its
canonical form (last quotient at least 2); a quadratic surd expands until a
complete quotient repeats, which pins down the eventual period.  Arbitrary
reals such as ``pi`` enter as truncated prefixes carrying a certified
enclosure.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .enclosure import BoundedValue, pi_bounds
from .errors import DomainError, InsufficientPrecision
from .surd import QuadraticSurd, compare, parse_real

Real = Union[Fraction, QuadraticSurd]

EULER_CAP = 20


@dataclass(frozen=True)
class CFExpansion:
    """``[a0; a1, a2, ...]``.

    ``quotients`` are the explicit terms after ``a0``.  A non-empty ``period``
    repeats forever after them.  ``truncated`` marks a finite prefix of some
    longer (typically infinite) expansion whose tail is unknown.
    """

    a0: int
    quotients: tuple = ()
    period: tuple = ()
    truncated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "quotients", tuple(int(a) for a in self.quotients))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if any(a < 1 for a in self.quotients + self.period):
            raise DomainError("partial quotients after a0 must be positive")
        if self.period and self.truncated:
            raise DomainError("a periodic expansion is never truncated")

    @property
    def is_finite(self) -> bool:
        return not self.period and not self.truncated

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def is_canonical(self) -> bool:
        """Terminating expansions must end with a quotient of at least 2."""
        if not self.is_finite or not self.quotients:
            return True
        return self.quotients[-1] >= 2

    def known_length(self) -> Union[int, float]:
        """Number of known terms ``a0..a_n`` (infinite for periodic expansions)."""
        if self.period:
            return math.inf
        return 1 + len(self.quotients)

    def term(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        if n == 0:
            return self.a0
        if n <= len(self.quotients):
            return self.quotients[n - 1]
        if self.period:
            return self.period[(n - 1 - len(self.quotients)) % len(self.period)]
        raise IndexError(f"term {n} is beyond the known expansion")

    def terms(self, count: int) -> list[int]:
        """The first ``count`` terms (fewer if the expansion is finite)."""
        count = min(count, self.known_length())
        return [self.term(i) for i in range(int(count))]

    def __iter__(self) -> Iterator[int]:
        n = 0
        while n < self.known_length():
            yield self.term(n)
            n += 1

    # -- values -------------------------------------------------------------
    def value(self) -> Real:
        """Exact value; raises for truncated prefixes (use :meth:`enclosure`)."""
        if self.truncated:
            raise InsufficientPrecision("value of a truncated expansion is only known as an enclosure")
        if not self.period:
            return evaluate(self.terms(self.known_length()))
        y = _purely_periodic_value(self.period)
        head = [self.a0, *self.quotients]
        return mobius_tail(head, y)

    def enclosure(self, depth: int | None = None) -> BoundedValue:
        """Certified interval for the value.

        Exact expansions give a degenerate interval unless ``depth`` asks for
        the cylinder of the first ``depth`` terms.
        """
        if depth is None:
            if not self.truncated:
                v = self.value()
                if isinstance(v, QuadraticSurd):
                    lo, hi = v.enclose(96)
                    return BoundedValue(lo, hi)
                return BoundedValue.exact(v)
            depth = self.known_length()
        depth = min(depth, self.known_length())
        head = self.terms(depth)
        if self.is_finite and depth == self.known_length():
            return BoundedValue.exact(evaluate(head))
        return cylinder_enclosure(head)

    def tail(self, n: int) -> Real:
        """Complete quotient ``alpha_n = [a_n; a_{n+1}, ...]`` (exact)."""
        if self.truncated:
            raise InsufficientPrecision("tail of a truncated expansion is unknown")
        if self.period:
            skip = n - 1 - len(self.quotients)
            if n >= 1 and skip >= 0:
                k = skip % len(self.period)
                return _purely_periodic_value(self.period[k:] + self.period[:k])
            rest = CFExpansion(self.term(n), self.quotients[n:], self.period)
            return rest.value()
        return evaluate(self.terms(self.known_length())[n:])

    def transposed_prefix(self, n: int) -> Fraction:
        """``beta_n = [0; a_{n-1}, ..., a_1]`` (zero for ``n <= 1``)."""
        return evaluate([0, *(self.term(i) for i in range(n - 1, 0, -1))])

    def __str__(self):
        return format_cf(self)


@dataclass(frozen=True)
class ConvergentPair:
    """``p_k/q_k`` together with the previous convergent ``p_{k-1}/q_{k-1}``."""

    index: int
    p: int
    q: int
    p_prev: int
    q_prev: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


# -- expansion ----------------------------------------------------------------

def cf_expand(x, max_terms: int = 10_000) -> CFExpansion:
    """Expand a rational or quadratic surd (or its string form)."""
    if isinstance(x, str):
        x = parse_real(x)
    if max_terms < 1:
        raise DomainError("max_terms must be positive")
    if isinstance(x, QuadraticSurd):
        return _expand_surd(x, max_terms)
    return _expand_rational(Fraction(x), max_terms)


def _expand_rational(x: Fraction, max_terms: int) -> CFExpansion:
    num, den = x.numerator, x.denominator
    terms = []
    while den and len(terms) < max_terms:
        a, r = divmod(num, den)
        terms.append(a)
        num, den = den, r
    return CFExpansion(terms[0], terms[1:], truncated=bool(den))


def _expand_surd(x: QuadraticSurd, max_terms: int) -> CFExpansion:
    seen: dict = {}
    terms: list[int] = []
    alpha: Real = x
    while len(terms) < max_terms:
        key = (alpha.a, alpha.b)
        if key in seen:
            j = seen[key]
            block = terms[j:]
            if j == 0:
                return CFExpansion(terms[0], (), tuple(block[1:] + block[:1]))
            return CFExpansion(terms[0], terms[1:j], tuple(block))
        seen[key] = len(terms)
        a = alpha.floor()
        terms.append(a)
        alpha = 1 / (alpha - a)
    return CFExpansion(terms[0], terms[1:], truncated=True)


def cf_from_enclosure(lo, hi, max_terms: int = 10_000) -> CFExpansion:
    """The prefix shared by every real in the open interval ``(lo, hi)``."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise DomainError("need lo < hi")
    terms = []
    while len(terms) < max_terms:
        a = math.floor(lo)
        # every x in (lo, hi) has floor a unless an integer lies strictly inside
        if hi > a + 1:
            break
        terms.append(a)
        if lo == a:
            break  # the next complete quotient is unbounded above
        lo, hi = 1 / (hi - a), 1 / (lo - a)
    if not terms:
        raise InsufficientPrecision("interval straddles an integer")
    return CFExpansion(terms[0], terms[1:], truncated=True)


def pi_cf(n_terms: int = 30) -> CFExpansion:
    """Certified prefix of the expansion of ``pi`` with at least ``n_terms`` terms."""
    digits = max(40, 2 * n_terms)
    while True:
        cf = cf_from_enclosure(*pi_bounds(digits))
        if cf.known_length() >= n_terms:
            return CFExpansion(cf.a0, cf.quotients[: n_terms - 1], truncated=True)
        digits *= 2


_CF_RE = re.compile(r"^\s*\[\s*(-?\d+)\s*(?:;\s*([\d,\s]*?)\s*(,\s*\.\.\.)?)?\s*\]\s*(?:~\s*\(([\d,\s]+)\))?\s*$")


def parse_cf(text: str) -> CFExpansion:
    """Parse ``"[a0;a1,...,ak]"``, ``"[a0;a1,...,ak,...]"`` or with a ``"~(period)"`` suffix."""
    m = _CF_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse continued fraction {text!r}")
    a0 = int(m.group(1))
    body = [int(s) for s in (m.group(2) or "").replace(" ", "").split(",") if s]
    period = [int(s) for s in (m.group(4) or "").replace(" ", "").split(",") if s]
    return CFExpansion(a0, body, period, truncated=bool(m.group(3)))


def format_cf(cf: CFExpansion) -> str:
    body = ",".join(str(a) for a in cf.quotients)
    if cf.truncated:
        body = body + ",..." if body else "..."
    text = f"[{cf.a0};{body}]" if body else f"[{cf.a0}]"
    if cf.period:
        text += "~(" + ",".join(str(a) for a in cf.period) + ")"
    return text


# -- evaluation helpers ---------------------------------------------------------

def evaluate(terms: Sequence[int]) -> Fraction:
    """Exact value of the finite expansion ``[t0; t1, ..., tk]``."""
    p, q, p1, q1 = 1, 0, 0, 1
    for a in terms:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    return Fraction(p, q)


def mobius_tail(head: Sequence[int], tail):
    """Value of ``[h0; h1, ..., hk, tail]`` where ``tail`` is a complete quotient."""
    p, q, p1, q1 = 1, 0, 0, 1
    for a in head:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    return (p * tail + p1) / (q * tail + q1)


def _purely_periodic_value(period: Sequence[int]) -> QuadraticSurd:
    """``y = [p1; p2, ..., pk, y]`` as an exact surd (the root larger than 1)."""
    p, q, p1, q1 = 1, 0, 0, 1
    for a in period:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    # y = (p y + p1) / (q y + q1)  =>  q y^2 + (q1 - p) y - p1 = 0
    disc = (q1 - p) ** 2 + 4 * q * p1
    root = QuadraticSurd.sqrt(disc)
    return (root + (p - q1)) / (2 * q)


def cylinder_enclosure(head: Sequence[int]) -> BoundedValue:
    """Interval of all reals ``[h0; h1, ..., hk, t]`` with a tail ``t >= 1``."""
    p, q, p1, q1 = 1, 0, 0, 1
    for a in head:
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    x, y = Fraction(p, q), Fraction(p + p1, q + q1)
    return BoundedValue(min(x, y), max(x, y))


# -- convergents ----------------------------------------------------------------

def convergents(cf: CFExpansion, n: int) -> ConvergentPair:
    """Convergent ``p_n/q_n`` with its predecessor; ``n = -1`` gives the seeds."""
    if n < -1:
        raise IndexError("index must be at least -1")
    if n + 1 > cf.known_length():
        raise IndexError(f"convergent {n} needs {n + 1} terms; only {cf.known_length()} known")
    p, q, p1, q1 = 1, 0, 0, 1
    for i in range(n + 1):
        a = cf.term(i)
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
    return ConvergentPair(n, p, q, p1, q1)


def iter_convergents(cf: CFExpansion, limit: int | None = None) -> Iterator[ConvergentPair]:
    p, q, p1, q1 = 1, 0, 0, 1
    for i, a in enumerate(cf):
        if limit is not None and i >= limit:
            return
        p, p1 = a * p + p1, p
        q, q1 = a * q + q1, q
        yield ConvergentPair(i, p, q, p1, q1)


def determinant_check(cp: ConvergentPair) -> int:
    """``p_k q_{k-1} - p_{k-1} q_k``, which should equal ``(-1)**(k-1)``."""
    return cp.p * cp.q_prev - cp.p_prev * cp.q


# -- continuants ------------------------------------------------------------------

def continuant(word: Sequence[int]) -> int:
    """``q(a1, ..., an)``: denominator of ``[0; a1, ..., an]``; the empty word gives 1."""
    q, q1 = 1, 0
    for a in word:
        q, q1 = a * q + q1, q
    return q


def euler_rule_oracle(word: Sequence[int], cap: int = EULER_CAP) -> int:
    """Continuant by Euler's rule: sum over all ways of deleting disjoint adjacent pairs
    of the product of the letters left over."""
    word = list(word)
    if len(word) > cap:
        raise DomainError(f"word longer than the brute-force cap {cap}")

    def deletions(start: int) -> Iterator[list[int]]:
        # each yield is the list of kept indices from position `start` on
        if start >= len(word):
            yield []
            return
        for rest in deletions(start + 1):
            yield [start] + rest
        if start + 1 < len(word):
            yield from deletions(start + 2)

    total = 0
    for kept in deletions(0):
        prod = 1
        for i in kept:
            prod *= word[i]
        total += prod
    return total


def transpose_value(word: Sequence[int]) -> Fraction:
    """``[0; a_n, ..., a_1]`` for ``word = (a_1, ..., a_n)``."""
    if not word:
        raise DomainError("empty word")
    return evaluate([0, *reversed(word)])


# -- approximation tests ------------------------------------------------------------

def _alpha_of(cf: CFExpansion):
    return None if cf.truncated else cf.value()


def _distance_test(alpha, enc: BoundedValue, p: int, q: int, factor_sq) -> int:
    """Sign of ``factor_sq * q^2 * (q*alpha - p)^2 - 1``.

    Exact when ``alpha`` is known exactly, otherwise decided from ``enc``.
    Squaring keeps everything inside the field of ``alpha``.
    """
    if alpha is not None:
        v = q * alpha - p
        return compare(factor_sq * q * q * v * v, 1)
    lo, hi = q * enc.lo - p, q * enc.hi - p
    vlo = Fraction(0) if lo <= 0 <= hi else min(abs(lo), abs(hi))
    vhi = max(abs(lo), abs(hi))
    if factor_sq * q * q * vhi * vhi < 1:
        return -1
    if factor_sq * q * q * vlo * vlo > 1:
        return 1
    raise InsufficientPrecision("enclosure too wide to decide; deepen the expansion")


def best_approximations(cf: CFExpansion, Q: int) -> list[Fraction]:
    """All ``p/q`` with ``q <= Q`` and ``|alpha - p/q| < 1/(2q^2)``, in order of ``q``.

    Only convergents can qualify, so only convergents are tested.
    """
    alpha = _alpha_of(cf)
    enc = cf.enclosure() if alpha is None else None
    out = []
    for cp in iter_convergents(cf):
        if cp.q > Q:
            return out
        if _distance_test(alpha, enc, cp.p, cp.q, 4) < 0:
            out.append(cp.fraction)
    if cf.truncated:
        raise InsufficientPrecision("expansion too short to certify up to Q")
    return out


def hurwitz_witness(cf: CFExpansion, n: int) -> int:
    """An index ``k`` in ``{n-1, n, n+1}`` with ``5 (q_k alpha - p_k)^2 q_k^2 < 1``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    alpha = _alpha_of(cf)
    enc = cf.enclosure() if alpha is None else None
    undecided = False
    for k in (n - 1, n, n + 1):
        if k + 1 > cf.known_length():
            break
        cp = convergents(cf, k)
        try:
            if _distance_test(alpha, enc, cp.p, cp.q, 5) < 0:
                return k
        except InsufficientPrecision:
            undecided = True
    if undecided or alpha is None:
        raise InsufficientPrecision("cannot certify a witness; deepen the expansion")
    raise ArithmeticError(f"no witness among convergents {n - 1}..{n + 1}")


def hurwitz_counterexample_count(eps, Q: int) -> int:
    """Number of reduced ``p/q``, ``q <= Q``, with ``|phi - p/q| <= 1/((sqrt5 + eps) q^2)``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    phi = (1 + QuadraticSurd.sqrt(5)) / 2
    factor = QuadraticSurd.sqrt(5) + eps
    count = 0
    for q in range(1, Q + 1):
        base = (q * phi).floor()
        for p in (base, base + 1):
            if math.gcd(p, q) != 1:
                continue
            if compare(factor * q * abs(q * phi - p), 1) <= 0:
                count += 1
    return count


# -- Levy constant -------------------------------------------------------------------

LEVY_CONSTANT = math.exp(math.pi ** 2 / (12 * math.log(2)))


def gauss_quotient(rng: random.Random) -> int:
    """A partial quotient drawn from the Gauss-measure law ``log2(1 + 1/(k(k+2)))``."""
    while True:
        x = 2.0 ** rng.random() - 1.0  # Gauss-distributed point of (0, 1)
        if x > 0:
            return int(1.0 / x)


def levy_estimate(n: int = 1000, samples: int = 100, seed: int = 0) -> float:
    """Sample mean of ``q_n ** (1/n)`` over expansions with i.i.d. Gauss quotients."""
    rng = random.Random(seed)
    total = 0.0
    for _ in range(samples):
        word = [gauss_quotient(rng) for _ in range(n)]
        q = continuant(word)
        total += math.exp(_log_int(q) / n)
    return total / samples


def _log_int(m: int) -> float:
    shift = max(0, m.bit_length() - 60)
    return math.log(m >> shift) + shift * math.log(2)
