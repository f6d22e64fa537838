"""Unimodular lattices in the plane and the Lagrange value through holonomy vectors.

``X = g(Z^2)`` with ``det g = 1``.  Primitive vectors ``g(p, q)`` with
``gcd(p, q) = 1`` are the holonomy vectors.  For ``X = u_{-alpha}(Z^2)`` they
are ``(p - q alpha, q)`` and ``l(alpha)`` is the limsup of ``1/Area(v)`` as
``|Im v|`` grows, which gives an oracle for the continued-fraction side that
never looks at partial quotients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .enclosure import BoundedValue
from .errors import DomainError
from .surd import QuadraticSurd, parse_real

Real = Union[Fraction, QuadraticSurd]


def _exact(x) -> Real:
    if isinstance(x, str):
        return parse_real(x)
    if isinstance(x, float):
        raise DomainError("lattice entries must be exact")
    return x if isinstance(x, QuadraticSurd) else Fraction(x)


def _enclose(x: Real, bits: int = 80) -> BoundedValue:
    if isinstance(x, QuadraticSurd):
        return BoundedValue(*x.enclose(bits))
    return BoundedValue.exact(x)


def _round_exact(x: Real) -> int:
    return math.floor(x + Fraction(1, 2))


@dataclass(frozen=True)
class HolonomyVector:
    re: Real
    im: Real
    source: tuple = (0, 0)

    def norm_squared(self) -> Real:
        return self.re * self.re + self.im * self.im

    def scaled(self, lam) -> "HolonomyVector":
        """Diagonal flow ``(re, im) -> (lam re, im / lam)``."""
        return HolonomyVector(self.re * lam, self.im / lam, self.source)


def area(v: HolonomyVector) -> Real:
    """``|Re v| * |Im v|``."""
    return abs(v.re * v.im)


@dataclass(frozen=True)
class Lattice2:
    """Basis matrix ``[[g11, g12], [g21, g22]]``; columns are the images of ``e1, e2``."""

    g11: Real
    g12: Real
    g21: Real
    g22: Real

    def __post_init__(self):
        for name in ("g11", "g12", "g21", "g22"):
            object.__setattr__(self, name, _exact(getattr(self, name)))
        if self.g11 * self.g22 - self.g12 * self.g21 != 1:
            raise DomainError("basis must have determinant exactly 1")

    @classmethod
    def identity(cls) -> "Lattice2":
        return cls(1, 0, 0, 1)

    @classmethod
    def unipotent(cls, alpha) -> "Lattice2":
        """``u_{-alpha}(Z^2)``, whose holonomy vectors are ``(p - q alpha, q)``."""
        return cls(1, -_exact(alpha), 0, 1)

    def vector(self, p: int, q: int) -> HolonomyVector:
        if math.gcd(p, q) != 1:
            raise DomainError(f"({p}, {q}) is not primitive")
        return HolonomyVector(self.g11 * p + self.g12 * q, self.g21 * p + self.g22 * q, (p, q))

    def change_basis(self, a: int, b: int, c: int, d: int) -> "Lattice2":
        """Same lattice, basis multiplied on the right by an integer matrix of det 1."""
        if a * d - b * c != 1:
            raise DomainError("change of basis must lie in SL(2, Z)")
        return Lattice2(
            self.g11 * a + self.g12 * c,
            self.g11 * b + self.g12 * d,
            self.g21 * a + self.g22 * c,
            self.g21 * b + self.g22 * d,
        )


@dataclass(frozen=True)
class Systole:
    length_squared: Real
    length: BoundedValue
    vector: HolonomyVector
    steps: int


def systole(X: Lattice2) -> Systole:
    """Shortest nonzero vector by Lagrange-Gauss reduction, in exact arithmetic."""
    b1 = HolonomyVector(X.g11, X.g21, (1, 0))
    b2 = HolonomyVector(X.g12, X.g22, (0, 1))

    def dot(u, v):
        return u.re * v.re + u.im * v.im

    def combo(u, v, k):
        return HolonomyVector(u.re - k * v.re, u.im - k * v.im, (u.source[0] - k * v.source[0], u.source[1] - k * v.source[1]))

    steps = 0
    if dot(b1, b1) > dot(b2, b2):
        b1, b2 = b2, b1
    while True:
        steps += 1
        mu = _round_exact(dot(b1, b2) / dot(b1, b1))
        b2 = combo(b2, b1, mu)
        if dot(b2, b2) >= dot(b1, b1):
            break
        b1, b2 = b2, b1
    n2 = dot(b1, b1)
    lo, hi = _enclose(n2).lo, _enclose(n2).hi
    length = BoundedValue(_sqrt_lower(lo), _sqrt_upper(hi))
    return Systole(n2, length, b1, steps)


def _sqrt_lower(x: Fraction, bits: int = 80) -> Fraction:
    scale = 1 << bits
    return Fraction(math.isqrt(math.floor(x * scale * scale)), scale)


def _sqrt_upper(x: Fraction, bits: int = 80) -> Fraction:
    lo = _sqrt_lower(x, bits)
    return lo if lo * lo == x else lo + Fraction(1, 1 << bits)


# -- Lagrange value from almost vertical vectors ------------------------------------

@dataclass
class LatticeLagrange:
    """Max of ``1/Area(v)`` over ``v = (p - q alpha, q)`` with ``q_min <= q <= q_max``.

    ``window_max`` encloses that maximum exactly.  At a convergent ``q`` the
    value differs from its limit by roughly ``1/q^2`` (times the square of the
    pre-periodic continuant), so ``value`` widens the maximum by the tail
    allowance ``16/q_min^2``; this is empirical, not a proof.
    ``recurrences`` counts the ``q`` in the window whose value lies within the
    allowance of the maximum; at least 2 means the window saw the best phase
    of the period more than once.
    """

    alpha: Real
    q_min: int
    q_max: int
    value: BoundedValue
    window_max: BoundedValue
    q_best: int
    p_best: int
    recurrences: int
    candidates: list = field(default_factory=list, repr=False)


def inverse_area(alpha: Real, p: int, q: int) -> Real:
    return 1 / abs(q * (q * alpha - p))


def lagrange_via_lattice(alpha, q_max: int = 100_000, q_min: int | None = None) -> LatticeLagrange:
    """Scan holonomy vectors of ``u_{-alpha}(Z^2)`` with ``|Im v| <= q_max``.

    Only ``p = round(q alpha)`` matters for each ``q``.  A float scan picks
    out the ``q`` with ``1/Area > 1.9`` (anything of interest exceeds
    ``sqrt5 - epsilon``); those are then evaluated exactly.
    """
    alpha = _exact(alpha)
    if not isinstance(alpha, QuadraticSurd):
        raise DomainError("alpha must be an irrational quadratic surd")
    if q_max < 4:
        raise DomainError("q_max must be at least 4")
    q_min = q_min if q_min is not None else math.isqrt(q_max)
    a = float(alpha)
    frac = a - math.floor(a)
    q = np.arange(1, q_max + 1, dtype=np.float64)
    x = q * frac
    dist = np.abs(x - np.rint(x))
    with np.errstate(divide="ignore"):
        inv = 1.0 / (q * dist)
    hits = np.nonzero(inv > 1.9)[0] + 1
    candidates = []
    for qq in hits.tolist():
        qq = int(qq)
        p = _round_exact(qq * alpha)
        if math.gcd(p, qq) != 1:
            continue
        candidates.append((qq, p, inverse_area(alpha, p, qq)))
    window = [c for c in candidates if c[0] >= q_min]
    if not window:
        raise DomainError("no almost vertical vectors in the window; raise q_max")
    best = _window_max(window)
    exact = _enclose(best[2])
    allowance = Fraction(16, q_min * q_min)
    recurrences = sum(1 for c in window if abs(float(c[2]) - float(best[2])) <= allowance)
    value = BoundedValue(exact.lo - allowance, exact.hi + allowance)
    return LatticeLagrange(alpha, q_min, q_max, value, exact, best[0], best[1], recurrences, candidates)


def _window_max(cands):
    best = cands[0]
    for c in cands[1:]:
        if c[2] > best[2]:
            best = c
    return best


# -- Iwasawa-type decomposition -----------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """``X = h_s g_t u_{-alpha}(Z^2)`` with ``h_s = [[1,0],[s,1]]``, ``g_t = diag(e^t, e^-t)``."""

    s: float
    t: float
    alpha: float

    def matrix(self) -> np.ndarray:
        h = np.array([[1.0, 0.0], [self.s, 1.0]])
        g = np.diag([math.exp(self.t), math.exp(-self.t)])
        u = np.array([[1.0, -self.alpha], [0.0, 1.0]])
        return h @ g @ u


def decompose(X: Lattice2) -> Decomposition:
    """Write the basis as ``h_s g_t r_theta`` and convert via
    ``r_theta = h_{tan theta} g_{log cos theta} u_{-tan theta}``.

    Needs ``g11 != 0`` (no vertical holonomy vector from ``e1``); the basis is
    replaced by its negative when ``g11 < 0``, which is the same lattice.
    """
    m = np.array([[float(X.g11), float(X.g12)], [float(X.g21), float(X.g22)]])
    if m[0, 0] == 0:
        raise DomainError("basis vector e1 maps to a vertical vector")
    if m[0, 0] < 0:
        m = -m
    t0 = math.log(math.hypot(m[0, 0], m[0, 1]))
    theta = math.atan2(-m[0, 1], m[0, 0])
    c, s_ = math.cos(theta), math.sin(theta)
    hg = m @ np.array([[c, s_], [-s_, c]])  # m r_{-theta} = h_s g_t
    s0 = hg[1, 0] / hg[0, 0]
    return Decomposition(s0 + math.exp(-2 * t0) * math.tan(theta), t0 + math.log(c), math.tan(theta))


def recompose_error(X: Lattice2) -> float:
    """Max entry difference between ``h_s g_t u_{-alpha}`` and the (sign-fixed) basis."""
    m = np.array([[float(X.g11), float(X.g12)], [float(X.g21), float(X.g22)]])
    if m[0, 0] < 0:
        m = -m
    return float(np.max(np.abs(decompose(X).matrix() - m)))
