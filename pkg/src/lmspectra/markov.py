"""Markov triples ``x^2 + y^2 + z^2 = 3xyz`` via the Vieta-involution tree."""

from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass, field

from .errors import DomainError
from .surd import QuadraticSurd

ZAGIER_C = 0.18071704711507


@dataclass(frozen=True, order=True)
class MarkovTriple:
    """A solution in normalized order ``x <= y <= z``."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        if not 0 < self.x <= self.y <= self.z:
            raise DomainError(f"triple {self.as_tuple()} is not positive and sorted")
        if not is_markov(self.x, self.y, self.z):
            raise DomainError(f"{self.as_tuple()} does not satisfy x^2+y^2+z^2 = 3xyz")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class SpectrumPoint:
    """``k = sqrt(9 - 4/m^2)``, stored as ``sqrt(9m^2 - 4)/m``."""

    m: int
    value: QuadraticSurd = field(repr=False)

    @classmethod
    def of(cls, m: int) -> "SpectrumPoint":
        return cls(m, QuadraticSurd.sqrt(9 * m * m - 4) / m)

    @property
    def discriminant(self) -> int:
        return 9 * self.m * self.m - 4

    @property
    def text(self) -> str:
        return f"sqrt({self.discriminant})/{self.m}"

    def __float__(self):
        return float(self.value)


def is_markov(x: int, y: int, z: int) -> bool:
    return x * x + y * y + z * z == 3 * x * y * z


def vieta_step_tracked(t: MarkovTriple, i: int) -> tuple[MarkovTriple, int]:
    """Apply the involution on coordinate ``i`` (1-based).

    Returns the normalized triple and the 1-based position the new coordinate
    ended up in, so that applying the involution there undoes the step.
    """
    if i not in (1, 2, 3):
        raise DomainError("coordinate index must be 1, 2 or 3")
    vals = list(t.as_tuple())
    others = [v for k, v in enumerate(vals) if k != i - 1]
    new = 3 * others[0] * others[1] - vals[i - 1]
    vals[i - 1] = new
    order = sorted(range(3), key=lambda k: (vals[k], k != i - 1))
    ordered = [vals[k] for k in order]
    return MarkovTriple(*ordered), order.index(i - 1) + 1


def vieta_step(t: MarkovTriple, i: int) -> MarkovTriple:
    """Replace coordinate ``i`` by ``3 * (product of the others) - itself``."""
    return vieta_step_tracked(t, i)[0]


ROOT = MarkovTriple(1, 1, 1)


def enumerate_tree(bound: int) -> list[MarkovTriple]:
    """All normalized triples with ``z <= bound``, found breadth-first from ``(1,1,1)``."""
    if bound < 1:
        raise DomainError("bound must be at least 1")
    seen = {ROOT}
    queue = deque([ROOT])
    while queue:
        t = queue.popleft()
        for i in (1, 2, 3):
            child = vieta_step(t, i)
            # moving away from the root only increases z, so larger z can be dropped
            if child.z <= bound and child not in seen:
                seen.add(child)
                queue.append(child)
    return sorted(seen, key=lambda t: (t.z, t.y, t.x))


def markov_numbers(bound: int) -> list[int]:
    """Distinct Markov numbers up to ``bound``."""
    return sorted({t.z for t in enumerate_tree(bound)})


def duplicate_markov_numbers(bound: int) -> dict[int, list[MarkovTriple]]:
    """Markov numbers that are the maximum of more than one triple (none are known)."""
    by_z: dict[int, list[MarkovTriple]] = {}
    for t in enumerate_tree(bound):
        by_z.setdefault(t.z, []).append(t)
    return {z: ts for z, ts in by_z.items() if len(ts) > 1}


def spectrum_points(bound: int) -> list[SpectrumPoint]:
    """``k_n`` for every Markov number up to ``bound``, increasing (all below 3)."""
    return [SpectrumPoint.of(m) for m in markov_numbers(bound)]


@dataclass
class MarkovCount:
    x: int
    count: int
    count_with_multiplicity: int
    fitted_c: float
    fitted_c_plain: float
    grid: list = field(default_factory=list)
    residuals: list = field(default_factory=list)


def count_markov(x: int, grid_points: int = 60, grid_start: float = 1e3) -> MarkovCount:
    """``M(x)`` and least-squares fits of ``M(y) ~ c (log 3y)^2`` on a log-spaced grid.

    ``fitted_c_plain`` uses ``(log y)^2`` instead.  ``count_with_multiplicity``
    counts triples rather than distinct maxima.
    """
    if x < 1:
        raise DomainError("x must be at least 1")
    triples = enumerate_tree(x)
    zs = sorted(t.z for t in triples)
    distinct = sorted(set(zs))
    lo = math.log(min(grid_start, x))
    hi = math.log(x)
    if grid_points < 2 or hi <= lo:
        grid = [float(x)]
    else:
        grid = [math.exp(lo + (hi - lo) * k / (grid_points - 1)) for k in range(grid_points)]
    counts = [bisect.bisect_right(distinct, y) for y in grid]

    def fit(feature):
        num = sum(m * feature(y) for m, y in zip(counts, grid))
        den = sum(feature(y) ** 2 for y in grid)
        return num / den

    c = fit(lambda y: math.log(3 * y) ** 2)
    c_plain = fit(lambda y: math.log(y) ** 2) if hi > 0 else float("nan")
    residuals = [m - c * math.log(3 * y) ** 2 for m, y in zip(counts, grid)]
    return MarkovCount(x, len(distinct), len(zs), c, c_plain, grid, residuals)
