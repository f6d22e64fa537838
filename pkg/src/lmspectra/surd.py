"""Exact arithmetic in real quadratic fields.

A :class:`QuadraticSurd` is ``a + b*sqrt(d)`` with rational ``a, b`` and a
positive non-square integer ``d``.  Arithmetic is closed inside one field;
comparisons work across fields (``sqrt(12)`` against ``(6+sqrt(21))/3``)
by reducing the sign question to a single-field one after one squaring.

:func:`parse_real` reads the textual forms used throughout the package,
e.g. ``"(1+sqrt(5))/2"``, ``"355/113"``, ``"sqrt(12)"`` or ``"3.5"``.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, "QuadraticSurd"]

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % k for k in range(2, int(p ** 0.5) + 1))]


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _strip_squares(d: int) -> tuple[int, int]:
    """Return ``(k, e)`` with ``d = k*k*e``, removing square factors of small primes."""
    k = 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > d:
            break
        while d % pp == 0:
            d //= pp
            k *= p
    return k, d


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadraticSurd:
    """The real number ``a + b*sqrt(d)``; immutable and hashable."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d <= 0 or _is_square(d):
            raise ValueError(f"d={d} must be a positive non-square integer")
        k, d = _strip_squares(d)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b) * k)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticSurd is immutable")

    # -- construction helpers -------------------------------------------
    @classmethod
    def sqrt(cls, n) -> Number:
        """``sqrt(n)`` for a non-negative rational ``n``; rational when ``n`` is a square."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("square root of a negative number")
        num, den = n.numerator, n.denominator
        # sqrt(num/den) = sqrt(num*den)/den
        m = num * den
        if _is_square(m):
            return Fraction(math.isqrt(m), den)
        return cls(0, Fraction(1, den), m)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise ValueError(f"cannot mix sqrt({self.d}) and sqrt({other.d}) in field arithmetic")
            return other.a, other.b
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    @staticmethod
    def make(a, b, d: int) -> Number:
        """Like the constructor but collapses to ``Fraction`` when ``b == 0``."""
        b = Fraction(b)
        if b == 0:
            return Fraction(a)
        return QuadraticSurd(a, b, d)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticSurd.make(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticSurd.make(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticSurd.make(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadraticSurd.make(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d*b^2`` (product with the conjugate)."""
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.a, -self.b, self.d)

    def inverse(self) -> "QuadraticSurd":
        n = self.norm()  # never zero: sqrt(d) is irrational
        return QuadraticSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticSurd):
            return self * other.inverse()
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[0] == 0:
            raise ZeroDivisionError("division by zero")
        return QuadraticSurd(self.a / c[0], self.b / c[0], self.d)

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self.inverse() * c[0]

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result: Number = Fraction(1)
        base: Number = self
        while k:
            if k & 1:
                result = base * result
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order ----------------------------------------------------------
    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __eq__(self, other):
        if isinstance(other, (QuadraticSurd, int, Rational)):
            return compare(self, other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        if isinstance(other, (QuadraticSurd, int, Rational)):
            return compare(self, other) < 0
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (QuadraticSurd, int, Rational)):
            return compare(self, other) <= 0
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (QuadraticSurd, int, Rational)):
            return compare(self, other) > 0
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (QuadraticSurd, int, Rational)):
            return compare(self, other) >= 0
        return NotImplemented

    # -- rounding and enclosures ------------------------------------------
    def _integer_form(self) -> tuple[int, int, int, int]:
        """``(n, s, m, den)`` with value ``(n + s*sqrt(m)) / den``, ``den > 0``."""
        den = math.lcm(self.a.denominator, self.b.denominator)
        n = int(self.a * den)
        bl = self.b * den
        m = int(bl * bl) * self.d
        return n, _sign(bl), m, den

    def __floor__(self) -> int:
        n, s, m, den = self._integer_form()
        r = math.isqrt(m)
        if s > 0:
            return (n + r) // den
        return (n - r - 1) // den

    def floor(self) -> int:
        return self.__floor__()

    def __ceil__(self) -> int:
        return self.__floor__() + 1

    def __round__(self, ndigits=None):
        if ndigits is not None:
            return round(float(self), ndigits)
        return math.floor(self + Fraction(1, 2))

    def enclose(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational ``(lo, hi)`` with ``lo < self < hi`` and ``hi - lo <= |b| * 2**-bits``."""
        n, s, m, den = self._integer_form()
        scale = 1 << bits
        r = math.isqrt(m * scale * scale)
        lo_root, hi_root = Fraction(r, scale), Fraction(r + 1, scale)
        if s < 0:
            lo_root, hi_root = -hi_root, -lo_root
        return (n + lo_root) / den, (n + hi_root) / den

    def __float__(self) -> float:
        try:
            return float(self.a) + float(self.b) * math.sqrt(self.d)
        except OverflowError:
            lo, hi = self.enclose(64)
            return float((lo + hi) / 2)

    # -- text -------------------------------------------------------------
    def __repr__(self):
        return f"QuadraticSurd({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        den = math.lcm(self.a.denominator, self.b.denominator)
        n, bb = int(self.a * den), int(self.b * den)
        rad = f"sqrt({self.d})" if abs(bb) == 1 else f"{abs(bb)}*sqrt({self.d})"
        sign = "-" if bb < 0 else "+"
        if n == 0:
            body = rad if bb > 0 else "-" + rad
        else:
            body = f"{n}{sign}{rad}"
        if den == 1:
            return body
        return f"({body})/{den}"


def compare(x: Number, y: Number) -> int:
    """Exact sign of ``x - y`` for rationals and surds, possibly in different fields."""
    if not isinstance(x, QuadraticSurd) and not isinstance(y, QuadraticSurd):
        return _sign(Fraction(x) - Fraction(y))
    if not isinstance(y, QuadraticSurd):
        return (x - y).sign() if isinstance(x - y, QuadraticSurd) else _sign(x - y)
    if not isinstance(x, QuadraticSurd):
        return -compare(y, x)
    if x.d == y.d:
        diff = x - y
        return diff.sign() if isinstance(diff, QuadraticSurd) else _sign(diff)
    # x - y = u - w with u = (x.a - y.a) + x.b sqrt(x.d) and w = y.b sqrt(y.d)
    u = QuadraticSurd.make(x.a - y.a, x.b, x.d)
    su = u.sign() if isinstance(u, QuadraticSurd) else _sign(u)
    sw = _sign(y.b)
    if sw == 0:
        return su
    if su == 0:
        return -sw
    if su != sw:
        return su
    # same sign s: sign(u - w) = s * sign(u^2 - w^2), and w^2 is rational
    diff = u * u - y.b * y.b * y.d
    sd = diff.sign() if isinstance(diff, QuadraticSurd) else _sign(diff)
    return su * sd


def to_fraction_bounds(x: Number, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational bounds for a rational or surd (degenerate for rationals)."""
    if isinstance(x, QuadraticSurd):
        return x.enclose(bits)
    x = Fraction(x)
    return x, x


def floor_exact(x: Number) -> int:
    return math.floor(x)


# -- parsing -----------------------------------------------------------------

class _Evaluator(ast.NodeVisitor):
    def __init__(self, source: str):
        self.source = source

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ValueError(f"unsupported literal {node.value!r}")
        if isinstance(node.value, int):
            return Fraction(node.value)
        # read decimals from the source text so no binary rounding happens
        text = ast.get_source_segment(self.source, node)
        return Fraction(text)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ValueError("unsupported unary operator")

    def visit_BinOp(self, node):
        left, right = self.visit(node.left), self.visit(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        if isinstance(node.op, ast.Pow) and isinstance(right, Fraction) and right.denominator == 1:
            return left ** int(right)
        raise ValueError("unsupported binary operator")

    def visit_Call(self, node):
        if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1):
            raise ValueError("only sqrt(...) calls are supported")
        arg = self.visit(node.args[0])
        if isinstance(arg, QuadraticSurd):
            raise ValueError("nested radicals are not supported")
        return QuadraticSurd.sqrt(arg)

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {type(node).__name__}")


def parse_real(text: str) -> Number:
    """Parse ``"p/q"``, decimals, or surd expressions like ``"(a+b*sqrt(d))/c"``.

    Decimal literals are read as the exact rational they spell (``"3.5"`` is
    ``7/2``); no binary floating point is involved.
    """
    text = text.strip()
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc
    return _Evaluator(text).visit(tree)


def format_real(x: Number) -> str:
    """Serialize a rational as ``"p/q"`` and a surd as ``"(a+b*sqrt(d))/c"``."""
    if isinstance(x, QuadraticSurd):
        return str(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
