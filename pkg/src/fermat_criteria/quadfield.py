"""Exact arithmetic in real quadratic fields Q(sqrt d).

Elements are stored as ``x + y*sqrt(d)`` with :class:`fractions.Fraction`
coordinates, whatever the integral basis of the ring of integers is.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

from .errors import DivisionByZero, NotSquareFree, OutOfRange, ParseError


def squarefree_part_check(n: int) -> int | None:
    """Return a prime ``p`` with ``p*p | n`` or ``None`` if ``n`` is square-free."""
    n = abs(n)
    if n % 4 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return p
        if n % p == 0:
            n //= p
        p += 2
    return None


@dataclass(frozen=True)
class QuadField:
    d: int

    @property
    def disc(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def omega_mode(self) -> bool:
        """True when the integral basis is {1, (1+sqrt d)/2}."""
        return self.d % 4 == 1

    def __call__(self, x=0, y=0) -> FieldElem:
        return FieldElem(Fraction(x), Fraction(y), self)

    def __str__(self) -> str:
        return f"Q(sqrt({self.d}))"

    @cached_property
    def sqrt_d(self) -> FieldElem:
        return self(0, 1)

    @cached_property
    def omega(self) -> FieldElem:
        """Second integral basis element: sqrt(d) or (1+sqrt(d))/2."""
        if self.omega_mode:
            return self(Fraction(1, 2), Fraction(1, 2))
        return self.sqrt_d

    def basis_str(self) -> str:
        if self.omega_mode:
            return f"{{1, (1+sqrt({self.d}))/2}}"
        return f"{{1, sqrt({self.d})}}"

    def from_basis(self, a: int, b: int) -> FieldElem:
        """The element ``a + b*omega``."""
        return self(a) + self.omega * b

    def coerce(self, v) -> FieldElem:
        if isinstance(v, FieldElem):
            if v.field != self:
                raise ValueError(f"element of {v.field} used in {self}")
            return v
        if isinstance(v, (int, Fraction, Rational)):
            return self(v)
        if isinstance(v, str):
            return parse_elem(v, self)
        raise TypeError(f"cannot coerce {v!r} into {self}")


def make_field(d: int) -> QuadField:
    if d < 2:
        raise OutOfRange(f"d must be >= 2, got {d}")
    p = squarefree_part_check(d)
    if p is not None:
        raise NotSquareFree(f"{d} is divisible by {p}^2")
    return QuadField(int(d))


def _frac(v) -> Fraction | None:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    return None


@dataclass(frozen=True, eq=False)
class FieldElem:
    x: Fraction
    y: Fraction
    field: QuadField

    # coercion helpers -------------------------------------------------

    def _lift(self, other) -> FieldElem | None:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError(f"mixing {self.field} and {other.field}")
            return other
        r = _frac(other)
        if r is None:
            return None
        return FieldElem(r, Fraction(0), self.field)

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.x + o.x, self.y + o.y, self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.x, -self.y, self.field)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.x - o.x, self.y - o.y, self.field)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self.field.d
        return FieldElem(
            self.x * o.x + d * self.y * o.y,
            self.x * o.y + self.y * o.x,
            self.field,
        )

    __rmul__ = __mul__

    def inv(self) -> FieldElem:
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero")
        return FieldElem(self.x / n, -self.y / n, self.field)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inv()
        n = abs(n)
        result = FieldElem(Fraction(1), Fraction(0), self.field)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # invariants -------------------------------------------------------

    def conj(self) -> FieldElem:
        return FieldElem(self.x, -self.y, self.field)

    def norm(self) -> Fraction:
        return self.x * self.x - self.field.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_integral(self) -> bool:
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def is_rational(self) -> bool:
        return self.y == 0

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def basis_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates ``(a, b)`` with ``self = a + b*omega``."""
        if self.field.omega_mode:
            return self.x - self.y, 2 * self.y
        return self.x, self.y

    def denominator(self) -> int:
        """Least positive integer ``D`` such that ``D*self`` is integral."""
        a, b = self.basis_coords()
        return math.lcm(a.denominator, b.denominator)

    # ordering under the embedding sqrt(d) > 0 -------------------------

    def sign(self) -> int:
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # opposite signs: compare x^2 with d*y^2
        lhs, rhs = self.x * self.x, self.field.d * self.y * self.y
        if lhs == rhs:
            return 0
        return sx if lhs > rhs else sy

    def __lt__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(self.x) + float(self.y) * math.sqrt(self.field.d)

    # equality / hashing -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.x == other.x and self.y == other.y
        r = _frac(other)
        if r is None:
            return NotImplemented
        return self.y == 0 and self.x == r

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.field.d))

    def __bool__(self):
        return not self.is_zero()

    def key(self) -> tuple[Fraction, Fraction]:
        """Deterministic sort key (coordinate tuple)."""
        return (self.x, self.y)

    def __repr__(self) -> str:
        return f"FieldElem({format_elem(self)!r}, d={self.field.d})"

    def __str__(self) -> str:
        return format_elem(self)


def format_rational(r: Fraction) -> str:
    return str(Fraction(r))


def format_elem(a: FieldElem) -> str:
    """Render in the exact grammar ``INT | RAT | (RAT)+(RAT)*sqrt(d)``."""
    if a.y == 0:
        return format_rational(a.x)
    return f"({format_rational(a.x)})+({format_rational(a.y)})*sqrt({a.field.d})"


_RAT = r"[+-]?\d+(?:/\d+)?"
_SURD_RE = re.compile(rf"^\(({_RAT})\)\+\(({_RAT})\)\*sqrt\((\d+)\)$")
_RAT_RE = re.compile(rf"^{_RAT}$")


def parse_rational(text: str) -> Fraction:
    s = re.sub(r"\s+", "", text)
    if not _RAT_RE.match(s):
        raise ParseError(f"not a rational: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator in {text!r}") from exc


def parse_elem(text: str, field: QuadField) -> FieldElem:
    """Parse ``INT | RAT | (RAT)+(RAT)*sqrt(d)``; whitespace is ignored."""
    s = re.sub(r"\s+", "", text)
    if _RAT_RE.match(s):
        return field(parse_rational(s))
    m = _SURD_RE.match(s)
    if not m:
        raise ParseError(f"cannot parse field element {text!r}")
    if int(m.group(3)) != field.d:
        raise ParseError(f"sqrt({m.group(3)}) does not belong to {field}")
    return field(parse_rational(m.group(1)), parse_rational(m.group(2)))
