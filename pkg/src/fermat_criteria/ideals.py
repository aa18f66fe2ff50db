"""Splitting of rational primes in O_K and P-adic valuations on K^*."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from sympy import factorint, isprime

from .errors import NotPrime, ZeroArgument, ZeroCoefficient
from .quadfield import FieldElem, QuadField

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


def vq(n, q: int) -> int:
    """q-adic valuation of a nonzero rational number."""
    r = Fraction(n)
    if r == 0:
        raise ZeroArgument("valuation of zero")
    num, den = abs(r.numerator), r.denominator
    v = 0
    while num % q == 0:
        num //= q
        v += 1
    while den % q == 0:
        den //= q
        v -= 1
    return v


def sqrt_mod_prime(a: int, q: int) -> int | None:
    """Smallest square root of ``a`` modulo an odd prime ``q`` (Tonelli-Shanks)."""
    a %= q
    if a == 0:
        return 0
    if pow(a, (q - 1) // 2, q) != 1:
        return None
    if q % 4 == 3:
        r = pow(a, (q + 1) // 4, q)
        return min(r, q - r)
    s, t = 0, q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    z = 2
    while pow(z, (q - 1) // 2, q) != q - 1:
        z += 1
    m, c, u, r = s, pow(z, t, q), pow(a, t, q), pow(a, (t + 1) // 2, q)
    while u != 1:
        i, w = 0, u
        while w != 1:
            w = w * w % q
            i += 1
        b = pow(c, 1 << (m - i - 1), q)
        m, c = i, b * b % q
        u, r = u * c % q, r * b % q
    return min(r, q - r)


def hensel_lift(b: int, c: int, r: int, q: int, k: int) -> int:
    """Lift a simple root ``r`` of ``x^2 + b x + c`` mod q to a root mod q^k."""
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        mod = q**prec
        fr = (r * r + b * r + c) % mod
        dfr = (2 * r + b) % mod
        r = (r - fr * pow(dfr, -1, mod)) % mod
    return r % q**k


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of O_K above ``q``, named by a root of the chart polynomial.

    The chart generator ``theta`` is sqrt(d), except for q = 2 with
    d = 1 mod 4 where it is (1+sqrt d)/2.  ``root`` is the residue ``r`` with
    ``P = (q, theta - r)``; it is ``None`` for inert primes.
    """

    field: QuadField
    q: int
    kind: str
    root: int | None = None

    @property
    def e(self) -> int:
        return 2 if self.kind == RAMIFIED else 1

    @property
    def f(self) -> int:
        return 2 if self.kind == INERT else 1

    @property
    def omega_chart(self) -> bool:
        return self.q == 2 and self.field.omega_mode

    def chart_poly(self) -> tuple[int, int]:
        """``(b, c)`` for the monic chart polynomial ``x^2 + b x + c``."""
        if self.omega_chart:
            return -1, (1 - self.field.d) // 4
        return 0, -self.field.d

    def chart_coords(self, a: FieldElem) -> tuple[Fraction, Fraction]:
        if self.omega_chart:
            return a.basis_coords()
        return a.x, a.y

    @property
    def norm(self) -> int:
        return self.q**self.f

    @property
    def label(self) -> str:
        if self.kind == INERT:
            return f"({self.q})"
        theta = f"(1+sqrt({self.field.d}))/2" if self.omega_chart else f"sqrt({self.field.d})"
        if self.root == 0:
            return f"({self.q}, {theta})"
        return f"({self.q}, {theta}-{self.root})"

    def __str__(self) -> str:
        return self.label

    def sort_key(self) -> tuple[int, int]:
        return (self.q, -1 if self.root is None else self.root)


def split_prime(F: QuadField, q: int) -> list[PrimeIdeal]:
    if not isprime(q):
        raise NotPrime(f"{q} is not prime")
    d = F.d
    if q == 2:
        if d % 4 == 1:
            if d % 8 == 1:
                return [PrimeIdeal(F, 2, SPLIT, 0), PrimeIdeal(F, 2, SPLIT, 1)]
            return [PrimeIdeal(F, 2, INERT)]
        return [PrimeIdeal(F, 2, RAMIFIED, d % 2)]
    if d % q == 0:
        return [PrimeIdeal(F, q, RAMIFIED, 0)]
    r = sqrt_mod_prime(d, q)
    if r is None:
        return [PrimeIdeal(F, q, INERT)]
    return [PrimeIdeal(F, q, SPLIT, r), PrimeIdeal(F, q, SPLIT, q - r)]


def valuation(P: PrimeIdeal, a) -> int:
    a = P.field.coerce(a)
    if a.is_zero():
        raise ZeroArgument("valuation of zero")
    if P.kind == INERT:
        return vq(a.norm(), P.q) // 2
    if P.kind == RAMIFIED:
        return vq(a.norm(), P.q)
    return _split_valuation(P, a)


def _split_valuation(P: PrimeIdeal, a: FieldElem) -> int:
    q = P.q
    u, w = P.chart_coords(a)
    den = u.denominator * w.denominator
    A, B = int(u * den), int(w * den)
    shift = -vq(den, q)
    t = min(vq_int(A, q), vq_int(B, q))
    A, B = A // q**t, B // q**t
    shift += t
    if B % q == 0:
        # A is then a q-adic unit, so the primitive part is a P-unit
        return shift
    beta = P.field.from_basis(A, B) if P.omega_chart else P.field(A, B)
    n = vq(beta.norm(), q)
    if n == 0:
        return shift
    b, c = P.chart_poly()
    k = n + 1
    r = hensel_lift(b, c, P.root, q, k)
    return shift + min(vq_int((A + B * r) % q**k, q), k)


def vq_int(n: int, q: int) -> int:
    """Like :func:`vq` but maps 0 to a large sentinel instead of raising."""
    if n == 0:
        return 1 << 30
    return vq(n, q)


def primes_above(F: QuadField, qs: Iterable[int]) -> list[PrimeIdeal]:
    out = []
    for q in qs:
        out.extend(split_prime(F, q))
    return out


def s_k(F: QuadField) -> list[PrimeIdeal]:
    """Primes of O_K above 2."""
    return split_prime(F, 2)


def u_k(F: QuadField) -> list[PrimeIdeal]:
    """Primes above 2 whose valuation of 2 is prime to 3."""
    return [P for P in s_k(F) if valuation(P, 2) % 3 != 0]


def s_k_prime(F: QuadField, A, B, C) -> list[PrimeIdeal]:
    """Primes dividing 2ABC."""
    A, B, C = (F.coerce(v) for v in (A, B, C))
    if A.is_zero() or B.is_zero() or C.is_zero():
        raise ZeroCoefficient("A, B, C must be nonzero")
    abc = A * B * C
    out = list(s_k(F))
    n = abs(abc.norm())
    qs = sorted(q for q in factorint(n.numerator) if q != 2)
    for q in qs:
        out.extend(P for P in split_prime(F, q) if valuation(P, abc) > 0)
    return out
