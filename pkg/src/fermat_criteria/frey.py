"""Frey curve y^2 = x(x - A a^p)(x + B b^p): invariants, reduction data, lambda-invariants."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import factorint, isprime

from .errors import (
    DegenerateLambda,
    NonPrincipalGcd,
    NotASolution,
    NotPrime,
    TrivialSolution,
)
from .ideals import PrimeIdeal, s_k, s_k_prime, split_prime, valuation
from .quadfield import FieldElem, QuadField
from .units import principal_generator

GOOD = "good"
MULTIPLICATIVE = "multiplicative"
POT_MULTIPLICATIVE = "potentially_multiplicative"
ADDITIVE_POT_GOOD = "additive_potentially_good"


def _coerce_all(vals, F: QuadField | None):
    if F is None:
        for v in vals:
            if isinstance(v, FieldElem):
                F = v.field
                break
    if F is None:
        return [Fraction(v) for v in vals], None
    return [F.coerce(v) for v in vals], F


@dataclass(frozen=True)
class FreyData:
    A: object
    B: object
    C: object
    a: object
    b: object
    c: object
    p: int
    c4: object
    delta: object
    j: object
    field: QuadField | None = None

    @property
    def coefficients(self):
        return (self.A, self.B, self.C)

    @property
    def triple(self):
        return (self.a, self.b, self.c)


def frey_invariants(A, B, C, a, b, c, p: int, field: QuadField | None = None) -> FreyData:
    if p < 3 or not isprime(p):
        raise NotPrime(f"exponent {p} must be an odd prime")
    (A, B, C, a, b, c), F = _coerce_all((A, B, C, a, b, c), field)
    ap, bp, cp = a**p, b**p, c**p
    if A * ap + B * bp + C * cp != 0:
        raise NotASolution("A a^p + B b^p + C c^p != 0")
    if a * b * c == 0:
        raise TrivialSolution("abc = 0")
    forms = (
        16 * (A * A * ap * ap - B * C * bp * cp),
        16 * (B * B * bp * bp - A * C * ap * cp),
        16 * (C * C * cp * cp - A * B * ap * bp),
    )
    if not forms[0] == forms[1] == forms[2]:
        raise AssertionError("c4 forms disagree on a genuine solution")
    c4 = forms[0]
    abc_p = (a * b * c) ** (2 * p)
    delta = 16 * A * A * B * B * C * C * abc_p
    j = c4**3 / delta
    return FreyData(A, B, C, a, b, c, p, c4, delta, j, F)


def c4_forms(fd: FreyData) -> tuple:
    A, B, C = fd.coefficients
    ap, bp, cp = (x**fd.p for x in fd.triple)
    return (
        16 * (A * A * ap * ap - B * C * bp * cp),
        16 * (B * B * bp * bp - A * C * ap * cp),
        16 * (C * C * cp * cp - A * B * ap * bp),
    )


# --- membership in W_K --------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def common_prime_divisors(F: QuadField, elems: Sequence[FieldElem]) -> list[PrimeIdeal]:
    """Primes P with v_P(x) >= 1 for every nonzero integral x in ``elems``."""
    nonzero = [x for x in elems if not x.is_zero()]
    g = 0
    for x in nonzero:
        g = math.gcd(g, int(abs(x.norm())))
    if g <= 1:
        return []
    out = []
    for q in sorted(factorint(g)):
        for P in split_prime(F, q):
            if all(valuation(P, x) >= 1 for x in nonzero):
                out.append(P)
    return out


def is_in_w_k(F: QuadField, A, B, C, a, b, c, p: int) -> Verdict:
    A, B, C, a, b, c = (F.coerce(v) for v in (A, B, C, a, b, c))
    if A * a**p + B * b**p + C * c**p != 0:
        return Verdict(False, "not a solution")
    if (a * b * c).is_zero():
        return Verdict(False, "trivial")
    if not all(x.is_integral() for x in (a, b, c)):
        return Verdict(False, "not integral")
    common = common_prime_divisors(F, [a, b, c])
    if common:
        return Verdict(False, f"not primitive: {common[0]} divides a, b, c")
    abc = a * b * c
    for P in s_k(F):
        if valuation(P, abc) < 1:
            return Verdict(False, f"{P} does not divide abc")
    return Verdict(True, "ok")


DIVIDES_EXACTLY_ONE = "divides_exactly_one"
VIOLATION = "violation"
PRECONDITION_FAILED = "precondition_failed"


@dataclass(frozen=True)
class DivisorCheck:
    status: str
    valuations: tuple[int, int, int]
    detail: str = ""


def exact_divisor_check(F: QuadField, A, B, C, a, b, c, p: int, P: PrimeIdeal) -> DivisorCheck:
    """P divides exactly one of a, b, c for W_K solutions with p > max v_P(A, B, C)."""
    A, B, C, a, b, c = (F.coerce(v) for v in (A, B, C, a, b, c))
    vals = tuple(valuation(P, x) if not x.is_zero() else math.inf for x in (a, b, c))
    vcoef = max(valuation(P, x) for x in (A, B, C))
    if p <= vcoef:
        return DivisorCheck(PRECONDITION_FAILED, vals, f"p={p} <= max v_P(A,B,C)={vcoef}")
    positive = sum(1 for v in vals if v > 0)
    if positive == 1:
        return DivisorCheck(DIVIDES_EXACTLY_ONE, vals)
    return DivisorCheck(VIOLATION, vals, f"{positive} of a, b, c are divisible by {P}")


# --- reduction types ------------------------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    prime: PrimeIdeal
    v_delta: int
    v_c4: int | None
    v_j: int | None
    type: str
    p_divides_v_delta: bool
    three_divides_v_delta: bool
    conductor_exponent_bound: int
    minimal_asserted: bool
    p_divides_v_j: bool | None = None
    potmult_threshold: Fraction | None = None
    potmult_threshold_met: bool | None = None
    notes: tuple[str, ...] = ()


def _v(P: PrimeIdeal, x) -> int | None:
    x = P.field.coerce(x)
    return None if x.is_zero() else valuation(P, x)


def potmult_threshold(P: PrimeIdeal, A, B, C) -> Fraction:
    """max{v(ABC), |8v(2)+v(AB/C^2)|/2, |8v(2)+v(BC/A^2)|/2, |8v(2)+v(AC/B^2)|/2}."""
    vA, vB, vC = (valuation(P, x) for x in (A, B, C))
    v2 = valuation(P, 2)
    return max(
        Fraction(vA + vB + vC),
        Fraction(abs(8 * v2 + vA + vB - 2 * vC), 2),
        Fraction(abs(8 * v2 + vB + vC - 2 * vA), 2),
        Fraction(abs(8 * v2 + vA + vC - 2 * vB), 2),
    )


def excluded_primes(fd: FreyData, F: QuadField) -> set[PrimeIdeal]:
    """S'_K together with primes dividing gcd(a, b, c) or a denominator of a, b, c."""
    out = set(s_k_prime(F, *fd.coefficients))
    a, b, c = (F.coerce(x) for x in fd.triple)
    den = math.lcm(*(x.denominator() for x in (a, b, c)))
    if den > 1:
        for q in factorint(den):
            out.update(split_prime(F, q))
    integral = [x * den for x in (a, b, c)]
    out.update(common_prime_divisors(F, integral))
    return out


def classify_reduction(
    fd: FreyData, q: PrimeIdeal, excluded: set[PrimeIdeal] | None = None
) -> ReductionReport:
    """``excluded`` may carry a precomputed ``excluded_primes(fd, F)``."""
    F = q.field
    if fd.field is not None and fd.field != F:
        raise ValueError("prime and Frey data live in different fields")
    p = fd.p
    v_delta = valuation(q, fd.delta)
    v_c4 = _v(q, fd.c4)
    v_j = None if v_c4 is None else 3 * v_c4 - v_delta
    in_sk = q.q == 2
    notes = []
    if excluded is None:
        excluded = excluded_primes(fd, F)
    if q not in excluded:
        if v_delta == 0:
            kind = GOOD
            cond = 0
        else:
            if v_c4 != 0 or v_delta % p != 0:
                notes.append("semi-stability surrogate violated")
            kind = MULTIPLICATIVE
            cond = 1
        return ReductionReport(
            q, v_delta, v_c4, v_j, kind, v_delta % p == 0, v_delta % 3 == 0,
            cond, True, None if v_j is None else v_j % p == 0, notes=tuple(notes),
        )
    # S'_K or gcd support: raw valuations and the conductor bound only
    kind = POT_MULTIPLICATIVE if (v_j is not None and v_j < 0) else ADDITIVE_POT_GOOD
    if in_sk:
        cond = 2 + 6 * valuation(q, 2)
        thr = potmult_threshold(q, *fd.coefficients)
        met = p > thr
        if not met:
            notes.append(f"p={p} does not exceed the exponent threshold {thr}; no classification claim")
    else:
        cond = 2 + 3 * valuation(q, 3)
        thr, met = None, None
    return ReductionReport(
        q, v_delta, v_c4, v_j, kind, v_delta % p == 0, v_delta % 3 == 0, cond, False,
        None if v_j is None else v_j % p == 0, thr, met, tuple(notes),
    )


# --- lambda-invariants ------------------------------------------------------------


def _exact(x):
    return Fraction(x) if isinstance(x, int) else x


def _check_lambda(lam):
    lam = _exact(lam)
    if lam == 0 or lam == 1:
        raise DegenerateLambda(f"lambda = {lam}")
    return lam


def lambda_orbit(lam) -> frozenset:
    lam = _check_lambda(lam)
    one = 1
    return frozenset(
        {
            lam,
            one / lam,
            one - lam,
            one / (one - lam),
            lam / (lam - one),
            (lam - one) / lam,
        }
    )


def j_from_lambda(lam):
    lam = _check_lambda(lam)
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (1 - lam) ** 2)


def j_from_lambda_mu(lam, mu):
    lm = _exact(lam) * _exact(mu)
    if lm == 0:
        raise DegenerateLambda("lambda * mu = 0")
    return 256 * (1 - lm) ** 3 / (lm * lm)


@dataclass(frozen=True)
class JFiber:
    """``2^8 (m^2 - m + 1)^3 - j0 m^2 (m - 1)^2`` as coefficients, lowest degree first."""

    j0: object
    coefficients: tuple

    def __call__(self, m):
        acc = 0
        for coef in reversed(self.coefficients):
            acc = acc * m + coef
        return acc

    @property
    def degree(self) -> int:
        return max(i for i, c in enumerate(self.coefficients) if c != 0)


def _polymul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for k, y in enumerate(g):
            out[i + k] = out[i + k] + x * y
    return out


def j_collision_degree(j0) -> JFiber:
    j0 = _exact(j0)
    quad = [1, -1, 1]
    cube = _polymul(_polymul(quad, quad), quad)
    rhs = _polymul([0, 0, 1], _polymul([-1, 1], [-1, 1]))
    coeffs = [256 * c for c in cube]
    for i, c in enumerate(rhs):
        coeffs[i] = coeffs[i] - j0 * c
    return JFiber(j0, tuple(coeffs))


# --- scaling ------------------------------------------------------------------------


def scale_to_integral(F: QuadField, a, b, c, height_bound: int = 10**6):
    """Rescale a nontrivial triple to integral coordinates with trivial gcd ideal.

    Returns ``(a', b', c', xi)`` with ``(a', b', c') = xi (a, b, c)``.
    """
    a, b, c = (F.coerce(v) for v in (a, b, c))
    elems = [a, b, c]
    if all(x.is_zero() for x in elems):
        raise TrivialSolution("all of a, b, c are zero")
    xi = F(math.lcm(*(x.denominator() for x in elems)))
    elems = [x * xi for x in elems]
    content = 0
    for x in elems:
        u, w = x.basis_coords()
        content = math.gcd(content, int(u), int(w))
    elems = [x / content for x in elems]
    xi = xi / content
    common = common_prime_divisors(F, elems)
    if not common:
        return (*elems, xi)
    qs = sorted({P.q for P in common})
    targets = {}
    for q in qs:
        for P in split_prime(F, q):
            targets[P] = min(valuation(P, x) for x in elems if not x.is_zero())
    res = principal_generator(F, targets, height_bound)
    if res.generator is None:
        state = "nonprincipal" if res.certified else "no generator within height bound"
        raise NonPrincipalGcd(f"gcd ideal {dict((str(k), v) for k, v in targets.items())}: {state}")
    g = res.generator
    return (*(x / g for x in elems), xi / g)


# --- random generation ------------------------------------------------------------


def random_integral(F: QuadField, rng: random.Random, height: int = 6, nonzero: bool = True) -> FieldElem:
    while True:
        x = F.from_basis(rng.randint(-height, height), rng.randint(-height, height))
        if not (nonzero and x.is_zero()):
            return x


def generate_solution(
    F: QuadField,
    rng: random.Random,
    p: int,
    height: int = 6,
    a=None,
    b=None,
    A=None,
    B=None,
) -> FreyData:
    """Random genuine solution: pick A, B, a, b, set c = 1 and C = -(A a^p + B b^p)."""
    while True:
        A_ = A if A is not None else random_integral(F, rng, height)
        B_ = B if B is not None else random_integral(F, rng, height)
        a_ = a if a is not None else random_integral(F, rng, height)
        b_ = b if b is not None else random_integral(F, rng, height)
        C_ = -(F.coerce(A_) * F.coerce(a_) ** p + F.coerce(B_) * F.coerce(b_) ** p)
        if not C_.is_zero():
            return frey_invariants(A_, B_, C_, a_, b_, 1, p, field=F)
