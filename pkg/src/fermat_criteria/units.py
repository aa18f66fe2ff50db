"""Fundamental units via continued fractions, and bounded principal-generator search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping

from .ideals import PrimeIdeal, valuation
from .quadfield import FieldElem, QuadField


@dataclass(frozen=True)
class FundamentalUnit:
    eps: FieldElem
    norm_sign: int


def _cf_states(P: int, Q: int, D: int) -> Iterator[tuple[int, int, int]]:
    """Yield ``(a_k, P_k, Q_k)`` for the expansion of ``(P + sqrt D)/Q``."""
    s = math.isqrt(D)
    while True:
        a = (P + s) // Q
        yield a, P, Q
        P = a * Q - P
        Q = (D - P * P) // Q


@lru_cache(maxsize=None)
def fundamental_unit(F: QuadField) -> FundamentalUnit:
    """Smallest unit > 1 of O_K.

    Expands sqrt(d), or (1+sqrt d)/2 when d = 1 mod 4, and tests the
    convergents ``h/k`` for a unit: ``h + k sqrt(d)`` in the first case and
    ``(h - k) + k omega`` in the second (a unit ``a + b omega > 1`` has
    ``a/b`` close to ``-omega' = omega - 1``).
    """
    d = F.d
    if F.omega_mode:
        P0, Q0 = 1, 2
    else:
        P0, Q0 = 0, 1
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    seen: set[tuple[int, int]] = set()
    repeat_at = None
    for i, (a, P, Q) in enumerate(_cf_states(P0, Q0, d)):
        if repeat_at is None and (P, Q) in seen:
            repeat_at = i
        elif repeat_at is not None and i > 2 * repeat_at + 2:
            # the minimal solution sits at the end of the first period
            raise RuntimeError(f"no unit found for d={d}")
        seen.add((P, Q))
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        cand = F.from_basis(h - k, k) if F.omega_mode else F(h, k)
        n = cand.norm()
        if abs(n) == 1:
            return FundamentalUnit(cand, int(n))
    raise AssertionError("unreachable")


def units_in_box(F: QuadField, exponent_bound: int) -> Iterator[FieldElem]:
    """Yield ``+-eps^n`` for ``|n| <= exponent_bound``, each exactly once."""
    eps = fundamental_unit(F).eps
    for n in range(-exponent_bound, exponent_bound + 1):
        u = eps**n
        yield u
        yield -u


def _generator_height_bound(F: QuadField, norm: int) -> int:
    """Bound on |Y| for a generator ``(X + Y sqrt d)/den`` of an ideal of given norm.

    Any principal ideal has a generator with ``1 <= |pi/pi'| < eps^2``; for it
    ``|y| <= (eps + 1) sqrt(N) / (2 sqrt d)``.
    """
    eps = fundamental_unit(F).eps
    den = 2 if F.omega_mode else 1
    top = den * (2 * eps.x + 2) * (math.isqrt(norm) + 1)
    return math.ceil(Fraction(top) / (2 * math.isqrt(F.d))) + 1


def _sqrt_d_convergents(d: int) -> Iterator[tuple[int, int]]:
    """Convergents ``h/k`` of sqrt(d) over two full periods."""
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    first = None
    laps = 0
    for i, (a, P, Q) in enumerate(_cf_states(0, 1, d)):
        if i == 1:
            first = (P, Q)
        elif i > 1 and (P, Q) == first:
            laps += 1
            if laps == 2:
                return
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield h, k


def _primitive_only(targets: Mapping[PrimeIdeal, int]) -> bool:
    """True when no rational integer > 1 can divide a generator."""
    by_q: dict[int, list[bool]] = {}
    for P, v in targets.items():
        by_q.setdefault(P.q, []).append(v < P.e)
    return all(any(flags) for flags in by_q.values())


def _convergent_search(F: QuadField, targets: Mapping[PrimeIdeal, int], norm: int):
    """Generators of small norm via Lagrange: if |x^2 - d y^2| < sqrt(d) with
    gcd(x, y) = 1 then x/y is a convergent of sqrt(d)."""
    halves = (1, 2) if F.omega_mode else (1,)
    for h, k in _sqrt_d_convergents(F.d):
        for den in halves:
            for x, y in ((h, k), (h, -k), (-h, k), (-h, -k)):
                pi = F(Fraction(x, den), Fraction(y, den))
                if abs(pi.norm()) != norm or not pi.is_integral():
                    continue
                if all(valuation(P, pi) == v for P, v in targets.items()):
                    return pi
    return None


@dataclass(frozen=True)
class GeneratorSearch:
    generator: FieldElem | None
    certified: bool
    scanned: int


def principal_generator(
    F: QuadField,
    targets: Mapping[PrimeIdeal, int],
    height_bound: int = 10**6,
) -> GeneratorSearch:
    """Search an integral ``pi`` with ``v_P(pi) = targets[P]`` and no other prime factors.

    ``targets`` must list every prime above each rational prime involved
    (zero entries allowed).  Small norms are settled by a convergent walk;
    otherwise the scan runs over the sqrt(d)-coordinate in increasing
    absolute value.  ``certified`` is True when the search was exhaustive, so
    a ``None`` generator proves non-principality.
    """
    norm = 1
    for P, v in targets.items():
        norm *= P.norm**v
    den = 2 if F.omega_mode else 1
    d = F.d
    if (norm * den * den) ** 2 < d:
        pi = _convergent_search(F, targets, norm)
        if pi is not None:
            return GeneratorSearch(pi, True, 0)
        if _primitive_only(targets):
            return GeneratorSearch(None, True, 0)
    limit = _generator_height_bound(F, norm)
    stop = min(limit, height_bound)
    rhs = norm * den * den
    for Y in range(stop + 1):
        dy2 = d * Y * Y
        for s in (-1, 1):
            t = dy2 + s * rhs
            if t < 0:
                continue
            X = math.isqrt(t)
            if X * X != t:
                continue
            for x in (X, -X) if X else (0,):
                pi = F(Fraction(x, den), Fraction(Y, den))
                if not pi.is_integral():
                    continue
                if all(valuation(P, pi) == v for P, v in targets.items()):
                    return GeneratorSearch(pi, True, Y)
    return GeneratorSearch(None, stop >= limit, stop)
