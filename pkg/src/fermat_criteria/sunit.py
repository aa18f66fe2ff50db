"""Bounded enumeration of S-units and of solutions to lambda + mu = 1."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import GeneratorNotFound
from .ideals import SPLIT, PrimeIdeal, split_prime, valuation
from .quadfield import FieldElem, QuadField
from .units import FundamentalUnit, fundamental_unit, principal_generator

IRRELEVANT = "irrelevant"
RELEVANT = "relevant"

DEFAULT_BOUND = 10
_HALF = Fraction(1, 2)
MAX_CLASS_ORDER = 12


@dataclass(frozen=True)
class SGenerators:
    torsion: tuple[int, int]
    eps: FundamentalUnit
    # (P, pi_P, k_P) with (pi_P) = P^k_P
    pi_list: tuple[tuple[PrimeIdeal, FieldElem, int], ...]
    # rational primes added when the pi_P alone miss (q) = P P'
    extra: tuple[FieldElem, ...] = ()

    def elements(self) -> list[FieldElem]:
        """Multiplicative basis for the enumeration box.

        When q itself is a generator, pi of the second prime above q is
        dropped: pi_P pi_P' = unit * q^k, so it is redundant.
        """
        extra_q = {int(e.x) for e in self.extra}
        seen: set[int] = set()
        pis = []
        for P, pi, _ in self.pi_list:
            if P.q in extra_q and P.q in seen:
                continue
            seen.add(P.q)
            pis.append(pi)
        return [self.eps.eps] + pis + list(self.extra)


@dataclass(frozen=True)
class SUnitSolution:
    lam: FieldElem
    mu: FieldElem
    valuations: dict = field(compare=False, hash=False)

    @property
    def relevance(self) -> str:
        return classify(self)

    def key(self):
        return (self.lam.key(), self.mu.key())


@dataclass(frozen=True)
class SUnitSolutions:
    """Solutions found inside an exponent box; ``bounded`` means not certified complete."""

    field: QuadField
    S: tuple[PrimeIdeal, ...]
    solutions: tuple[SUnitSolution, ...]
    bound: int
    bounded: bool = True

    def __iter__(self) -> Iterator[SUnitSolution]:
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def pairs(self) -> set[tuple[FieldElem, FieldElem]]:
        return {(s.lam, s.mu) for s in self.solutions}


def s_generators(
    F: QuadField, S: Sequence[PrimeIdeal], height_bound: int = 10**6
) -> SGenerators:
    if not S:
        raise ValueError("S must be nonempty")
    pis = []
    for P in S:
        above = split_prime(F, P.q)
        for k in range(1, MAX_CLASS_ORDER + 1):
            res = principal_generator(
                F, {Q: (k if Q == P else 0) for Q in above}, height_bound
            )
            if res.generator is not None:
                pis.append((P, res.generator, k))
                break
            if not res.certified:
                raise GeneratorNotFound(
                    f"no generator of {P}^{k} with height <= {height_bound}"
                )
        else:
            raise GeneratorNotFound(f"{P} has order > {MAX_CLASS_ORDER} in the class group")
    extra = []
    in_s = set(S)
    for q in sorted({P.q for P in S}):
        above = split_prime(F, q)
        if (
            above[0].kind == SPLIT
            and all(Q in in_s for Q in above)
            and any(k > 1 for P, _, k in pis if P.q == q)
        ):
            extra.append(F(q))
    return SGenerators((1, -1), fundamental_unit(F), tuple(pis), tuple(extra))


def is_s_unit(F: QuadField, a: FieldElem, S: Sequence[PrimeIdeal]) -> bool:
    if a.is_zero():
        return False
    qs = {P.q for P in S}
    n = a.norm()
    num, den = abs(n.numerator), n.denominator
    for q in qs:
        while num % q == 0:
            num //= q
        while den % q == 0:
            den //= q
    if num != 1 or den != 1:
        return False
    in_s = set(S)
    for q in qs:
        for Q in split_prime(F, q):
            if Q not in in_s and valuation(Q, a) != 0:
                return False
    return True


def _valuation_record(S, lam, mu) -> dict:
    return {P: (valuation(P, lam), valuation(P, mu)) for P in S}


def make_solution(F: QuadField, lam, S: Sequence[PrimeIdeal] = ()) -> SUnitSolution:
    lam = F.coerce(lam)
    mu = 1 - lam
    return SUnitSolution(lam, mu, _valuation_record(S, lam, mu))


def solve_unit_equation(
    F: QuadField,
    S: Sequence[PrimeIdeal],
    bound: int = DEFAULT_BOUND,
    height_bound: int = 10**6,
    gens: SGenerators | None = None,
) -> SUnitSolutions:
    """All ``(lambda, 1 - lambda)`` with ``lambda = +-eps^a prod pi_P^b_P``, ``|a|, |b_P| <= bound``,
    and ``1 - lambda`` an S-unit, closed under ``(lambda, mu) -> (mu, lambda)``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    S = tuple(sorted(S, key=PrimeIdeal.sort_key))
    if gens is None:
        gens = s_generators(F, S, height_bound)
    powers = [
        [g**e for e in range(-bound, bound + 1)] for g in gens.elements()
    ]
    found: dict = {}
    one = F(1)
    for combo in _products(powers, one):
        for lam in (combo, -combo):
            if lam == one or lam.key() in found:
                continue
            mu = one - lam
            if is_s_unit(F, mu, S):
                found[lam.key()] = SUnitSolution(lam, mu, _valuation_record(S, lam, mu))
                # mu is an S-unit too, so the swapped pair is a solution even
                # when mu's exponent vector lies outside the box
                if mu.key() not in found:
                    found[mu.key()] = SUnitSolution(mu, lam, _valuation_record(S, mu, lam))
    sols = tuple(sorted(found.values(), key=SUnitSolution.key))
    return SUnitSolutions(F, S, sols, bound, True)


def _products(powers: list[list[FieldElem]], one: FieldElem) -> Iterable[FieldElem]:
    """All products picking one entry per list, sharing partial products."""
    if not powers:
        yield one
        return
    head, rest = powers[0], powers[1:]
    tails = list(_products(rest, one)) if len(rest) <= 1 else None
    for h in head:
        if tails is not None:
            for t in tails:
                yield h * t
        else:
            for t in _products(rest, one):
                yield h * t


def classify(sol: SUnitSolution) -> str:
    pair = (sol.lam, sol.mu)
    for lam, mu in ((2, -1), (-1, 2), (_HALF, _HALF)):
        if pair[0] == lam and pair[1] == mu:
            return IRRELEVANT
    return RELEVANT


def irrelevant_solutions(F: QuadField, S: Sequence[PrimeIdeal] = ()) -> list[SUnitSolution]:
    return [make_solution(F, lam, S) for lam in (2, -1, _HALF)]


def check_valuation_bound(sol: SUnitSolution, P: PrimeIdeal) -> bool:
    """max(|v_P(lambda)|, |v_P(mu)|) <= 4 v_P(2)."""
    bound = 4 * valuation(P, 2)
    return max(abs(valuation(P, sol.lam)), abs(valuation(P, sol.mu))) <= bound


def check_mod3_condition(sol: SUnitSolution, P: PrimeIdeal) -> bool:
    """The valuation bound together with v_P(lambda mu) = v_P(2) mod 3."""
    if not check_valuation_bound(sol, P):
        return False
    return (valuation(P, sol.lam * sol.mu) - valuation(P, 2)) % 3 == 0
