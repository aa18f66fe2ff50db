"""Hypothesis checkers for the asymptotic Fermat criteria over K.

Verdicts are ``applies``, ``fails`` or ``undecided_bounded``.  The last one
means every listed S-unit solution passed, but the list came from a bounded
search and so does not certify the hypothesis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .errors import InvalidProfile, OutOfScope, ZeroCoefficient
from .ideals import PrimeIdeal, s_k, u_k, valuation
from .quadfield import FieldElem, QuadField, make_field
from .sunit import (
    SUnitSolution,
    check_valuation_bound,
    check_mod3_condition,
)

APPLIES = "applies"
FAILS = "fails"
UNDECIDED = "undecided_bounded"

ES_ASSUMPTION = "ES: Eichler-Shimura conjecture assumed for K (declared, not computed)"
QUANTIFIER_NOTE = (
    "per-solution witnesses and the coefficient witness are chosen independently"
)


@dataclass
class CriterionReport:
    field_desc: str
    coefficients: tuple
    verdict: str
    rule: str
    witness: list = field(default_factory=list)
    failing: list = field(default_factory=list)
    assumptions: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    notes: list = field(default_factory=list)


# --- coefficient hypotheses -----------------------------------------------------------


@dataclass(frozen=True)
class CoefficientConditions:
    prime: PrimeIdeal
    sign_sums: tuple
    sign_ok: bool
    sign_waived: bool
    valuation_ok: bool
    congruence_ok: bool

    @property
    def holds(self) -> bool:
        return (self.sign_ok or self.sign_waived) and self.valuation_ok and self.congruence_ok


def coefficient_conditions(
    F: QuadField, A, B, C, P: PrimeIdeal, rational_waiver: bool = True
) -> CoefficientConditions:
    """A +- B +- C != 0, max{v(A), v(BC)} <= 4 v(2), v(ABC) = 0 or 2 v(2) mod 3.

    With ``rational_waiver`` the sign condition is dropped when A, B, C are
    rational integers.
    """
    A, B, C = (F.coerce(v) for v in (A, B, C))
    if A.is_zero() or B.is_zero() or C.is_zero():
        raise ZeroCoefficient("A, B, C must be nonzero")
    sums = tuple(A + s * B + t * C for s in (1, -1) for t in (1, -1))
    sign_ok = all(not x.is_zero() for x in sums)
    rational = all(x.is_rational() and x.x.denominator == 1 for x in (A, B, C))
    v2 = valuation(P, 2)
    vA, vBC, vABC = valuation(P, A), valuation(P, B * C), valuation(P, A * B * C)
    return CoefficientConditions(
        P,
        sums,
        sign_ok,
        rational_waiver and rational and not sign_ok,
        max(vA, vBC) <= 4 * v2,
        vABC % 3 in (0, (2 * v2) % 3),
    )


def is_two_power_times_unit(F: QuadField, x: FieldElem) -> bool:
    """True when x is integral and only primes above 2 divide it."""
    if not x.is_integral() or x.is_zero():
        return False
    n = abs(x.norm().numerator)
    while n % 2 == 0:
        n //= 2
    return n == 1


def _sol_witness(sol: SUnitSolution, P: PrimeIdeal, cond: str) -> dict:
    return {
        "lambda": sol.lam,
        "mu": sol.mu,
        "prime": P.label,
        "v_lambda": valuation(P, sol.lam),
        "v_mu": valuation(P, sol.mu),
        "v_2": valuation(P, 2),
        "condition": cond,
    }


def _is_bounded(solutions) -> bool:
    return bool(getattr(solutions, "bounded", False))


# --- quadratic local criterion --------------------------------------------------------


@dataclass(frozen=True)
class LocalMatch:
    d: int
    case: int | None
    witness_prime: int | None
    all_matches: tuple


def quadratic_local_criterion(d: int, factors: Iterable[int] | None = None) -> LocalMatch:
    """Match d against the five residue/divisor cases; first match wins."""
    if factors is None:
        factors = factorint(d)
    primes = sorted(factors)
    matches = []
    if d % 8 == 3:
        matches.append((1, None))
    if d % 8 == 5:
        matches.append((2, None))
    if d % 16 in (6, 10):
        matches.append((3, None))
    if d % 16 == 2:
        w = next((q for q in primes if q % 8 in (5, 7)), None)
        if w is not None:
            matches.append((4, w))
    if d % 16 == 14:
        w = next((q for q in primes if q % 8 in (3, 5)), None)
        if w is not None:
            matches.append((5, w))
    if not matches:
        return LocalMatch(d, None, None, ())
    case, w = matches[0]
    return LocalMatch(d, case, w, tuple(m[0] for m in matches))


# --- main criteria -------------------------------------------------------------------


def w_k_check(
    F: QuadField, A, B, C, solutions: Sequence[SUnitSolution], local_upgrade: bool = True
) -> CriterionReport:
    """No asymptotic solution in W_K when every S'_K-unit solution meets the valuation bound at some P | 2."""
    coeffs = tuple(F.coerce(v) for v in (A, B, C))
    S = s_k(F)
    rep = CriterionReport(f"d={F.d}", coeffs, APPLIES, "W_K criterion")
    for sol in solutions:
        P = next((P for P in S if check_valuation_bound(sol, P)), None)
        if P is None:
            rep.failing.append(_sol_witness(sol, S[0], "valuation bound fails at every P | 2"))
        else:
            rep.witness.append(_sol_witness(sol, P, "valuation bound"))
    if not list(solutions):
        rep.flags.append("vacuous: empty solution list")
    if rep.failing:
        rep.verdict = FAILS
        return rep
    if _is_bounded(solutions):
        rep.verdict = UNDECIDED
        rep.flags.append(f"bounded search, exponent box {solutions.bound}")
        if local_upgrade:
            _upgrade_w_k(F, coeffs, rep)
    return rep


def _upgrade_w_k(F: QuadField, coeffs, rep: CriterionReport) -> None:
    m = quadratic_local_criterion(F.d)
    if m.case is None:
        rep.notes.append("no quadratic local case matches d")
        return
    if not all(is_two_power_times_unit(F, x) for x in coeffs):
        rep.notes.append(f"local case {m.case} matches but A, B, C are not 2^r u^s, so S'_K != S_K")
        return
    rep.verdict = APPLIES
    rep.rule = f"W_K criterion via local case {m.case}"


def k3_check(
    F: QuadField,
    A,
    B,
    C,
    solutions: Sequence[SUnitSolution],
    rational_waiver: bool = True,
    local_upgrade: bool = True,
) -> CriterionReport:
    """No asymptotic solution in K^3 under (ES), the mod-3 condition per solution and coefficient conditions."""
    coeffs = tuple(F.coerce(v) for v in (A, B, C))
    U = u_k(F)
    rep = CriterionReport(f"d={F.d}", coeffs, APPLIES, "K^3 criterion")
    rep.assumptions.append(ES_ASSUMPTION)
    rep.flags.append(QUANTIFIER_NOTE)
    if not U:
        rep.verdict = FAILS
        rep.notes.append("U_K is empty")
        return rep
    for sol in solutions:
        P = next((P for P in U if check_mod3_condition(sol, P)), None)
        if P is None:
            rep.failing.append(_sol_witness(sol, U[0], "mod-3 condition fails at every P in U_K"))
        else:
            rep.witness.append(_sol_witness(sol, P, "mod-3 condition"))
    if not list(solutions):
        rep.flags.append("vacuous: empty solution list")
    coef_witness = None
    for P in U:
        cc = coefficient_conditions(F, *coeffs, P, rational_waiver)
        if cc.holds:
            coef_witness = cc
            break
    if coef_witness is None:
        cc = coefficient_conditions(F, *coeffs, U[0], rational_waiver)
        rep.failing.append(_coef_record(cc))
    else:
        rep.witness.append(_coef_record(coef_witness))
    if rep.failing:
        rep.verdict = FAILS
        return rep
    if _is_bounded(solutions):
        rep.verdict = UNDECIDED
        rep.flags.append(f"bounded search, exponent box {solutions.bound}")
        if local_upgrade and F.d > 6:
            k = quadratic_criterion_K(F.d, *coeffs)
            if k.verdict == APPLIES:
                rep.verdict = APPLIES
                rep.rule = "K^3 criterion via " + k.rule
            else:
                rep.notes.extend(k.notes)
    return rep


def _coef_record(cc: CoefficientConditions) -> dict:
    return {
        "prime": cc.prime.label,
        "condition": "coefficients",
        "sign_sums": list(cc.sign_sums),
        "sign_ok": cc.sign_ok,
        "sign_waived": cc.sign_waived,
        "valuation_ok": cc.valuation_ok,
        "congruence_ok": cc.congruence_ok,
    }


def quadratic_criterion_K(d: int, A, B, C, rational_waiver: bool = True) -> CriterionReport:
    """Local criterion for K^3 over Q(sqrt d), d > 6, assuming (ES)."""
    if d <= 6:
        raise OutOfScope(f"d={d}: the criterion is stated for d > 6 only")
    F = make_field(d)
    coeffs = tuple(F.coerce(v) for v in (A, B, C))
    rep = CriterionReport(f"d={d}", coeffs, FAILS, "quadratic K^3 criterion")
    rep.assumptions.append(ES_ASSUMPTION)
    m = quadratic_local_criterion(d)
    if m.case is None:
        rep.notes.append("no quadratic local case matches d")
        return rep
    if not all(is_two_power_times_unit(F, x) for x in coeffs):
        rep.notes.append("A, B, C are not all of the form 2^r u^s")
        return rep
    for P in s_k(F):
        cc = coefficient_conditions(F, *coeffs, P, rational_waiver)
        if cc.holds:
            rep.verdict = APPLIES
            rep.rule = f"quadratic K^3 criterion (local case {m.case})"
            rep.witness.append(_coef_record(cc))
            return rep
        rep.failing.append(_coef_record(cc))
    rep.notes.append("coefficient conditions fail at every P | 2")
    return rep


# --- odd degree ------------------------------------------------------------------------

INERT = "inert"
TOTALLY_RAMIFIED = "totally_ramified"
TOTALLY_SPLIT = "totally_split"


@dataclass(frozen=True)
class SplittingProfile:
    """Declared splitting data for an odd-degree totally real field."""

    n: int
    two: str
    three: str | None = None
    l: int | None = None
    l_splitting: str | None = None
    target: str = "W_K"
    coefficients_ok: bool | None = None


def odd_degree_criterion(profile: SplittingProfile) -> CriterionReport:
    n, l = profile.n, profile.l
    if n % 2 == 0 or n < 1:
        raise InvalidProfile(f"degree {n} is not odd")
    if l is not None and (l <= 5 or not isprime(l)):
        raise InvalidProfile(f"l={l} must be a prime > 5")
    if profile.target not in ("W_K", "K3"):
        raise InvalidProfile(f"unknown target {profile.target!r}")
    rep = CriterionReport(f"degree {n}", (), FAILS, "")
    l_ok = l is not None and math.gcd(n, l - 1) == 1 and profile.l_splitting == TOTALLY_RAMIFIED
    three_split = profile.three == TOTALLY_SPLIT
    if profile.target == "W_K":
        two_ok = profile.two in (INERT, TOTALLY_RAMIFIED)
        clauses = [(1, two_ok and l_ok), (2, two_ok and three_split)]
        name = "odd-degree W_K criterion"
    else:
        two_ok = profile.two == INERT
        clauses = [(1, two_ok and l_ok), (2, two_ok and three_split and n % 3 != 0)]
        name = "odd-degree K^3 criterion"
        rep.notes.append("(ES) holds since the degree is odd")
        if not profile.coefficients_ok:
            rep.rule = name
            rep.notes.append("coefficient conditions not satisfied")
            return rep
    for k, ok in clauses:
        if ok:
            rep.verdict = APPLIES
            rep.rule = f"{name} clause {k}"
            rep.witness.append({"clause": k, "l": l, "two": profile.two, "three": profile.three})
            return rep
    rep.rule = name
    if l is not None and math.gcd(n, l - 1) != 1:
        rep.notes.append(f"gcd(n, l-1) = {math.gcd(n, l - 1)} != 1")
    return rep

