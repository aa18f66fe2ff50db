"""Square-free sieving and relative densities of the quadratic local criterion."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, NamedTuple

import numpy as np
from sympy import factorint

from .criteria import quadratic_local_criterion
from .errors import FermatCriteriaError, HypothesisViolated, LimitTooLarge
from .ideals import s_k
from .quadfield import make_field
from .sunit import IRRELEVANT, solve_unit_equation

DEFAULT_SIEVE_CAP = 10**8
SIX_OVER_PI2 = 6 / math.pi**2

# residue classes appearing in the local criterion
LOCAL_CLASSES = ((3, 8), (5, 8), (6, 16), (10, 16), (2, 16), (14, 16))


def sieve_cap() -> int:
    return int(os.environ.get("FERMAT_CRITERIA_SIEVE_CAP", DEFAULT_SIEVE_CAP))


class Sieve(NamedTuple):
    mask: np.ndarray  # mask[d] is True iff d >= 2 is square-free
    count: int


def squarefree_sieve(x: int, cap: int | None = None) -> Sieve:
    if x < 2:
        raise ValueError("x must be >= 2")
    cap = sieve_cap() if cap is None else cap
    if x > cap:
        raise LimitTooLarge(f"x={x} exceeds the sieve cap {cap}")
    mask = np.ones(x + 1, dtype=bool)
    mask[:2] = False
    for k in range(2, math.isqrt(x) + 1):
        mask[k * k :: k * k] = False
    return Sieve(mask, int(mask.sum()))


def smallest_prime_factors(x: int) -> np.ndarray:
    spf = np.zeros(x + 1, dtype=np.int64)
    for p in range(2, x + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def _prime_factors(n: int, spf: np.ndarray) -> list[int]:
    out = []
    while n > 1:
        p = int(spf[n])
        out.append(p)
        while n % p == 0:
            n //= p
    return out


def _totient(n: int) -> int:
    out = n
    for q in factorint(n):
        out = out // q * (q - 1)
    return out


def class_prediction(x: float, r: int, m: int) -> float:
    """Asymptotic count of square-free d <= x with d = r mod m (N read as m)."""
    s = math.gcd(r, m)
    denom = s * _totient(m // s) * m
    for q in factorint(m):
        denom *= 1 - Fraction(1, q * q)
    return float(Fraction(_totient(m)) / denom) * SIX_OVER_PI2 * x


@dataclass(frozen=True)
class ClassCount:
    r: int
    m: int
    x: int
    count: int
    prediction: float


def count_class(x: int, r: int, m: int, sieve: Sieve | None = None) -> ClassCount:
    s = math.gcd(r, m)
    if factorint(s) and max(factorint(s).values()) > 1:
        raise HypothesisViolated(f"gcd(r, m) = {s} is not square-free")
    sieve = sieve if sieve is not None else squarefree_sieve(x)
    start = r % m
    count = int(sieve.mask[start : x + 1 : m].sum())
    return ClassCount(r, m, x, count, class_prediction(x, r, m))


CONGRUENCE_ONLY = "congruence_only"
WITH_SOLVER = "congruence_plus_bounded_solver"


@dataclass
class DensityReport:
    x: int
    mode: str
    total_squarefree: int
    class_counts: dict
    criterion_count: int
    delta_rel_estimate: Fraction
    asymptotic_prediction: float
    running: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    solver: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "x": self.x,
            "mode": self.mode,
            "total_squarefree": self.total_squarefree,
            "class_counts": {f"{r} mod {m}": c for (r, m), c in self.class_counts.items()},
            "criterion_count": self.criterion_count,
            "delta_rel_estimate": f"{self.delta_rel_estimate.numerator}/{self.delta_rel_estimate.denominator}",
            "delta_rel_decimal": f"{float(self.delta_rel_estimate):.6f}",
            "asymptotic_prediction": f"{self.asymptotic_prediction:.3f}",
            "running": [[xi, f"{float(v):.6f}"] for xi, v in self.running],
            "solver": self.solver,
        }


def local_case_array(x: int, sieve: Sieve) -> np.ndarray:
    """``case[d]`` = first matching local case for square-free d (0 for none)."""
    case = np.zeros(x + 1, dtype=np.int8)
    idx = np.nonzero(sieve.mask)[0]
    r8, r16 = idx % 8, idx % 16
    first = np.zeros(len(idx), dtype=np.int8)
    first[r8 == 3] = 1
    first[r8 == 5] = 2
    first[(r16 == 6) | (r16 == 10)] = 3
    need = idx[(r16 == 2) | (r16 == 14)]
    if len(need):
        spf = smallest_prime_factors(x)
        extra = {}
        for d in need.tolist():
            extra[d] = quadratic_local_criterion(d, _prime_factors(d, spf)).case or 0
        for i, d in enumerate(idx.tolist()):
            if d in extra:
                first[i] = extra[d]
    case[idx] = first
    return case


def density_scan(
    x: int,
    mode: str = CONGRUENCE_ONLY,
    bound: int = 8,
    d_cap: int = 200,
    checkpoints: int = 20,
    rows: bool = True,
) -> DensityReport:
    sieve = squarefree_sieve(x)
    case = local_case_array(x, sieve)
    hit = case > 0
    class_counts = {
        (r, m): int(sieve.mask[r % m :: m].sum()) for (r, m) in LOCAL_CLASSES
    }
    cum_sf = np.cumsum(sieve.mask)
    cum_hit = np.cumsum(hit)
    total, crit = int(cum_sf[x]), int(cum_hit[x])
    running = []
    for xi in sorted({max(2, x * i // checkpoints) for i in range(1, checkpoints + 1)}):
        running.append((xi, Fraction(int(cum_hit[xi]), int(cum_sf[xi]))))
    status = {}
    solver_summary = {}
    if mode == WITH_SOLVER:
        status = solver_status_map(min(x, d_cap), bound, sieve)
        solver_summary = {
            "bound": bound,
            "d_cap": d_cap,
            "only_irrelevant": sum(1 for v in status.values() if v == "only_irrelevant_found"),
            "relevant_found": sorted(d for d, v in status.items() if v == "relevant_found"),
        }
    elif mode != CONGRUENCE_ONLY:
        raise ValueError(f"unknown mode {mode!r}")
    out_rows = []
    if rows:
        for d in range(2, x + 1):
            sf = bool(sieve.mask[d])
            out_rows.append(
                (d, int(sf), int(case[d]) if sf else 0, status.get(d, "not_run"))
            )
    return DensityReport(
        x, mode, total, class_counts, crit, Fraction(crit, total),
        SIX_OVER_PI2 * x, running, out_rows, solver_summary,
    )


def solver_status_map(d_cap: int, bound: int, sieve: Sieve | None = None) -> dict[int, str]:
    out = {}
    for d in range(2, d_cap + 1):
        if sieve is not None and not sieve.mask[d]:
            continue
        if sieve is None:
            try:
                make_field(d)
            except FermatCriteriaError:
                continue
        F = make_field(d)
        try:
            sols = solve_unit_equation(F, s_k(F), bound)
        except FermatCriteriaError:
            out[d] = "generator_not_found"
            continue
        rel = any(s.relevance != IRRELEVANT for s in sols)
        out[d] = "relevant_found" if rel else "only_irrelevant_found"
    return out


CSV_HEADER = ("d", "squarefree", "case", "solver_status")


def write_csv(report: DensityReport, fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(report.rows)
