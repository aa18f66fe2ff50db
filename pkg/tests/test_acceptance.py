"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import json
import math
import random
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path

import pytest
from sympy import primerange

sys.path.insert(0, str(Path(__file__).parent))

from fermat_criteria.cli import main as cli_main  # noqa: E402
from fermat_criteria.density import count_class, density_scan, squarefree_sieve  # noqa: E402
from fermat_criteria.frey import (  # noqa: E402
    c4_forms,
    classify_reduction,
    excluded_primes,
    frey_invariants,
    generate_solution,
    is_in_w_k,
    j_from_lambda,
    j_from_lambda_mu,
    lambda_orbit,
    potmult_threshold,
    random_integral,
)
from fermat_criteria.errors import FermatCriteriaError  # noqa: E402
from fermat_criteria.ideals import s_k, split_prime, valuation  # noqa: E402
from fermat_criteria.quadfield import make_field  # noqa: E402
from fermat_criteria.sunit import (  # noqa: E402
    check_mod3_condition,
    check_valuation_bound,
    irrelevant_solutions,
)
from fermat_criteria.units import fundamental_unit  # noqa: E402

from oracles import (  # noqa: E402
    even_norm_classes,
    minpoly_mod2_splitting,
    pell_fundamental_unit,
    squarefree_upto,
)

SEED = 20261015
FIELDS = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 33, 41]


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# --- criteria -----------------------------------------------------------------------


def sunit_reproduction():
    want = {("2", "-1"), ("-1", "2"), ("1/2", "1/2")}
    bad = []
    for d in (3, 5, 11, 13, 19, 29, 35, 37):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli_main(["sunit", "--d", str(d), "--bound", "10", "--json"])
        data = json.loads(buf.getvalue())
        got = {(s["lambda"], s["mu"]) for s in data["solutions"]}
        if code != 0 or got != want:
            extra = sorted(got - want)
            bad.append(f"d={d}: {len(got)} solutions, e.g. {extra[:1]}")
    return not bad, "; ".join(bad) or "exact match for all 8 fields"


def irrelevant_conditions():
    count = 0
    for d in squarefree_upto(100):
        F = make_field(d)
        for P in s_k(F):
            v2 = valuation(P, 2)
            for s in irrelevant_solutions(F, s_k(F)):
                count += 1
                if not check_valuation_bound(s, P) or not check_mod3_condition(s, P):
                    return False, f"d={d} {P} ({s.lam}, {s.mu})"
                if valuation(P, s.lam * s.mu) not in (v2, -2 * v2):
                    return False, f"d={d} {P}: v(lambda mu) not in {{v(2), -2v(2)}}"
    return True, f"{count} (solution, prime) checks"


def frey_invariants_check():
    fd = frey_invariants(1, 1, 2, 1, 1, -1, 3)
    if (fd.c4, fd.delta, fd.j) != (48, 64, 1728):
        return False, f"example gave {(fd.c4, fd.delta, fd.j)}"
    rng = random.Random(SEED)
    for i in range(500):
        F = make_field(rng.choice(FIELDS))
        sol = generate_solution(F, rng, rng.choice([3, 5, 7]), height=5)
        f1, f2, f3 = c4_forms(sol)
        if not (f1 == f2 == f3):
            return False, f"c4 forms disagree on sample {i}"
    return True, "example exact; 500 random solutions agree"


def lambda_orbit_check():
    rng = random.Random(SEED + 1)
    n = 0
    while n < 1000:
        if n % 2:
            F = make_field(rng.choice(FIELDS))
            lam = F(Fraction(rng.randint(-99, 99), rng.randint(1, 30)),
                    Fraction(rng.randint(-99, 99), rng.randint(1, 30)))
        else:
            lam = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        if lam == 0 or lam == 1:
            continue
        n += 1
        j = j_from_lambda(lam)
        if any(j_from_lambda(x) != j for x in lambda_orbit(lam)):
            return False, f"orbit of {lam} not constant"
        if j_from_lambda_mu(lam, 1 - lam) != j:
            return False, f"two j formulas differ at {lam}"
    return True, "1000 random lambda (rational and quadratic)"


def semistability_surrogate():
    rng = random.Random(SEED + 2)
    primes = list(primerange(2, 101))
    checked = violations = 0
    for _ in range(500):
        F = make_field(rng.choice(FIELDS))
        fd = generate_solution(F, rng, rng.choice([3, 5, 7, 11]), height=4)
        excluded = excluded_primes(fd, F)
        for q in primes:
            for P in split_prime(F, q):
                if P in excluded:
                    continue
                r = classify_reduction(fd, P, excluded)
                checked += 1
                if r.v_delta > 0 and (r.v_c4 != 0 or r.v_delta % fd.p != 0):
                    violations += 1
    return violations == 0, f"{violations} violations over {checked} prime checks"


def _w_k_instance(F, rng):
    """Random W_K solution with c = 1 and p above the exponent threshold at every P | 2."""
    S = s_k(F)
    while True:
        A = random_integral(F, rng, 3)
        B = random_integral(F, rng, 3)
        even = 2 * random_integral(F, rng, 3)
        other = random_integral(F, rng, 3)
        a, b = (even, other) if rng.random() < 0.5 else (other, even)
        p = rng.choice([3, 5, 7, 11, 13, 17, 19, 23])
        C = -(A * a**p + B * b**p)
        if C.is_zero():
            continue
        if not all(p > potmult_threshold(P, A, B, C) for P in S):
            continue
        if not is_in_w_k(F, A, B, C, a, b, 1, p):
            continue
        return frey_invariants(A, B, C, a, b, 1, p, field=F)


def potmult_surrogate():
    rng = random.Random(SEED + 3)
    n_w = n_id = 0
    bad = []
    for i in range(300):
        F = make_field(FIELDS[i % len(FIELDS)])
        fd = _w_k_instance(F, rng)
        S = set(s_k(F))  # P | 2 is always excluded; no need to factor the rest
        for P in S:
            n_w += 1
            r = classify_reduction(fd, P, S)
            if not (r.v_j < 0 and r.v_j % fd.p != 0):
                bad.append(f"d={F.d} p={fd.p} A={fd.A} v_j={r.v_j}")
    for i in range(300):
        F = make_field(FIELDS[i % len(FIELDS)])
        fd = generate_solution(F, rng, rng.choice([3, 5, 7]), height=4)
        A, B, C = fd.coefficients
        for P in s_k(F):
            if valuation(P, fd.a * fd.b * fd.c) != 0:
                continue
            n_id += 1
            if valuation(P, fd.delta) != 4 * valuation(P, 2) + 2 * valuation(P, A * B * C):
                bad.append(f"identity fails d={F.d} {P}")
    detail = f"{len(bad)} violations ({n_w} W_K prime checks, {n_id} identity checks)"
    if bad:
        detail += "; first: " + bad[0]
    return not bad, detail


def unit_oracle():
    bad = []
    ds = squarefree_upto(200)
    for d in ds:
        x, y, sign = pell_fundamental_unit(d)
        u = fundamental_unit(make_field(d))
        if (u.eps.x, u.eps.y, u.norm_sign) != (x, y, sign):
            bad.append(d)
    return not bad, f"{len(ds)} fields; mismatches {bad}"


def splitting_oracle():
    rule = {1: "split", 5: "inert"}
    ds = squarefree_upto(10**4)
    for d in ds:
        kind = split_prime(make_field(d), 2)[0].kind
        want = rule.get(d % 8, "ramified")
        cross = {1: "inert", 2: "ramified", 3: "split"}[even_norm_classes(d)]
        if not (kind == want == cross == minpoly_mod2_splitting(d)):
            return False, f"d={d}: got {kind}, rule {want}, oracle {cross}"
    return True, f"{len(ds)} fields agree with rule and both oracles"


def density_check():
    s = squarefree_sieve(10**6)
    dens = s.count / 10**6
    ok1 = abs(dens - 6 / math.pi**2) < 0.001
    cc = count_class(10**5, 3, 8)
    rel = abs(cc.count - cc.prediction) / cc.prediction
    ok2 = rel < 0.01
    e1 = density_scan(10**5, rows=False).delta_rel_estimate
    e2 = density_scan(2 * 10**5, rows=False).delta_rel_estimate
    ok3 = abs(float(e1) - float(e2)) < 0.01
    detail = (
        f"density {dens:.6f} vs {6 / math.pi**2:.6f}; class 3 mod 8: {cc.count} vs "
        f"{cc.prediction:.1f} ({rel:.4%}); union {float(e1):.5f} -> {float(e2):.5f}"
    )
    return ok1 and ok2 and ok3, detail


CRITERIA = [
    ("S-unit reproduction", sunit_reproduction, 60),
    ("valuation conditions on irrelevant solutions", irrelevant_conditions, None),
    ("Frey invariants", frey_invariants_check, 5),
    ("lambda-orbit / j invariance", lambda_orbit_check, 5),
    ("semi-stability surrogate", semistability_surrogate, None),
    ("potentially multiplicative surrogate", potmult_surrogate, None),
    ("unit oracle", unit_oracle, 30),
    ("splitting oracle", splitting_oracle, None),
    ("density", density_check, 60),
]


def evaluate(name, fn, limit):
    try:
        ok, detail, elapsed = _timed(fn)
    except FermatCriteriaError as exc:
        ok, detail, elapsed = False, f"error {type(exc).__name__}: {exc}", 0.0
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f"; runtime {elapsed:.1f}s exceeds {limit}s"
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail} [{elapsed:.2f}s]"
    return ok, line


@pytest.mark.parametrize("name, fn, limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(name, fn, limit, acceptance_log):
    ok, line = evaluate(name, fn, limit)
    acceptance_log.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
