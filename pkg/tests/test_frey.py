from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fermat_criteria.errors import (
    DegenerateLambda,
    NotASolution,
    NotPrime,
    TrivialSolution,
)
from fermat_criteria.frey import (
    ADDITIVE_POT_GOOD,
    DIVIDES_EXACTLY_ONE,
    GOOD,
    PRECONDITION_FAILED,
    VIOLATION,
    c4_forms,
    classify_reduction,
    exact_divisor_check,
    frey_invariants,
    generate_solution,
    is_in_w_k,
    j_collision_degree,
    j_from_lambda,
    j_from_lambda_mu,
    lambda_orbit,
    potmult_threshold,
    scale_to_integral,
)
from fermat_criteria.ideals import s_k, split_prime, valuation
from fermat_criteria.quadfield import make_field

from oracles import frey_oracle

F5 = make_field(5)
H = Fraction(1, 2)


@pytest.mark.parametrize(
    "args, c4, delta, j",
    [
        ((1, 1, 2, 1, 1, -1, 3), 48, 64, 1728),
        ((1, 2, 3, 1, 1, -1, 5), 112, 576, Fraction(21952, 9)),
        ((1, -4, -4, 2, 1, 1, 3), None, 2**18, 1728),
    ],
)
def test_frey_invariants_examples(args, c4, delta, j):
    fd = frey_invariants(*args)
    oc4, odelta, oj = frey_oracle(*args)
    assert (fd.c4, fd.delta, fd.j) == (oc4, odelta, oj)
    assert fd.delta == delta and fd.j == j
    if c4 is not None:
        assert fd.c4 == c4


def test_frey_errors():
    with pytest.raises(NotASolution):
        frey_invariants(1, 1, 1, 1, 1, 1, 3)
    with pytest.raises(TrivialSolution):
        frey_invariants(1, 1, 1, 0, 1, -1, 3)
    with pytest.raises(NotPrime):
        frey_invariants(1, 1, 2, 1, 1, -1, 9)


def test_frey_over_field_matches_oracle():
    rng = random.Random(11)
    for d in (2, 3, 5, 17):
        F = make_field(d)
        for _ in range(20):
            fd = generate_solution(F, rng, rng.choice([3, 5, 7]), height=4)
            oc4, odelta, oj = frey_oracle(*fd.coefficients, *fd.triple, fd.p)
            assert (fd.c4, fd.delta, fd.j) == (oc4, odelta, oj)
            assert fd.c4**3 - fd.j * fd.delta == 0
            f1, f2, f3 = c4_forms(fd)
            assert f1 == f2 == f3


def test_is_in_w_k_examples():
    assert is_in_w_k(F5, 1, -4, -4, 2, 1, 1, 3)
    v = is_in_w_k(F5, 1, -4, -4, 0, 1, -1, 3)
    assert not v and v.reason == "trivial"
    # (4, 2, 2) solves 1*64 - 4*8 - 4*8 = 0 but 2 divides all three
    v = is_in_w_k(F5, 1, -4, -4, 4, 2, 2, 3)
    assert not v and v.reason.startswith("not primitive")
    v = is_in_w_k(F5, 1, -4, -4, 2, 2, 2, 3)
    assert not v and v.reason == "not a solution"
    v = is_in_w_k(F5, 1, 1, -2, 1, 1, 1, 3)
    assert not v and "does not divide abc" in v.reason


def test_exact_divisor_check():
    (P,) = s_k(F5)
    r = exact_divisor_check(F5, 1, -4, -4, 2, 1, 1, 3, P)
    assert r.status == DIVIDES_EXACTLY_ONE and r.valuations == (1, 0, 0)
    # p = 3 <= v_P(C) = 3
    r = exact_divisor_check(F5, 1, 1, -16, 2, 2, 1, 3, P)
    assert r.status == PRECONDITION_FAILED
    r = exact_divisor_check(F5, 1, -4, -4, 4, 2, 2, 3, P)
    assert r.status == VIOLATION


def test_classify_reduction_examples():
    fd = frey_invariants(1, 1, 2, 1, 1, -1, 3, field=F5)
    (Q3,) = split_prime(F5, 3)
    r = classify_reduction(fd, Q3)
    assert r.type == GOOD and r.v_delta == 0 and r.minimal_asserted
    F2 = make_field(2)
    fd2 = frey_invariants(1, 2, 3, 1, 1, -1, 5, field=F2)
    for Q in split_prime(F2, 7):
        assert classify_reduction(fd2, Q).type == GOOD


def test_w_k_example_below_threshold():
    fd = frey_invariants(1, -4, -4, 2, 1, 1, 3, field=F5)
    (P,) = s_k(F5)
    r = classify_reduction(fd, P)
    assert r.v_j == 6 and r.type == ADDITIVE_POT_GOOD
    assert r.conductor_exponent_bound == 2 + 6 * valuation(P, 2)
    assert r.potmult_threshold == potmult_threshold(P, 1, -4, -4) == 6
    assert r.potmult_threshold_met is False
    assert any("threshold" in n for n in r.notes)


def test_reduction_v_j_identity():
    rng = random.Random(3)
    F = make_field(13)
    for _ in range(20):
        fd = generate_solution(F, rng, 5, height=3)
        for q in (2, 3, 5, 7):
            for P in split_prime(F, q):
                r = classify_reduction(fd, P)
                assert r.v_j == 3 * r.v_c4 - r.v_delta
                if r.minimal_asserted:
                    assert (r.type == GOOD) == (r.v_delta == 0)


def test_lambda_orbit_examples():
    assert lambda_orbit(2) == {2, H, -1}
    assert lambda_orbit(-1) == lambda_orbit(2)
    assert lambda_orbit(3) == {3, Fraction(1, 3), -2, Fraction(-1, 2), Fraction(3, 2), Fraction(2, 3)}
    for bad in (0, 1):
        with pytest.raises(DegenerateLambda):
            lambda_orbit(bad)


def test_j_examples():
    assert j_from_lambda(2) == 1728
    assert j_from_lambda(H) == 1728
    assert j_from_lambda_mu(-1, 2) == 1728
    with pytest.raises(DegenerateLambda):
        j_from_lambda(1)


nice_lambdas = st.fractions(max_denominator=50).filter(lambda x: x not in (0, 1))


@given(nice_lambdas)
def test_j_constant_on_orbit(lam):
    j = j_from_lambda(lam)
    orbit = lambda_orbit(lam)
    assert 6 % len(orbit) == 0
    assert all(j_from_lambda(x) == j for x in orbit)
    assert j_from_lambda_mu(lam, 1 - lam) == j


def test_j_orbit_over_field():
    rng = random.Random(5)
    F = make_field(7)
    for _ in range(50):
        lam = F(Fraction(rng.randint(-9, 9), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        if lam == 0 or lam == 1:
            continue
        j = j_from_lambda(lam)
        assert all(j_from_lambda(x) == j for x in lambda_orbit(lam))


def test_j_collision_polynomial():
    f0 = j_collision_degree(0)
    assert f0.coefficients == (256, -768, 1536, -1792, 1536, -768, 256)
    assert j_collision_degree(1728)(2) == 0
    f = j_collision_degree(256)
    rng = random.Random(2)
    for _ in range(10):
        m = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        assert f(m) == 256 * (m * m - m + 1) ** 3 - 256 * m * m * (m - 1) ** 2
    assert f.degree == 6


def test_scale_to_integral():
    F = make_field(5)
    a, b, c, xi = scale_to_integral(F, H, Fraction(1, 3), 1)
    assert (a, b, c) == (3, 2, 6) and xi == 6
    a, b, c, xi = scale_to_integral(F, 2, 4, 6)
    assert (a, b, c) == (1, 2, 3)
    F2 = make_field(2)
    a, b, c, xi = scale_to_integral(F2, F2(0, 1), 2, F2(2, 1))
    # result equals (1, sqrt2, 1+sqrt2) up to a unit
    u = a
    assert abs(u.norm()) == 1
    assert (b / u, c / u) == (F2(0, 1), F2(1, 1))


@pytest.mark.parametrize("p", [7, 11, 13])
def test_threshold_does_not_force_p_coprime_to_v_j(p):
    # A = 16 makes 8 v(2) + v(BC) - 2 v(A) vanish, so v_P(j) = -2p v_P(a) even above the threshold
    F = make_field(5)
    (P,) = s_k(F)
    C = -(16 * 2**p + 1)
    assert is_in_w_k(F, 16, 1, C, 2, 1, 1, p).ok
    assert p > potmult_threshold(P, 16, 1, C) == 6
    r = classify_reduction(frey_invariants(16, 1, C, 2, 1, 1, p, field=F), P)
    assert r.v_j == -2 * p and r.p_divides_v_j
