"""Exact-arithmetic checks of asymptotic Fermat criteria over real quadratic fields."""

from .errors import FermatCriteriaError
from .quadfield import FieldElem, QuadField, format_elem, make_field, parse_elem
from .ideals import PrimeIdeal, s_k, s_k_prime, split_prime, u_k, valuation
from .units import fundamental_unit, principal_generator, units_in_box
from .sunit import (
    SUnitSolution,
    check_mod3_condition,
    check_valuation_bound,
    classify,
    irrelevant_solutions,
    s_generators,
    solve_unit_equation,
)
from .frey import (
    classify_reduction,
    exact_divisor_check,
    frey_invariants,
    is_in_w_k,
    j_collision_degree,
    j_from_lambda,
    j_from_lambda_mu,
    lambda_orbit,
    scale_to_integral,
)
from .criteria import (
    coefficient_conditions,
    k3_check,
    odd_degree_criterion,
    quadratic_criterion_K,
    quadratic_local_criterion,
    w_k_check,
)
from .density import count_class, density_scan, squarefree_sieve

__version__ = "0.1.0"
