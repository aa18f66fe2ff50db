from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fermat_criteria import make_field

from oracles import squarefree_upto

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example],
)
settings.load_profile("default")

SMALL_D = squarefree_upto(60)

fields = st.sampled_from(SMALL_D).map(make_field)
rationals = st.fractions(max_denominator=30).filter(lambda r: abs(r.numerator) < 10**4)
small_ints = st.integers(-30, 30)


def _elems(F, integral: bool, nonzero: bool):
    if integral:
        e = st.builds(F.from_basis, small_ints, small_ints)
    else:
        e = st.builds(F, rationals, rationals)
    return e.filter(lambda x: not x.is_zero()) if nonzero else e


def field_and_elems(n=2, integral=False, nonzero=False):
    """``(F, x1, ..., xn)`` with F drawn from small square-free d."""
    return fields.flatmap(
        lambda F: st.tuples(st.just(F), *[_elems(F, integral, nonzero)] * n)
    )


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

