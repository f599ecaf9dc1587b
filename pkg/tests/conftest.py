from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from qdiagram.diagram import Theory
from qdiagram.divergence import ORDERS

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

C, X = Theory.CIRCUIT, Theory.CONVEX


@st.composite
def distributions(draw, n=None, min_size=1, max_size=6, zeros=True):
    if n is None:
        n = draw(st.integers(min_size, max_size))
    lo = 0 if zeros else 1
    weights = draw(st.lists(st.integers(lo, 50), min_size=n, max_size=n))
    if sum(weights) == 0:
        weights[draw(st.integers(0, n - 1))] = 1
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


@st.composite
def distribution_pairs(draw, min_size=1, max_size=6, power_of_two=False):
    if power_of_two:
        n = 2 ** draw(st.integers(1, 3))
    else:
        n = draw(st.integers(min_size, max_size))
    return draw(distributions(n)), draw(distributions(n))


orders = st.sampled_from(ORDERS)
probs = st.fractions(0, 1, max_denominator=12)


@pytest.fixture(params=ORDERS, ids=lambda a: f"alpha={a}")
def alpha(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
