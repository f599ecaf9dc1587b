from __future__ import annotations

from fractions import Fraction as F

import pytest

from qdiagram import stochmat as sm
from qdiagram.axioms import AXIOMS, CIRCUIT_AXIOMS, CONVEX_AXIOMS, GRID, Axiom, safe_div, validate
from qdiagram.diagram import CondState, ConvPair, Id, Par, Seq, parse, typecheck
from qdiagram.fuzz import random_distribution, random_matrix, random_term, trial_rng
from qdiagram.semantics import (
    column_term_convex, evaluate, matrix_term_circuit, matrix_term_convex, state_term_circuit,
)
from qdiagram.stochmat import StochMatrix

from conftest import C, X

M = StochMatrix.from_rows
HALF = F(1, 2)


def test_circuit_generators():
    assert evaluate(parse("copy", C), C) == M([[1, 0], [0, 0], [0, 0], [0, 1]])
    assert evaluate(parse("and", C), C) == M([[1, 0, 0, 0], [0, 1, 1, 1]])
    assert evaluate(parse("not", C), C) == M([[0, 1], [1, 0]])
    assert evaluate(parse("del", C), C) == M([[1, 1]])
    assert evaluate(parse("flip(1/3)", C), C) == M([[F(1, 3)], [F(2, 3)]])


def test_convex_generators():
    assert evaluate(parse("cop", X), X) == M([[1, 1]])
    assert evaluate(parse("cc(1/4)", X), X) == M([[F(1, 4)], [F(3, 4)]])
    assert evaluate(parse("del", X), X) == sm.empty(1, 0)


def test_discarding_a_coin_is_the_unit():
    assert evaluate(parse("flip(1/2) ; del", C), C) == M([[1]])


def test_macro_contracts():
    assert evaluate(parse("or", C), C) == M([[1, 1, 1, 0], [0, 0, 0, 1]])
    # column (x, u, v) picks f1 at u when x = 1 and f0 at v otherwise
    assert evaluate(parse("ifgate(not, id(1))", C), C) == M(
        [[0, 0, 1, 1, 1, 0, 1, 0], [1, 1, 0, 0, 0, 1, 0, 1]])
    assert evaluate(parse("convcomb(1/4, not, id(1))", C), C) == M(
        [[F(3, 4), F(1, 4)], [F(1, 4), F(3, 4)]])
    assert evaluate(parse("codiag(2, 2)", X), X) == M([[1, 0, 1, 0], [0, 1, 0, 1]])
    assert evaluate(parse("swap(2, 1)", X), X) == sm.swap_dsum(2, 1)


@pytest.mark.parametrize("theory", [C, X])
def test_functoriality(theory):
    combine = sm.kron if theory is C else sm.dsum
    for trial in range(500):
        rng = trial_rng(3, trial)
        s = random_term(rng, theory, int(rng.integers(0, 3)), depth=2)
        t = random_term(rng, theory, typecheck(s, theory)[1], depth=2)
        assert evaluate(Seq(s, t), theory) == sm.matmul(evaluate(t, theory), evaluate(s, theory))
        assert evaluate(Par(s, t), theory) == combine(evaluate(s, theory), evaluate(t, theory))


def test_state_term_examples():
    assert state_term_circuit([1]) == Id(0)
    p = F(2, 7)
    assert state_term_circuit([p, 1 - p]) == CondState(p, Id(0), Id(0))
    t = state_term_circuit([HALF, 0, 0, HALF])
    assert t == CondState(HALF, CondState(1, Id(0), Id(0)), CondState(0, Id(0), Id(0)))
    assert sm.column(evaluate(t, C), 0) == (HALF, 0, 0, HALF)
    with pytest.raises(sm.MatrixError):
        state_term_circuit([F(1, 3)] * 3)


def test_column_term_examples():
    assert column_term_convex([1]) == Id(1)
    assert column_term_convex([F(1, 3), F(2, 3)]) == ConvPair(F(1, 3), Id(1), Id(1))
    assert column_term_convex([F(1, 4), F(1, 4), HALF]) == ConvPair(
        F(1, 4), Id(1), ConvPair(F(1, 3), Id(1), Id(1)))


def test_matrix_term_examples():
    a = M([[HALF, 1], [HALF, 0]])
    assert evaluate(matrix_term_convex(a), X) == a
    assert matrix_term_convex(sm.empty(0, 0)) == Id(0)
    assert evaluate(matrix_term_convex(sm.empty(3, 0)), X) == sm.empty(3, 0)
    assert evaluate(matrix_term_convex(sm.identity(1)), X) == sm.identity(1)
    for m in (sm.identity(2), evaluate(parse("not", C), C), sm.state([F(1, 5), F(4, 5)])):
        assert evaluate(matrix_term_circuit(m), C) == m
    with pytest.raises(sm.MatrixError):
        matrix_term_circuit(M([[1, 1, 1]]))


def test_synthesis_round_trips():
    for trial in range(500):
        rng = trial_rng(5, trial)
        m = 2 ** int(rng.integers(0, 4))
        mu = random_distribution(rng, m)
        assert sm.column(evaluate(state_term_circuit(mu), C), 0) == mu
        nu = random_distribution(rng, int(rng.integers(1, 7)))
        assert sm.column(evaluate(column_term_convex(nu), X), 0) == nu
        a = random_matrix(rng, 2 ** int(rng.integers(0, 3)), 2 ** int(rng.integers(0, 3)))
        assert evaluate(matrix_term_circuit(a), C) == a
        b = random_matrix(rng, int(rng.integers(1, 6)), int(rng.integers(0, 5)))
        assert evaluate(matrix_term_convex(b), X) == b


def test_safe_division():
    assert safe_div(F(0), F(0)) == 1
    assert safe_div(F(1), F(4)) == F(1, 4)
    with pytest.raises(ZeroDivisionError):
        safe_div(F(1), F(0))


@pytest.mark.parametrize("axiom", CIRCUIT_AXIOMS + CONVEX_AXIOMS,
                         ids=lambda a: f"{a.theory.value}-{a.name}")
def test_axiom_schema_holds_on_grid(axiom):
    assert axiom.failures(GRID) == []


def test_axiom_catalogue_is_complete():
    names = {a.name for a in AXIOMS[C]}
    assert {"ifassoc", "ifdisintegration", "geninverse", "andordist", "pnot", "pdel"} <= names
    assert {a.name for a in AXIOMS[X]} == {
        "assoc", "comm", "unit", "convassoc", "convcomm", "natdel", "zprob", "idemp", "cccop"}


def test_validation_detects_a_wrong_schema():
    # Mixing weights swapped in the tilde parameters: must fail somewhere on the grid.
    bad = Axiom("bad_convassoc", X, 2, lambda p, q: (
        f"cc({p}) ; (cc({q}) + id(1))", f"cc({p}) ; (id(1) + cc({q}))"))
    assert bad.failures()
    assert not any(validate(CONVEX_AXIOMS).values())
