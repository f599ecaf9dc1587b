from __future__ import annotations

import math
from fractions import Fraction as F

import pytest

import oracle
from qdiagram import stochmat as sm
from qdiagram.diagram import TypeCheckError, parse
from qdiagram.divergence import ORDERS, div_max, kl, renyi
from qdiagram.extreal import close
from qdiagram.fuzz import random_matrix, trial_rng, zero_branches
from qdiagram.proofs import MONO, PAR_MAX, RULES, TheoryConfig, bound_of, check
from qdiagram.semantics import evaluate
from qdiagram.synth import (
    derive, derive_matrices, derive_prod, derive_state_sum, derive_states_prod, derive_sum,
)

from conftest import C, X

INF = math.inf


def checked(d, kind, alpha):
    check(d, TheoryConfig(kind, alpha))
    return bound_of(d)


def test_states_prod_examples():
    f = parse("flip(1/3) + flip(1/2)", C)
    assert checked(derive_states_prod(1, f, f), C, 1) == 0
    b = checked(derive_states_prod(1, parse("flip(1/2)", C), parse("flip(1/4)", C)), C, 1)
    assert close(b, oracle.kl([F(1, 2), F(1, 2)], [F(1, 4), F(3, 4)]))
    assert close(b, 0.143841, rel=1e-6)
    assert checked(derive_states_prod(1, parse("flip(1/2)", C), parse("flip(1)", C)), C, 1) == INF
    with pytest.raises(TypeCheckError):
        derive_states_prod(1, parse("not", C), parse("not", C))


def test_prod_examples():
    assert checked(derive_prod(1, parse("not", C), parse("not", C)), C, 1) == 0
    assert checked(derive_prod(1, parse("not", C), parse("id(1)", C)), C, 1) == INF
    noisy = parse("convcomb(1/4, not, id(1))", C)
    want = oracle.div_max(INF, [[F(1, 4), F(3, 4)], [F(3, 4), F(1, 4)]], [[1, 0], [0, 1]])
    assert checked(derive_prod(INF, noisy, parse("id(1)", C)), C, INF) == want == INF
    noisy2 = parse("convcomb(1/4, not, id(1))", C)
    other = parse("convcomb(1/2, not, id(1))", C)
    got = checked(derive_prod(INF, noisy2, other), C, INF)
    assert close(got, oracle.div_max(INF, [[F(1, 4), F(3, 4)], [F(3, 4), F(1, 4)]],
                                      [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]))
    with pytest.raises(TypeCheckError):
        derive_prod(1, parse("not", C), parse("copy", C))


def test_state_sum_examples():
    cc = parse("cc(1/3)", X)
    assert checked(derive_state_sum(1, cc, cc), X, 1) == 0
    b = checked(derive_state_sum(1, parse("cc(1/2)", X), parse("cc(1/4)", X)), X, 1)
    assert close(b, 0.14384103622589045)
    b0 = checked(derive_state_sum(0, parse("cc(1/2)", X), parse("cc(0)", X)), X, 0)
    assert b0 == renyi(0, [F(1, 2), F(1, 2)], [0, 1]) == 0
    b0 = checked(derive_state_sum(0, parse("cc(1)", X), parse("cc(1/2)", X)), X, 0)
    assert close(b0, math.log(2))


def test_sum_examples():
    f = parse("(cc(1/2) + id(1)) ; (id(1) + cop)", X)
    assert checked(derive_sum(1, f, f), X, 1) == 0
    lhs = parse("(convpair(1, id(1), id(1)) + cc(1/2)) ; codiag(2, 2)", X)
    rhs = parse("(cc(1/2) + cc(1/2)) ; codiag(2, 2)", X)
    assert close(checked(derive_sum(1, lhs, rhs), X, 1), math.log(2))
    empty = parse("id(0)", X)
    d = derive_sum(1, empty, empty)
    assert d.rule == "Refl0" and checked(d, X, 1) == 0


def test_derivations_use_only_legal_rules_and_no_mono():
    for trial in range(30):
        rng = trial_rng(9, trial)
        for kind, legal in ((C, set(RULES) - {"ChainSum", "ParMax"}), (X, set(RULES) - {"ChainProd", "IfMax"})):
            shape = (4, 4) if kind is C else (3, 4)
            d = derive_matrices(TheoryConfig(kind, 1), random_matrix(rng, *shape), random_matrix(rng, *shape))
            rules = {n.rule for _, n in d.nodes()}
            assert rules <= legal and MONO not in rules


def test_parmax_folds_to_the_left():
    a = random_matrix(trial_rng(1, 0), 2, 3)
    d = derive_matrices(TheoryConfig(X, 1), a, a)
    fold = d.premises[0]
    assert fold.rule == PAR_MAX and fold.premises[0].rule == PAR_MAX


@pytest.mark.parametrize("alpha", ORDERS, ids=str)
def test_tight_on_zero_heavy_inputs(alpha):
    hits = 0
    for trial in range(40):
        rng = trial_rng(77, trial)
        for kind, (r, c) in ((C, (4, 2)), (X, (4, 3))):
            a, b = random_matrix(rng, r, c, 0.5), random_matrix(rng, r, c, 0.5)
            cfg = TheoryConfig(kind, alpha)
            d = derive_matrices(cfg, a, b)
            check(d, cfg)
            hits += zero_branches(d)
            assert close(bound_of(d), div_max(alpha, a, b))
            cols = sm.columns
            assert close(bound_of(d), oracle.div_max(alpha, cols(a), cols(b)))
    assert hits > 0


def test_synthesis_is_reproducible():
    f, g = parse("copy ; (not + id(1))", C), parse("convcomb(1/3, copy, del ; (flip(1/2) + flip(1)))", C)
    assert derive(TheoryConfig(C, 2), f, g) == derive(TheoryConfig(C, 2), f, g)
