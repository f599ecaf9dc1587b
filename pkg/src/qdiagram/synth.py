"""Derivations whose bound equals the true column-max divergence.

Synthesis works on denotations: both terms are evaluated, the matrices are split
recursively into canonical terms, and the canonical judgement is tied back to the
caller's terms by semantic equalities at the root.
"""

from __future__ import annotations

from typing import Sequence

from . import stochmat as sm
from .diagram import Codiag, Id, Term, Theory, TypeCheckError, typecheck
from .divergence import Order
from .proofs import (
    CHAIN_PROD,
    CHAIN_SUM,
    EQSUBST_L,
    EQSUBST_R,
    IF_MAX,
    PAR_MAX,
    REFL0,
    SEMEQ,
    SEQCOMP,
    Derivation,
    TheoryConfig,
    node,
)
from .semantics import evaluate, matrix_term_convex, selector_split
from .stochmat import StochMatrix


def _refl(t: Term, cfg: TheoryConfig) -> Derivation:
    return node(REFL0, {"term": t}, [], cfg)


def _same_type(f: Term, g: Term, k: Theory) -> tuple[int, int]:
    tf, tg = typecheck(f, k), typecheck(g, k)
    if tf != tg:
        raise TypeCheckError(f"terms have types {tf[0]}->{tf[1]} and {tg[0]}->{tg[1]}", g)
    return tf


def glue(core: Derivation, f: Term, g: Term, cfg: TheoryConfig) -> Derivation:
    """Turn ``core: f' =_e g'`` into ``f =_e g`` given ``f = f'`` and ``g = g'`` semantically."""
    d = core
    if d.conclusion.lhs != f:
        eq = node(SEMEQ, {"lhs": d.conclusion.lhs, "rhs": f}, [], cfg)
        d = node(EQSUBST_L, {}, [eq, d], cfg)
    if d.conclusion.rhs != g:
        eq = node(SEMEQ, {"lhs": d.conclusion.rhs, "rhs": g}, [], cfg)
        d = node(EQSUBST_R, {}, [eq, d], cfg)
    return d


# -- circuit theory ---------------------------------------------------------------


def states_prod(mu: Sequence, nu: Sequence, cfg: TheoryConfig) -> Derivation:
    """``state_term_circuit(mu) =_e state_term_circuit(nu)`` by nested ChainProd."""
    if len(mu) == 1:
        return _refl(Id(0), cfg)
    p, mu1, mu0 = sm.cond_split_bit(mu)
    q, nu1, nu0 = sm.cond_split_bit(nu)
    premises = [states_prod(mu1, nu1, cfg), states_prod(mu0, nu0, cfg)]
    return node(CHAIN_PROD, {"p": p, "q": q}, premises, cfg)


def matrices_prod(a: StochMatrix, b: StochMatrix, cfg: TheoryConfig) -> Derivation:
    """``matrix_term_circuit(a) =_e matrix_term_circuit(b)``."""
    n = sm.log2_exact(a.cols)
    if n == 0:
        return states_prod(sm.column(a, 0), sm.column(b, 0), cfg)
    branches = [matrices_prod(sm.restrict_first_bit(a, bit), sm.restrict_first_bit(b, bit), cfg)
                for bit in (1, 0)]
    gate = node(IF_MAX, {}, branches, cfg)
    return node(SEQCOMP, {}, [_refl(selector_split(n), cfg), gate], cfg)


def derive_states_prod(alpha: Order, f: Term, g: Term) -> Derivation:
    cfg = TheoryConfig(Theory.CIRCUIT, alpha)
    n, _ = _same_type(f, g, cfg.kind)
    if n != 0:
        raise TypeCheckError(f"expected states 0->m, got a map out of {n} wires", f)
    a, b = evaluate(f, cfg.kind), evaluate(g, cfg.kind)
    return glue(states_prod(sm.column(a, 0), sm.column(b, 0), cfg), f, g, cfg)


def derive_prod(alpha: Order, f: Term, g: Term) -> Derivation:
    cfg = TheoryConfig(Theory.CIRCUIT, alpha)
    _same_type(f, g, cfg.kind)
    core = matrices_prod(evaluate(f, cfg.kind), evaluate(g, cfg.kind), cfg)
    return glue(core, f, g, cfg)


# -- convex theory ----------------------------------------------------------------


def column_sum(mu: Sequence, nu: Sequence, cfg: TheoryConfig) -> Derivation:
    """``column_term_convex(mu) =_e column_term_convex(nu)`` by nested ChainSum."""
    if len(mu) == 1:
        return _refl(Id(1), cfg)
    p, mu_rest = sm.cond_split_first(mu)
    q, nu_rest = sm.cond_split_first(nu)
    premises = [_refl(Id(1), cfg), column_sum(mu_rest, nu_rest, cfg)]
    return node(CHAIN_SUM, {"p": p, "q": q}, premises, cfg)


def matrices_sum(a: StochMatrix, b: StochMatrix, cfg: TheoryConfig) -> Derivation:
    """``matrix_term_convex(a) =_e matrix_term_convex(b)``."""
    if a.cols == 0:
        return _refl(matrix_term_convex(a), cfg)
    cols = [column_sum(x, y, cfg) for x, y in zip(sm.columns(a), sm.columns(b))]
    d = cols[0]
    for nxt in cols[1:]:
        d = node(PAR_MAX, {}, [d, nxt], cfg)
    return node(SEQCOMP, {}, [d, _refl(Codiag(a.cols, a.rows), cfg)], cfg)


def derive_state_sum(alpha: Order, f: Term, g: Term) -> Derivation:
    cfg = TheoryConfig(Theory.CONVEX, alpha)
    n, _ = _same_type(f, g, cfg.kind)
    if n != 1:
        raise TypeCheckError(f"expected maps out of one wire, got {n}", f)
    a, b = evaluate(f, cfg.kind), evaluate(g, cfg.kind)
    return glue(column_sum(sm.column(a, 0), sm.column(b, 0), cfg), f, g, cfg)


def derive_sum(alpha: Order, f: Term, g: Term) -> Derivation:
    cfg = TheoryConfig(Theory.CONVEX, alpha)
    _same_type(f, g, cfg.kind)
    core = matrices_sum(evaluate(f, cfg.kind), evaluate(g, cfg.kind), cfg)
    return glue(core, f, g, cfg)


def derive(cfg: TheoryConfig, f: Term, g: Term) -> Derivation:
    """Dispatch on the theory of ``cfg``."""
    if cfg.kind is Theory.CIRCUIT:
        return derive_prod(cfg.alpha, f, g)
    return derive_sum(cfg.alpha, f, g)


def derive_matrices(cfg: TheoryConfig, a: StochMatrix, b: StochMatrix) -> Derivation:
    """Synthesis between the canonical terms of two matrices, without gluing."""
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise sm.MatrixError("matrices of different shapes")
    if cfg.kind is Theory.CIRCUIT:
        return matrices_prod(a, b, cfg)
    return matrices_sum(a, b, cfg)
