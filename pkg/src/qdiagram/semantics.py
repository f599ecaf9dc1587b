"""Interpretation of terms as stochastic matrices, and its inverse on canonical terms.

Circuit terms ``n -> m`` denote ``2^m x 2^n`` matrices composed with the Kronecker
product; convex terms ``n -> m`` denote ``m x n`` matrices composed with the direct sum.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import stochmat as sm
from .diagram import (
    Codiag,
    CondState,
    ConvComb,
    ConvPair,
    Gen,
    Id,
    IfGate,
    Or,
    Par,
    Seq,
    Swap,
    SwapElem,
    Term,
    Theory,
    bundle_copy,
    par,
    seq,
    typecheck,
)
from .stochmat import ONE, ZERO, StochMatrix


def _m(rows) -> StochMatrix:
    return StochMatrix.from_rows(rows)


CIRCUIT_GENERATORS = {
    "del": _m([[1, 1]]),
    "copy": _m([[1, 0], [0, 0], [0, 0], [0, 1]]),
    "and": _m([[1, 0, 0, 0], [0, 1, 1, 1]]),
    "not": _m([[0, 1], [1, 0]]),
}
CONVEX_GENERATORS = {
    "del": sm.empty(1, 0),
    "cop": _m([[1, 1]]),
}
OR_MATRIX = _m([[1, 1, 1, 0], [0, 0, 0, 1]])


def _coin(p: Fraction) -> StochMatrix:
    return sm.state([p, 1 - p])


def evaluate(t: Term, k: Theory) -> StochMatrix:
    """The matrix denoted by ``t`` in theory ``k``."""
    typecheck(t, k)
    return _eval(t, k)


@lru_cache(maxsize=8192)
def _eval(t: Term, k: Theory) -> StochMatrix:
    circuit = k is Theory.CIRCUIT
    if isinstance(t, Gen):
        if t.p is not None:
            return _coin(Fraction(t.p))
        return (CIRCUIT_GENERATORS if circuit else CONVEX_GENERATORS)[t.name]
    if isinstance(t, Id):
        return sm.identity(2 ** t.n if circuit else t.n)
    if isinstance(t, SwapElem):
        return sm.swap_kron(1, 1) if circuit else sm.swap_dsum(1, 1)
    if isinstance(t, Swap):
        return sm.swap_dsum(t.n, t.m)
    if isinstance(t, Seq):
        return sm.matmul(_eval(t.right, k), _eval(t.left, k))
    if isinstance(t, Par):
        combine = sm.kron if circuit else sm.dsum
        return combine(_eval(t.left, k), _eval(t.right, k))
    if isinstance(t, Or):
        return OR_MATRIX
    if isinstance(t, IfGate):
        return if_matrix(_eval(t.f1, k), _eval(t.f0, k))
    if isinstance(t, CondState):
        return cond_state_matrix(Fraction(t.p), _eval(t.f1, k), _eval(t.f0, k))
    if isinstance(t, ConvComb):
        return mix(Fraction(t.p), _eval(t.f, k), _eval(t.g, k))
    if isinstance(t, ConvPair):
        return cond_state_matrix(Fraction(t.p), _eval(t.f, k), _eval(t.g, k))
    if isinstance(t, Codiag):
        return sm.codiag(t.n, t.m)
    raise TypeError(f"not a term: {t!r}")


def if_matrix(a1: StochMatrix, a0: StochMatrix) -> StochMatrix:
    """Columns indexed by ``(x, u, v)``: ``a1[:, u]`` when ``x = 1``, else ``a0[:, v]``."""
    cols = [sm.column(a1, u) for u in range(a1.cols) for _ in range(a0.cols)]
    cols += [sm.column(a0, v) for _ in range(a1.cols) for v in range(a0.cols)]
    return StochMatrix.from_columns(cols)


def cond_state_matrix(p: Fraction, a1: StochMatrix, a0: StochMatrix) -> StochMatrix:
    """The single column ``p a1`` stacked over ``(1 - p) a0``."""
    col = [p * x for x in sm.column(a1, 0)] + [(1 - p) * x for x in sm.column(a0, 0)]
    return sm.state(col)


def mix(p: Fraction, a: StochMatrix, b: StochMatrix) -> StochMatrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise sm.MatrixError("mixing matrices of different shapes")
    return sm._trusted(a.rows, a.cols, tuple(
        tuple(p * x + (1 - p) * y for x, y in zip(ra, rb)) for ra, rb in zip(a.entries, b.entries)))


# -- canonical terms ----------------------------------------------------------


def state_term_circuit(mu: Sequence) -> Term:
    """A circuit state ``0 -> m`` built from nested ``condstate`` nodes."""
    mu = sm.distribution(mu)
    if sm.log2_exact(len(mu)) == 0:
        return Id(0)
    p, mu1, mu0 = sm.cond_split_bit(mu)
    return CondState(p, state_term_circuit(mu1), state_term_circuit(mu0))


def column_term_convex(mu: Sequence) -> Term:
    """A convex column ``1 -> m`` built from right-nested ``convpair`` nodes."""
    mu = sm.distribution(mu)
    if len(mu) == 1:
        return Id(1)
    p, rest = sm.cond_split_first(mu)
    return ConvPair(p, Id(1), column_term_convex(rest))


def matrix_term_convex(a: StochMatrix) -> Term:
    """Columns side by side, summed back together by ``codiag``.

    With no columns the map ``0 -> m`` is ``m`` parallel copies of ``del``.
    """
    if a.cols == 0:
        return par(*([Gen("del")] * a.rows))
    if a.rows == 0:
        raise sm.MatrixError("no convex term denotes a matrix with no outputs")
    return Seq(par(*(column_term_convex(c) for c in sm.columns(a))), Codiag(a.cols, a.rows))


def selector_split(n: int) -> Term:
    """Circuit ``n -> 1 + 2(n - 1)``: keep the first wire, duplicate the rest."""
    return Id(1) if n == 1 else Par(Id(1), bundle_copy(n - 1))


def matrix_term_circuit(a: StochMatrix) -> Term:
    """Recursive if-gate decomposition on the first input wire."""
    sm.log2_exact(a.rows)
    n = sm.log2_exact(a.cols)
    if n == 0:
        return state_term_circuit(sm.column(a, 0))
    gate = IfGate(matrix_term_circuit(sm.restrict_first_bit(a, 1)),
                  matrix_term_circuit(sm.restrict_first_bit(a, 0)))
    return Seq(selector_split(n), gate)


def clear_cache() -> None:
    _eval.cache_clear()


__all__ = [
    "CIRCUIT_GENERATORS", "CONVEX_GENERATORS", "OR_MATRIX", "column_term_convex",
    "cond_state_matrix", "evaluate", "if_matrix", "matrix_term_circuit", "matrix_term_convex",
    "mix", "selector_split", "seq", "state_term_circuit",
]
