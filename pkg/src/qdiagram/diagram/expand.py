"""Macro expansion into core generators, plus the wiring helpers it needs."""

from __future__ import annotations

from typing import Sequence

from .terms import (
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
    SwapElem,
    Term,
    Theory,
    par,
    seq,
    typecheck,
)

COPY, DEL, AND, NOT = Gen("copy"), Gen("del"), Gen("and"), Gen("not")
COP = Gen("cop")


def _layer(i: int, width: int, gate: Term, arity: int) -> Term:
    parts = [t for t in (Id(i) if i else None, gate, Id(width - i - arity) if width - i - arity else None) if t]
    return par(*parts)


def permute(order: Sequence[int]) -> Term:
    """Core wiring whose output ``i`` is input wire ``order[i]``.

    Built from elementary crossings by bubble sort, so it is valid in both theories.
    """
    width = len(order)
    rank = {w: i for i, w in enumerate(order)}
    if sorted(rank) != list(range(width)):
        raise ValueError(f"not a permutation: {order}")
    cur = list(range(width))
    layers = []
    changed = True
    while changed:
        changed = False
        for i in range(width - 1):
            if rank[cur[i]] > rank[cur[i + 1]]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                layers.append(_layer(i, width, SwapElem(), 2))
                changed = True
    return seq(*layers) if layers else Id(width)


def copies(k: int) -> Term:
    """Circuit ``1 -> k`` fan-out of a single wire."""
    if k == 0:
        return DEL
    if k == 1:
        return Id(1)
    return Seq(COPY, Par(Id(1), copies(k - 1)))


def bundle_copy(k: int) -> Term:
    """Circuit ``k -> 2k`` duplicating a bundle as ``(u, u)``."""
    if k == 0:
        return Id(0)
    if k == 1:
        return COPY
    spread = par(*([COPY] * k))
    return Seq(spread, permute([2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]))


OR_CORE = seq(Par(NOT, NOT), AND, NOT)

#: ``(c, x, y) -> (c and x) or (not c and y)``
IF_CORE = seq(
    Par(COPY, Id(2)),
    permute([0, 2, 1, 3]),
    Par(AND, Seq(Par(NOT, Id(1)), AND)),
    OR_CORE,
)


def if_bundle(m: int) -> Term:
    """Circuit ``1 + 2m -> m``: bitwise select between two ``m``-wire bundles."""
    if m == 0:
        return DEL
    if m == 1:
        return IF_CORE
    fan = Par(copies(m), Id(2 * m))
    order = [w for i in range(m) for w in (i, m + i, 2 * m + i)]
    return seq(fan, permute(order), par(*([IF_CORE] * m)))


def cop_tree(n: int) -> Term:
    """Convex ``n -> 1`` sum of ``n`` inputs."""
    if n == 1:
        return Id(1)
    return Seq(Par(cop_tree(n - 1), Id(1)), COP)


def codiag_core(n: int, m: int) -> Term:
    if m == 0:
        return Id(0)
    order = [k * m + j for j in range(m) for k in range(n)]
    return Seq(permute(order), par(*([cop_tree(n)] * m)))


def expand(t: Term, k: Theory) -> Term:
    """Rewrite every macro node into core generators, keeping the denotation."""
    typecheck(t, k)
    return _expand(t, k)


def _expand(t: Term, k: Theory) -> Term:
    if isinstance(t, Seq):
        return Seq(_expand(t.left, k), _expand(t.right, k))
    if isinstance(t, Par):
        return Par(_expand(t.left, k), _expand(t.right, k))
    if isinstance(t, Or):
        return OR_CORE
    if isinstance(t, IfGate):
        m = typecheck(t.f1, k)[1]
        return Seq(par(Id(1), _expand(t.f1, k), _expand(t.f0, k)), if_bundle(m))
    if isinstance(t, CondState):
        m = typecheck(t.f1, k)[1]
        branch = Seq(par(Id(1), _expand(t.f1, k), _expand(t.f0, k)), if_bundle(m))
        return seq(Gen("flip", t.p), COPY, Par(Id(1), branch))
    if isinstance(t, ConvComb):
        n, m = typecheck(t.f, k)
        both = Seq(bundle_copy(n), Par(_expand(t.f, k), _expand(t.g, k)))
        return seq(both, Par(Gen("flip", t.p), Id(2 * m)), if_bundle(m))
    if isinstance(t, ConvPair):
        return Seq(Gen("cc", t.p), Par(_expand(t.f, k), _expand(t.g, k)))
    if isinstance(t, Codiag):
        return codiag_core(t.n, t.m)
    return t
