"""Typed string-diagram terms over the circuit and convex signatures."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Tuple, Union

from ..stochmat import format_rational


class Theory(enum.Enum):
    """Which signature a term is read in.

    ``CIRCUIT`` has ``del, copy, and, not, flip(p)`` and the Kronecker product;
    ``CONVEX`` has ``del, cop, cc(p)`` and the direct sum.
    """

    CIRCUIT = "circuit"
    CONVEX = "convex"


class TypeCheckError(TypeError):
    def __init__(self, message: str, term: "Term | None" = None):
        where = f" in {show(term)}" if term is not None else ""
        super().__init__(message + where)
        self.term = term


@dataclass(frozen=True)
class Gen:
    name: str
    p: Optional[Fraction] = None


@dataclass(frozen=True)
class Id:
    n: int


@dataclass(frozen=True)
class SwapElem:
    """The crossing of two single wires."""


@dataclass(frozen=True)
class Swap:
    """Block symmetry ``n, m -> m, n`` (convex signature only)."""

    n: int
    m: int


@dataclass(frozen=True)
class Seq:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Par:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Or:
    pass


@dataclass(frozen=True)
class IfGate:
    """Selector wire, then the inputs of ``f1``, then the inputs of ``f0``."""

    f1: "Term"
    f0: "Term"


@dataclass(frozen=True)
class CondState:
    """The state ``p (1 (x) f1) + (1 - p) (0 (x) f0)`` on ``1 + m`` wires."""

    p: Fraction
    f1: "Term"
    f0: "Term"


@dataclass(frozen=True)
class ConvComb:
    """Circuit convex combination ``p f + (1 - p) g`` of two maps of equal type."""

    p: Fraction
    f: "Term"
    g: "Term"


@dataclass(frozen=True)
class ConvPair:
    """Convex column ``cc(p) ; (f + g)`` stacking ``p f`` over ``(1 - p) g``."""

    p: Fraction
    f: "Term"
    g: "Term"


@dataclass(frozen=True)
class Codiag:
    """``n`` copies of ``m`` summed back onto ``m``."""

    n: int
    m: int


Term = Union[Gen, Id, SwapElem, Swap, Seq, Par, Or, IfGate, CondState, ConvComb, ConvPair, Codiag]

CORE_NODES = (Gen, Id, SwapElem, Swap, Seq, Par)
MACRO_NODES = (Or, IfGate, CondState, ConvComb, ConvPair, Codiag)

#: generator name -> (takes a parameter, dom, cod)
SIGNATURES = {
    Theory.CIRCUIT: {
        "del": (False, 1, 0),
        "copy": (False, 1, 2),
        "and": (False, 2, 1),
        "not": (False, 1, 1),
        "flip": (True, 0, 1),
    },
    Theory.CONVEX: {
        "del": (False, 0, 1),
        "cop": (False, 2, 1),
        "cc": (True, 1, 2),
    },
}

_MACRO_THEORY = {
    Or: Theory.CIRCUIT,
    IfGate: Theory.CIRCUIT,
    CondState: Theory.CIRCUIT,
    ConvComb: Theory.CIRCUIT,
    ConvPair: Theory.CONVEX,
    Codiag: Theory.CONVEX,
    Swap: Theory.CONVEX,
}


def _check_prob(p, t: Term) -> None:
    if not isinstance(p, (Fraction, int)) or not 0 <= p <= 1:
        raise TypeCheckError(f"parameter {p!r} is not a rational in [0, 1]", t)


@lru_cache(maxsize=16384)
def typecheck(t: Term, k: Theory) -> Tuple[int, int]:
    """Return ``(dom, cod)`` of ``t`` read in theory ``k``."""
    owner = _MACRO_THEORY.get(type(t))
    if owner is not None and owner is not k:
        raise TypeCheckError(f"{type(t).__name__} is not available in the {k.value} theory", t)

    if isinstance(t, Gen):
        sig = SIGNATURES[k].get(t.name)
        if sig is None:
            raise TypeCheckError(f"unknown generator {t.name!r} for the {k.value} theory", t)
        has_param, dom, cod = sig
        if has_param:
            if t.p is None:
                raise TypeCheckError(f"{t.name} needs a parameter", t)
            _check_prob(t.p, t)
        elif t.p is not None:
            raise TypeCheckError(f"{t.name} takes no parameter", t)
        return dom, cod
    if isinstance(t, Id):
        if t.n < 0:
            raise TypeCheckError("negative object", t)
        return t.n, t.n
    if isinstance(t, SwapElem):
        return 2, 2
    if isinstance(t, Swap):
        if t.n < 0 or t.m < 0:
            raise TypeCheckError("negative object", t)
        return t.n + t.m, t.n + t.m
    if isinstance(t, Seq):
        d1, c1 = typecheck(t.left, k)
        d2, c2 = typecheck(t.right, k)
        if c1 != d2:
            raise TypeCheckError(f"cannot compose {d1}->{c1} with {d2}->{c2}", t)
        return d1, c2
    if isinstance(t, Par):
        d1, c1 = typecheck(t.left, k)
        d2, c2 = typecheck(t.right, k)
        return d1 + d2, c1 + c2
    if isinstance(t, Or):
        return 2, 1
    if isinstance(t, IfGate):
        n1, m1 = typecheck(t.f1, k)
        n0, m0 = typecheck(t.f0, k)
        if m1 != m0:
            raise TypeCheckError(f"if-gate branches have outputs {m1} and {m0}", t)
        return 1 + n1 + n0, m1
    if isinstance(t, CondState):
        _check_prob(t.p, t)
        n1, m1 = typecheck(t.f1, k)
        n0, m0 = typecheck(t.f0, k)
        if n1 != 0 or n0 != 0 or m1 != m0:
            raise TypeCheckError(f"condstate needs two states 0->m, got {n1}->{m1} and {n0}->{m0}", t)
        return 0, 1 + m1
    if isinstance(t, ConvComb):
        _check_prob(t.p, t)
        ty_f, ty_g = typecheck(t.f, k), typecheck(t.g, k)
        if ty_f != ty_g:
            raise TypeCheckError(f"convcomb branches have types {ty_f} and {ty_g}", t)
        return ty_f
    if isinstance(t, ConvPair):
        _check_prob(t.p, t)
        n1, m1 = typecheck(t.f, k)
        n2, m2 = typecheck(t.g, k)
        if n1 != 1 or n2 != 1:
            raise TypeCheckError(f"convpair needs two columns 1->m, got {n1}->{m1} and {n2}->{m2}", t)
        return 1, m1 + m2
    if isinstance(t, Codiag):
        if t.n < 1 or t.m < 0:
            raise TypeCheckError("codiag needs n >= 1 and m >= 0", t)
        return t.n * t.m, t.m
    raise TypeCheckError(f"not a term: {t!r}")


def is_core(t: Term) -> bool:
    if isinstance(t, (Seq, Par)):
        return is_core(t.left) and is_core(t.right)
    return isinstance(t, CORE_NODES)


def show(t: Term) -> str:
    """Canonical fully parenthesised text; inverse of :func:`parse`."""
    if isinstance(t, Gen):
        return t.name if t.p is None else f"{t.name}({format_rational(Fraction(t.p))})"
    if isinstance(t, Id):
        return f"id({t.n})"
    if isinstance(t, SwapElem):
        return "swap"
    if isinstance(t, Swap):
        return f"swap({t.n}, {t.m})"
    if isinstance(t, Seq):
        return f"({show(t.left)} ; {show(t.right)})"
    if isinstance(t, Par):
        return f"({show(t.left)} + {show(t.right)})"
    if isinstance(t, Or):
        return "or"
    if isinstance(t, IfGate):
        return f"ifgate({show(t.f1)}, {show(t.f0)})"
    if isinstance(t, CondState):
        return f"condstate({format_rational(Fraction(t.p))}, {show(t.f1)}, {show(t.f0)})"
    if isinstance(t, ConvComb):
        return f"convcomb({format_rational(Fraction(t.p))}, {show(t.f)}, {show(t.g)})"
    if isinstance(t, ConvPair):
        return f"convpair({format_rational(Fraction(t.p))}, {show(t.f)}, {show(t.g)})"
    if isinstance(t, Codiag):
        return f"codiag({t.n}, {t.m})"
    raise TypeError(f"not a term: {t!r}")


def seq(*ts: Term) -> Term:
    """Left-nested sequential composite; at least one term."""
    out = ts[0]
    for t in ts[1:]:
        out = Seq(out, t)
    return out


def par(*ts: Term) -> Term:
    """Left-nested monoidal product; ``Id(0)`` when empty."""
    if not ts:
        return Id(0)
    out = ts[0]
    for t in ts[1:]:
        out = Par(out, t)
    return out
