"""Judgements ``f =_eps g``, the fixed rule catalogue, and a bound-recomputing checker.

Every rule node carries its parameters explicitly, so the checker rebuilds the
conclusion from the premises and compares it with the one written in the node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional, Sequence

from . import extreal as er
from . import stochmat as sm
from .diagram import (
    ConvPair,
    CondState,
    IfGate,
    Par,
    ParseError,
    Seq,
    Term,
    Theory,
    TypeCheckError,
    parse,
    show,
    typecheck,
)
from .divergence import Order, c_alpha, format_order
from .semantics import evaluate

REFL0 = "Refl0"
SEMEQ = "SemEq"
MONO = "Mono"
MINJOIN = "MinJoin"
SEQCOMP = "SeqComp"
PARCOMP = "ParComp"
EQSUBST_L = "EqSubstL"
EQSUBST_R = "EqSubstR"
CHAIN_PROD = "ChainProd"
IF_MAX = "IfMax"
CHAIN_SUM = "ChainSum"
PAR_MAX = "ParMax"

RULES = (REFL0, SEMEQ, MONO, MINJOIN, SEQCOMP, PARCOMP, EQSUBST_L, EQSUBST_R,
         CHAIN_PROD, IF_MAX, CHAIN_SUM, PAR_MAX)
_ONLY_IN = {CHAIN_PROD: Theory.CIRCUIT, IF_MAX: Theory.CIRCUIT,
            CHAIN_SUM: Theory.CONVEX, PAR_MAX: Theory.CONVEX}
_ARITY = {REFL0: 0, SEMEQ: 0, MONO: 1, MINJOIN: 2, SEQCOMP: 2, PARCOMP: 2, EQSUBST_L: 2,
          EQSUBST_R: 2, CHAIN_PROD: 2, IF_MAX: 2, CHAIN_SUM: 2, PAR_MAX: 2}
_PARAMS = {REFL0: {"term"}, SEMEQ: {"lhs", "rhs"}, MONO: {"eps"}, CHAIN_PROD: {"p", "q"},
           CHAIN_SUM: {"p", "q"}}
_TERM_PARAMS = {"term", "lhs", "rhs"}


@dataclass(frozen=True)
class TheoryConfig:
    kind: Theory
    alpha: Order

    def __str__(self) -> str:
        return f"{self.kind.value}, alpha={format_order(self.alpha)}"


@dataclass(frozen=True)
class Judgement:
    """``lhs =_eps rhs``; strict equalities carry ``eps = 0`` and ``strict=True``."""

    lhs: Term
    rhs: Term
    eps: float = 0.0
    strict: bool = False

    def __str__(self) -> str:
        rel = "=" if self.strict else f"=_{{{er.render(self.eps)}}}"
        return f"{show(self.lhs)} {rel} {show(self.rhs)}"


def strict(lhs: Term, rhs: Term) -> Judgement:
    return Judgement(lhs, rhs, 0.0, True)


@dataclass(eq=True)
class Derivation:
    rule: str
    params: dict
    premises: list
    conclusion: Judgement
    verified: Optional[TheoryConfig] = field(default=None, init=False, compare=False, repr=False)

    def nodes(self, path: tuple = ()) -> Iterator[tuple[tuple, "Derivation"]]:
        """Pre-order walk yielding ``(path, node)``."""
        yield path, self
        for i, d in enumerate(self.premises):
            yield from d.nodes(path + (i,))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


# -- errors --------------------------------------------------------------------


def format_path(path: Sequence[int]) -> str:
    return "root" + "".join(f".premises[{i}]" for i in path)


class ProofError(Exception):
    """A rejected derivation; ``path`` addresses the offending node."""

    def __init__(self, message: str, path: Sequence[int] = (), rule: str = ""):
        self.message = message
        self.path = tuple(path)
        self.rule = rule
        where = format_path(self.path) + (f" ({rule})" if rule else "")
        super().__init__(f"{type(self).__name__} at {where}: {message}")


class MalformedDerivation(ProofError):
    """Unknown rule, wrong premise count, or missing parameters."""


class RuleTheoryMismatch(ProofError):
    pass


class ShapeMismatch(ProofError):
    """Premises do not fit the rule, or the stated terms differ from the rebuilt ones."""


class BoundMismatch(ProofError):
    pass


class SemEqMismatch(ProofError):
    pass


class UncheckedDerivation(ProofError):
    pass


# -- rules ---------------------------------------------------------------------


def _types_agree(j: Judgement, k: Theory) -> tuple[int, int]:
    try:
        left, right = typecheck(j.lhs, k), typecheck(j.rhs, k)
    except TypeCheckError as exc:
        raise ShapeMismatch(str(exc)) from exc
    if left != right:
        raise ShapeMismatch(f"sides have types {left[0]}->{left[1]} and {right[0]}->{right[1]}")
    return left


def _prob(params: dict, key: str) -> Fraction:
    x = params[key]
    if not isinstance(x, (Fraction, int)) or not 0 <= x <= 1:
        raise MalformedDerivation(f"parameter {key}={x!r} is not a probability")
    return Fraction(x)


def _pair_rule(build: Callable[[Term, Term], Term], a: Judgement, b: Judgement,
               eps: float, both_strict: bool) -> Judgement:
    return Judgement(build(a.lhs, b.lhs), build(a.rhs, b.rhs), eps, both_strict)


def conclude(rule: str, params: dict, premises: Sequence[Judgement], cfg: TheoryConfig) -> Judgement:
    """The judgement a rule yields from its parameters and premise conclusions.

    Raises :class:`ProofError` subclasses with an empty path; :func:`check`
    fills the path in.
    """
    if rule not in RULES:
        raise MalformedDerivation(f"unknown rule {rule!r}")
    owner = _ONLY_IN.get(rule)
    if owner is not None and owner is not cfg.kind:
        raise RuleTheoryMismatch(f"{rule} is not a rule of the {cfg.kind.value} theory")
    if len(premises) != _ARITY[rule]:
        raise MalformedDerivation(f"{rule} takes {_ARITY[rule]} premises, got {len(premises)}")
    missing = _PARAMS.get(rule, set()) - set(params)
    if missing:
        raise MalformedDerivation(f"{rule} is missing parameters {sorted(missing)}")
    k = cfg.kind

    if rule == REFL0:
        out = Judgement(params["term"], params["term"], 0.0)
        _types_agree(out, k)
        return out
    if rule == SEMEQ:
        out = strict(params["lhs"], params["rhs"])
        _types_agree(out, k)
        if evaluate(out.lhs, k) != evaluate(out.rhs, k):
            raise SemEqMismatch(f"{show(out.lhs)} and {show(out.rhs)} denote different matrices")
        return out

    for j in premises:
        _types_agree(j, k)
    if rule == MONO:
        (a,) = premises
        eps = float(params["eps"])
        er.check(eps)
        if eps < a.eps and not er.close(eps, a.eps):
            raise BoundMismatch(f"Mono may only weaken: {er.render(eps)} < {er.render(a.eps)}")
        return Judgement(a.lhs, a.rhs, eps)

    a, b = premises
    if rule == MINJOIN:
        if (a.lhs, a.rhs) != (b.lhs, b.rhs):
            raise ShapeMismatch("MinJoin premises must relate the same pair of terms")
        return Judgement(a.lhs, a.rhs, min(a.eps, b.eps), a.strict or b.strict)
    if rule in (SEQCOMP, PARCOMP):
        build = Seq if rule == SEQCOMP else Par
        out = _pair_rule(build, a, b, er.add(a.eps, b.eps), a.strict and b.strict)
        _types_agree(out, k)
        return out
    if rule == EQSUBST_L:
        if not a.strict:
            raise ShapeMismatch("EqSubstL needs a strict equality as first premise")
        if b.lhs != a.lhs:
            raise ShapeMismatch("EqSubstL: the equality must start from the judgement's left side")
        return Judgement(a.rhs, b.rhs, b.eps, b.strict)
    if rule == EQSUBST_R:
        if not a.strict:
            raise ShapeMismatch("EqSubstR needs a strict equality as first premise")
        if b.rhs != a.lhs:
            raise ShapeMismatch("EqSubstR: the equality must start from the judgement's right side")
        return Judgement(b.lhs, a.rhs, b.eps, b.strict)

    if rule in (IF_MAX, PAR_MAX):
        build = IfGate if rule == IF_MAX else Par
        out = _pair_rule(build, a, b, max(a.eps, b.eps), False)
        _types_agree(out, k)
        return out

    # ChainProd / ChainSum
    p, q = _prob(params, "p"), _prob(params, "q")
    if rule == CHAIN_PROD:
        if _types_agree(a, k)[0] != 0 or _types_agree(b, k)[0] != 0:
            raise ShapeMismatch("ChainProd premises must relate states")
        lhs, rhs = CondState(p, a.lhs, b.lhs), CondState(q, a.rhs, b.rhs)
    else:
        if _types_agree(a, k)[0] != 1 or _types_agree(b, k)[0] != 1:
            raise ShapeMismatch("ChainSum premises must relate maps out of one wire")
        lhs, rhs = ConvPair(p, a.lhs, b.lhs), ConvPair(q, a.rhs, b.rhs)
    out = Judgement(lhs, rhs, c_alpha(cfg.alpha, p, q, a.eps, b.eps))
    _types_agree(out, k)
    return out


def node(rule: str, params: dict, premises: Sequence[Derivation], cfg: TheoryConfig) -> Derivation:
    """A derivation node whose conclusion is computed rather than stated."""
    premises = list(premises)
    return Derivation(rule, dict(params), premises,
                      conclude(rule, params, [d.conclusion for d in premises], cfg))


def _bounds_agree(stated: Judgement, rebuilt: Judgement) -> bool:
    if stated.strict or rebuilt.strict:
        return stated.strict == rebuilt.strict
    return er.close(stated.eps, rebuilt.eps)


def check(d: Derivation, cfg: TheoryConfig) -> Judgement:
    """Verify ``d`` under ``cfg`` and return its conclusion, or raise a :class:`ProofError`."""
    _check(d, cfg, ())
    return d.conclusion


def _check(d: Derivation, cfg: TheoryConfig, path: tuple) -> None:
    for i, sub in enumerate(d.premises):
        _check(sub, cfg, path + (i,))
    try:
        rebuilt = conclude(d.rule, d.params, [s.conclusion for s in d.premises], cfg)
    except ProofError as exc:
        raise type(exc)(exc.message, path, d.rule) from None
    stated = d.conclusion
    if (stated.lhs, stated.rhs) != (rebuilt.lhs, rebuilt.rhs):
        raise ShapeMismatch(f"stated conclusion {stated} but the rule gives {rebuilt}", path, d.rule)
    if not _bounds_agree(stated, rebuilt):
        got = "eq" if stated.strict else er.render(stated.eps)
        want = "eq" if rebuilt.strict else er.render(rebuilt.eps)
        raise BoundMismatch(f"stated bound {got}, recomputed {want}", path, d.rule)
    d.verified = cfg


def bound_of(d: Derivation) -> float:
    """The root bound of a checked derivation; strict equalities report 0."""
    if d.verified is None:
        raise UncheckedDerivation("run check before reading the bound", (), d.rule)
    return d.conclusion.eps


# -- rewriting helpers used by the fuzz harness ------------------------------------


def restate(d: Derivation, cfg: TheoryConfig) -> Derivation:
    """Copy of ``d`` with every conclusion recomputed bottom-up."""
    premises = [restate(s, cfg) for s in d.premises]
    return node(d.rule, d.params, premises, cfg)


def at(d: Derivation, path: Sequence[int]) -> Derivation:
    for i in path:
        d = d.premises[i]
    return d


def substitute(d: Derivation, path: Sequence[int], new: Derivation) -> Derivation:
    """Copy of ``d`` with the subtree at ``path`` replaced (no recomputation)."""
    if not path:
        return new
    premises = list(d.premises)
    premises[path[0]] = substitute(premises[path[0]], path[1:], new)
    return replace(d, premises=premises)


def inflate(d: Derivation, path: Sequence[int], eps: float, cfg: TheoryConfig) -> Derivation:
    """Insert a Mono node weakening the subtree at ``path`` to ``eps`` and restate ancestors."""
    target = at(d, path)
    weakened = node(MONO, {"eps": eps}, [target], cfg)
    return _restate_path(substitute(d, path, weakened), tuple(path), cfg)


def _restate_path(d: Derivation, path: tuple, cfg: TheoryConfig) -> Derivation:
    if not path:
        return d
    premises = list(d.premises)
    premises[path[0]] = _restate_path(premises[path[0]], path[1:], cfg)
    return node(d.rule, d.params, premises, cfg)


def with_bound(d: Derivation, path: Sequence[int], eps: float) -> Derivation:
    """Copy of ``d`` whose node at ``path`` states the bound ``eps`` instead."""
    target = at(d, path)
    return substitute(d, path, replace(target, conclusion=replace(target.conclusion, eps=eps)))


# -- serialisation -----------------------------------------------------------------


def _param_to_json(key: str, value: Any) -> str:
    if key in _TERM_PARAMS:
        return show(value)
    if key == "eps":
        return er.render(value)
    return sm.format_rational(Fraction(value))


def _param_from_json(key: str, text: str, k: Theory) -> Any:
    if key in _TERM_PARAMS:
        return parse(text, k)
    if key == "eps":
        return er.parse(text)
    return sm.parse_rational(text)


def to_json(d: Derivation) -> dict:
    c = d.conclusion
    return {
        "rule": d.rule,
        "params": {key: _param_to_json(key, v) for key, v in d.params.items()},
        "premises": [to_json(s) for s in d.premises],
        "conclusion": {"lhs": show(c.lhs), "rhs": show(c.rhs),
                       "eps": "eq" if c.strict else er.render(c.eps)},
    }


def from_json(obj: dict, k: Theory) -> Derivation:
    """Rebuild a derivation; term strings are parsed in theory ``k``."""
    try:
        c = obj["conclusion"]
        eps_text = str(c["eps"])
        if eps_text == "eq":
            conclusion = strict(parse(c["lhs"], k), parse(c["rhs"], k))
        else:
            conclusion = Judgement(parse(c["lhs"], k), parse(c["rhs"], k), er.parse(eps_text))
        params = {key: _param_from_json(key, str(v), k) for key, v in obj.get("params", {}).items()}
        premises = [from_json(s, k) for s in obj.get("premises", [])]
        return Derivation(str(obj["rule"]), params, premises, conclusion)
    except (ParseError, TypeCheckError):
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDerivation(f"bad derivation document: {exc}") from exc


def dumps(d: Derivation) -> str:
    return json.dumps(to_json(d), indent=1, ensure_ascii=False)


def loads(text: str, k: Theory) -> Derivation:
    return from_json(json.loads(text), k)
