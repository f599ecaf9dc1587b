"""Equational presentations of the two base theories, checked semantically.

Each schema maps a tuple of probabilities to a pair of terms that must denote the
same matrix. Derived parameters use the convention ``0/0 = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .diagram import Term, Theory, parse
from .semantics import evaluate
from .stochmat import format_rational

GRID = tuple(Fraction(x) for x in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"))


def safe_div(a: Fraction, b: Fraction) -> Fraction:
    """``a / b`` with ``0/0 = 1``."""
    if b == 0:
        if a != 0:
            raise ZeroDivisionError(f"{a}/0")
        return Fraction(1)
    return Fraction(a, 1) / b


@dataclass(frozen=True)
class Axiom:
    name: str
    theory: Theory
    arity: int
    sides: Callable[..., tuple[str, str]]

    def instance(self, *params: Fraction) -> tuple[Term, Term]:
        lhs, rhs = self.sides(*(format_rational(Fraction(p)) for p in params))
        return parse(lhs, self.theory), parse(rhs, self.theory)

    def holds(self, *params: Fraction) -> bool:
        lhs, rhs = self.instance(*params)
        return evaluate(lhs, self.theory) == evaluate(rhs, self.theory)

    def failures(self, grid: Sequence[Fraction] = GRID) -> list[tuple]:
        return [ps for ps in itertools.product(grid, repeat=self.arity) if not self.holds(*ps)]


def _r(x) -> str:
    return format_rational(Fraction(x))


# Selector-driven choice between two wires, with a biased coin as the selector.
def _choose(s: str) -> str:
    return f"((flip({s}) + id(2)) ; ifgate(id(1), id(1)))"


def _choose_states(s: str, p: str, q: str) -> str:
    return f"(flip({s}) ; copy ; (id(1) + ((id(1) + flip({p}) + flip({q})) ; ifgate(id(1), id(1)))))"


def _ifassoc(s: str, t: str) -> tuple[str, str]:
    s_, t_ = Fraction(s), Fraction(t)
    s_tilde = s_ * t_
    t_tilde = safe_div(s_ * (1 - t_), 1 - s_ * t_)
    lhs = f"({_choose(t)} + id(1)) ; {_choose(s)}"
    rhs = f"(id(1) + {_choose(_r(t_tilde))}) ; {_choose(_r(s_tilde))}"
    return lhs, rhs


def _ifdisintegration(r: str, p: str, q: str) -> tuple[str, str]:
    r_, p_, q_ = Fraction(r), Fraction(p), Fraction(q)
    r_tilde = r_ * p_ + (1 - r_) * q_
    p_tilde = safe_div(r_ * p_, r_tilde)
    q_tilde = safe_div(r_ * (1 - p_), 1 - r_tilde)
    lhs = _choose_states(r, p, q)
    rhs = f"{_choose_states(_r(r_tilde), _r(p_tilde), _r(q_tilde))} ; swap"
    return lhs, rhs


def _convassoc(p: str, q: str) -> tuple[str, str]:
    p_, q_ = Fraction(p), Fraction(q)
    p_tilde = p_ * q_
    q_tilde = safe_div(p_ - p_ * q_, 1 - p_ * q_)
    return (f"cc({p}) ; (cc({q}) + id(1))",
            f"cc({_r(p_tilde)}) ; (id(1) + cc({_r(q_tilde)}))")


CIRCUIT_AXIOMS: tuple[Axiom, ...] = tuple(Axiom(n, Theory.CIRCUIT, a, f) for n, a, f in [
    ("assoc", 0, lambda: ("copy ; (copy + id(1))", "copy ; (id(1) + copy)")),
    ("unit", 0, lambda: ("copy ; (del + id(1))", "id(1)")),
    ("comm", 0, lambda: ("copy ; swap", "copy")),
    ("and_assoc", 0, lambda: ("(and + id(1)) ; and", "(id(1) + and) ; and")),
    ("and_unit", 0, lambda: ("(flip(1) + id(1)) ; and", "id(1)")),
    ("and_comm", 0, lambda: ("swap ; and", "and")),
    ("notnot", 0, lambda: ("not ; not", "id(1)")),
    ("copyand", 0, lambda: ("copy ; and", "id(1)")),
    ("copynotand", 0, lambda: ("copy ; (not + id(1)) ; and", "del ; flip(0)")),
    ("andordist", 0, lambda: (
        "(id(1) + or) ; and",
        "(copy + id(2)) ; (id(1) + swap + id(1)) ; (and + and) ; or")),
    ("copyzero", 0, lambda: ("flip(0) ; copy", "flip(0) + flip(0)")),
    ("copyone", 0, lambda: ("flip(1) ; copy", "flip(1) + flip(1)")),
    ("andcopy", 0, lambda: (
        "and ; copy",
        "(copy + copy) ; (id(1) + swap + id(1)) ; (and + and)")),
    ("notcopy", 0, lambda: ("not ; copy", "copy ; (not + not)")),
    ("anddel", 0, lambda: ("and ; del", "del + del")),
    ("notdel", 0, lambda: ("not ; del", "del")),
    ("pdel", 1, lambda p: (f"flip({p}) ; del", "id(0)")),
    ("pnot", 1, lambda p: (f"flip({p}) ; not", f"flip({_r(1 - Fraction(p))})")),
    ("geninverse", 2, lambda p, q: (
        f"(flip({p}) + flip({q})) ; and", f"flip({_r(Fraction(p) * Fraction(q))})")),
    ("ifassoc", 2, _ifassoc),
    ("ifdisintegration", 3, _ifdisintegration),
])

CONVEX_AXIOMS: tuple[Axiom, ...] = tuple(Axiom(n, Theory.CONVEX, a, f) for n, a, f in [
    ("assoc", 0, lambda: ("(cop + id(1)) ; cop", "(id(1) + cop) ; cop")),
    ("comm", 0, lambda: ("swap ; cop", "cop")),
    ("unit", 0, lambda: ("(del + id(1)) ; cop", "id(1)")),
    ("convassoc", 2, _convassoc),
    ("convcomm", 1, lambda p: (f"cc({p}) ; swap", f"cc({_r(1 - Fraction(p))})")),
    ("natdel", 1, lambda p: (f"del ; cc({p})", "del + del")),
    ("zprob", 0, lambda: ("cc(0)", "del + id(1)")),
    ("idemp", 1, lambda p: (f"cc({p}) ; cop", "id(1)")),
    ("cccop", 1, lambda p: (
        f"cop ; cc({p})", f"(cc({p}) + cc({p})) ; (id(1) + swap + id(1)) ; (cop + cop)")),
])

AXIOMS = {Theory.CIRCUIT: CIRCUIT_AXIOMS, Theory.CONVEX: CONVEX_AXIOMS}


def validate(axioms: Iterable[Axiom], grid: Sequence[Fraction] = GRID) -> dict[str, list[tuple]]:
    """Failing parameter tuples per axiom; empty lists everywhere means all hold."""
    return {f"{ax.theory.value}/{ax.name}": ax.failures(grid) for ax in axioms}
