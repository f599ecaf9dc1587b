"""Recursive-descent parser for the textual term grammar.

::

    term     := seqterm
    seqterm  := parterm (";" parterm)*
    parterm  := atom ("+" atom)*
    atom     := "(" term ")" | "id(" nat ")" | "swap" | "swap(" nat "," nat ")"
              | genname | genname "(" rational ")" | "or" | "codiag(" nat "," nat ")"
              | "ifgate(" term "," term ")" | "condstate(" rational "," term "," term ")"
              | "convcomb(" rational "," term "," term ")"
              | "convpair(" rational "," term "," term ")"
    rational := int | int "/" int

``;`` binds looser than ``+``; both associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .terms import (
    SIGNATURES,
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
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass
class _Token:
    kind: str  # "name", "int", or the punctuation character itself
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s+|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<punct>[();+,/])")

_CIRCUIT_MACROS = {"or", "ifgate", "condstate", "convcomb"}
_CONVEX_MACROS = {"convpair", "codiag"}


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        if m.lastgroup == "name":
            tokens.append(_Token("name", text, line, col))
        elif m.lastgroup == "int":
            tokens.append(_Token("int", text, line, col))
        elif m.lastgroup == "punct":
            tokens.append(_Token(text, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, src: str, theory: Theory):
        self.tokens = _tokenize(src)
        self.i = 0
        self.theory = theory

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def take(self, kind: str) -> _Token:
        tok = self.tok
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        self.i += 1
        return tok

    def peek(self, kind: str) -> bool:
        return self.tok.kind == kind

    def term(self) -> Term:
        t = self.parterm()
        while self.peek(";"):
            self.take(";")
            t = Seq(t, self.parterm())
        return t

    def parterm(self) -> Term:
        t = self.atom()
        while self.peek("+"):
            self.take("+")
            t = Par(t, self.atom())
        return t

    def nat(self) -> int:
        return int(self.take("int").text)

    def rational(self) -> Fraction:
        start = self.tok
        num = self.nat()
        den = 1
        if self.peek("/"):
            self.take("/")
            den = self.nat()
            if den == 0:
                raise self.error("zero denominator", start)
        return Fraction(num, den)

    def prob(self) -> Fraction:
        start = self.tok
        p = self.rational()
        if not 0 <= p <= 1:
            raise self.error(f"parameter {p} is outside [0, 1]", start)
        return p

    def atom(self) -> Term:
        if self.peek("("):
            self.take("(")
            t = self.term()
            self.take(")")
            return t
        tok = self.take("name")
        name = tok.text
        if name == "id":
            self.take("(")
            n = self.nat()
            self.take(")")
            return Id(n)
        if name == "swap":
            if not self.peek("("):
                return SwapElem()
            if self.theory is not Theory.CONVEX:
                raise self.error("block swaps swap(n, m) only exist in the convex theory", tok)
            self.take("(")
            n = self.nat()
            self.take(",")
            m = self.nat()
            self.take(")")
            return Swap(n, m)
        if name in _CIRCUIT_MACROS | _CONVEX_MACROS:
            wanted = Theory.CIRCUIT if name in _CIRCUIT_MACROS else Theory.CONVEX
            if wanted is not self.theory:
                raise self.error(f"{name} is not available in the {self.theory.value} theory", tok)
            return self.macro(name)
        sig = SIGNATURES[self.theory].get(name)
        if sig is None:
            raise self.error(f"unknown generator {name!r} for the {self.theory.value} theory", tok)
        if sig[0]:
            self.take("(")
            p = self.prob()
            self.take(")")
            return Gen(name, p)
        return Gen(name)

    def macro(self, name: str) -> Term:
        if name == "or":
            return Or()
        self.take("(")
        if name == "codiag":
            n = self.nat()
            self.take(",")
            m = self.nat()
            self.take(")")
            return Codiag(n, m)
        if name == "ifgate":
            f1 = self.term()
            self.take(",")
            f0 = self.term()
            self.take(")")
            return IfGate(f1, f0)
        p = self.prob()
        self.take(",")
        a = self.term()
        self.take(",")
        b = self.term()
        self.take(")")
        cls = {"condstate": CondState, "convcomb": ConvComb, "convpair": ConvPair}[name]
        return cls(p, a, b)


def parse(src: str, theory: Theory) -> Term:
    """Parse ``src`` as a term of ``theory``; raises :class:`ParseError`."""
    p = _Parser(src, theory)
    t = p.term()
    if not p.peek("eof"):
        raise p.error(f"unexpected {p.tok.text!r}")
    return t
