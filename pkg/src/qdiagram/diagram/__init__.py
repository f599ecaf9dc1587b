"""Term language for the circuit and convex string-diagram calculi."""

from .expand import bundle_copy, copies, expand, if_bundle, permute
from .parse import ParseError, parse
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
    Swap,
    SwapElem,
    Term,
    Theory,
    TypeCheckError,
    is_core,
    par,
    seq,
    show,
    typecheck,
)

__all__ = [
    "Codiag", "CondState", "ConvComb", "ConvPair", "Gen", "Id", "IfGate", "Or", "Par",
    "ParseError", "Seq", "Swap", "SwapElem", "Term", "Theory", "TypeCheckError",
    "bundle_copy", "copies", "expand", "if_bundle", "is_core", "par", "parse", "permute",
    "seq", "show", "typecheck",
]
