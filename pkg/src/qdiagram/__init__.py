"""Quantitative string-diagram calculi for stochastic circuits and convex maps.

Terms are interpreted as exact rational stochastic matrices; judgements
``f =_eps g`` bound a KL or Rényi divergence and are certified by derivations.
"""

from .diagram import Theory, parse, show, typecheck
from .divergence import c_alpha, div_max, kl, parse_order, renyi
from .semantics import evaluate

__all__ = [
    "Theory", "c_alpha", "div_max", "evaluate", "kl", "parse", "parse_order", "renyi",
    "show", "typecheck",
]
