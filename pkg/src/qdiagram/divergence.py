"""KL and Rényi divergences, their column-max lift, and the chain-rule combinator.

Orders are exact rationals (``Fraction``) or ``math.inf``; order 1 is KL.
All logarithms are natural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

from . import stochmat as sm
from .extreal import INF, add, clamp, log_ratio, scale_conv
from .stochmat import StochMatrix

Order = Union[Fraction, float]

ORDERS: tuple = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3), INF)


class DivergenceError(ValueError):
    """Arguments of mismatched size or an invalid order."""


def parse_order(text: str) -> Order:
    """Read ``0``, ``1``, ``inf``, ``a/b`` or a decimal such as ``0.5``."""
    text = text.strip().lower()
    if text in ("inf", "infinity", "+inf"):
        return INF
    try:
        alpha = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DivergenceError(f"bad order {text!r}") from exc
    if alpha < 0:
        raise DivergenceError(f"orders are nonnegative, got {text!r}")
    return alpha


def format_order(alpha: Order) -> str:
    return "inf" if alpha == INF else str(alpha)


def _order(alpha) -> Order:
    if alpha == INF:
        return INF
    if isinstance(alpha, float):
        raise DivergenceError("finite orders must be exact rationals")
    alpha = Fraction(alpha)
    if alpha < 0:
        raise DivergenceError(f"negative order {alpha}")
    return alpha


def _pair(mu: Sequence, nu: Sequence) -> tuple[sm.Distribution, sm.Distribution]:
    mu, nu = sm.distribution(mu), sm.distribution(nu)
    if len(mu) != len(nu):
        raise DivergenceError(f"distributions of lengths {len(mu)} and {len(nu)}")
    return mu, nu


def _logsumexp(terms: list[float]) -> float:
    if not terms:
        return -INF
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def kl(mu: Sequence, nu: Sequence) -> float:
    mu, nu = _pair(mu, nu)
    if mu == nu:
        return 0.0
    total = []
    for a, b in zip(mu, nu):
        if a == 0:
            continue
        if b == 0:
            return INF
        total.append(float(a) * log_ratio(a, b))
    return clamp(math.fsum(total))


def renyi(alpha, mu: Sequence, nu: Sequence) -> float:
    alpha = _order(alpha)
    mu, nu = _pair(mu, nu)
    if mu == nu:
        return 0.0
    if alpha == 1:
        return kl(mu, nu)
    if alpha == INF:
        return clamp(max(log_ratio(a, b) for a, b in zip(mu, nu) if a > 0))
    if alpha == 0:
        mass = sum((b for a, b in zip(mu, nu) if a > 0), Fraction(0))
        return INF if mass == 0 else clamp(-math.log(mass))
    a_ = float(alpha)
    terms = []
    for a, b in zip(mu, nu):
        if a == 0:
            continue
        if b == 0:
            if alpha > 1:
                return INF
            continue
        terms.append(a_ * math.log(a) - (a_ - 1) * math.log(b))
    if not terms:
        return INF
    return clamp(_logsumexp(terms) / (a_ - 1))


def div_max(alpha, a: StochMatrix, b: StochMatrix) -> float:
    """Largest column divergence; ``0`` when the matrices are empty."""
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise DivergenceError(f"matrices {a.rows}x{a.cols} and {b.rows}x{b.cols}")
    if a.is_empty:
        return 0.0
    return max(renyi(alpha, ca, cb) for ca, cb in zip(sm.columns(a), sm.columns(b)))


def c_alpha(alpha, p, q, eps: float, delta: float) -> float:
    """Divergence of two joint distributions from the split weights ``p``, ``q`` and
    upper bounds ``eps``, ``delta`` on the conditional divergences."""
    alpha = _order(alpha)
    p, q = Fraction(p), Fraction(q)
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise DivergenceError("split weights must lie in [0, 1]")
    if p == q and eps == 0 and delta == 0:
        return 0.0
    branches = ((p, q, eps), (1 - p, 1 - q, delta))
    if alpha == 1:
        return add(kl([p, 1 - p], [q, 1 - q]), add(scale_conv(p, eps), scale_conv(1 - p, delta)))
    if alpha == INF:
        best = -INF
        for w, v, e in branches:
            if w == 0:
                continue
            lr = log_ratio(w, v)
            best = max(best, INF if INF in (lr, e) else lr + e)
        return clamp(best)
    a_ = float(alpha)
    terms = []
    for w, v, e in branches:
        if w == 0:
            continue
        if alpha > 1:
            if v == 0 or e == INF:
                return INF
            terms.append(a_ * math.log(w) - (a_ - 1) * math.log(v) + (a_ - 1) * e)
        else:
            if v == 0 or e == INF:
                continue
            terms.append(a_ * math.log(w) + (1 - a_) * math.log(v) - (1 - a_) * e)
    if not terms:
        return INF
    return clamp(_logsumexp(terms) / (a_ - 1))


def chain_oracle_prod(alpha, mu: Sequence, nu: Sequence) -> tuple[float, float]:
    """Direct divergence and its first-bit chain-rule decomposition, for comparison."""
    mu, nu = _pair(mu, nu)
    p, mu1, mu0 = sm.cond_split_bit(mu)
    q, nu1, nu0 = sm.cond_split_bit(nu)
    rhs = c_alpha(alpha, p, q, renyi(alpha, mu1, nu1), renyi(alpha, mu0, nu0))
    return renyi(alpha, mu, nu), rhs


def chain_oracle_sum(alpha, mu: Sequence, nu: Sequence) -> tuple[float, float]:
    """Direct divergence and its first-outcome chain-rule decomposition."""
    mu, nu = _pair(mu, nu)
    p, mu_rest = sm.cond_split_first(mu)
    q, nu_rest = sm.cond_split_first(nu)
    rhs = c_alpha(alpha, p, q, 0.0, renyi(alpha, mu_rest, nu_rest))
    return renyi(alpha, mu, nu), rhs
