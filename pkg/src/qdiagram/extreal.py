"""Extended nonnegative reals as the quantale ``[0, inf]`` with reversed order.

Values are plain Python floats; ``math.inf`` is the only infinite element.
Signed intermediates (log-ratios) may also be ``-math.inf``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

INF = math.inf

#: Relative and absolute tolerances used for every float comparison.
REL_TOL = 1e-9
ABS_TOL = 1e-12

Rational = Union[Fraction, int]


class NegativeDivergence(ArithmeticError):
    """A divergence computation produced a clearly negative value."""


def check(x: float) -> float:
    """Validate an ExtReal: a non-NaN float in ``[0, inf]``."""
    if math.isnan(x) or x < 0:
        raise ValueError(f"not an extended nonnegative real: {x!r}")
    return float(x)


def add(x: float, y: float) -> float:
    if x == INF or y == INF:
        return INF
    return x + y


def qleq(x: float, y: float) -> bool:
    """Quantale order: ``x`` is below ``y`` iff ``x >= y`` as reals."""
    return x >= y


def qjoin(xs: Iterable[float]) -> float:
    """Join in the quantale, i.e. the real infimum; the empty join is ``inf``."""
    return min(xs, default=INF)


def scale_conv(p: Rational, x: float) -> float:
    """``p * x`` with the convention ``0 * inf = 0``."""
    if not 0 <= p <= 1:
        raise ValueError(f"weight out of [0, 1]: {p}")
    if p == 0:
        return 0.0
    if x == INF:
        return INF
    return float(p) * x


def log_ratio(a: Rational, b: Rational) -> float:
    """Natural ``log(a / b)`` with ``log(x/0) = inf`` and ``log(0/0) = 0``."""
    if a < 0 or b < 0:
        raise ValueError("log_ratio needs nonnegative arguments")
    if a == 0:
        return 0.0 if b == 0 else -INF
    if b == 0:
        return INF
    return math.log(Fraction(a) / Fraction(b))


def clamp(x: float) -> float:
    """Snap float noise in ``(-1e-9, 0)`` to zero; reject anything more negative."""
    if math.isnan(x):
        raise NegativeDivergence("divergence evaluated to NaN")
    if x < 0:
        if x > -1e-9:
            return 0.0
        raise NegativeDivergence(f"divergence evaluated to {x!r}")
    return x + 0.0  # drops the sign of -0.0


def close(x: float, y: float, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """Tolerance comparison; infinities must match exactly."""
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= max(rel * max(abs(x), abs(y)), abs_)


def render(x: float) -> str:
    """Decimal text that round-trips exactly, or ``inf``."""
    if x == INF:
        return "inf"
    if x == 0:
        return "0"
    return format(x, ".17g")


def parse(text: str) -> float:
    text = text.strip()
    if text in ("inf", "+inf", "Infinity"):
        return INF
    return check(float(text))
