"""Exact-rational distributions and column-stochastic matrices.

Entry ``(i, j)`` of an ``m x n`` matrix is the probability of output ``i`` given
input ``j``.  For bit-string objects the basis is ordered with bit value 1 before
bit value 0, first wire most significant, so index 0 is the all-ones string.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

Distribution = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class MatrixError(ValueError):
    """Malformed matrix, dimension mismatch or bad index."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise MatrixError(f"floats are not exact rationals: {x!r}")
    return Fraction(x)


def distribution(weights: Iterable) -> Distribution:
    """Validate and freeze a probability vector (exact sum 1, entries in [0, 1])."""
    ws = tuple(as_fraction(w) for w in weights)
    if not ws:
        raise MatrixError("a distribution needs at least one outcome")
    if any(w < 0 or w > 1 for w in ws):
        raise MatrixError(f"weights outside [0, 1]: {ws}")
    if sum(ws) != 1:
        raise MatrixError(f"weights sum to {sum(ws)}, not 1")
    return ws


def uniform(n: int) -> Distribution:
    return (Fraction(1, n),) * n


def dirac(n: int, i: int) -> Distribution:
    return tuple(ONE if k == i else ZERO for k in range(n))


@dataclass(frozen=True)
class StochMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise MatrixError("negative dimension")
        if self.rows == 0 and self.cols > 0:
            raise MatrixError("columns of a matrix with no rows cannot sum to 1")
        if self.rows == 0 or self.cols == 0:
            if any(len(r) for r in self.entries):
                raise MatrixError("empty matrices carry no entries")
            object.__setattr__(self, "entries", ())
            return
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise MatrixError(f"entries do not form a {self.rows}x{self.cols} array")
        for j in range(self.cols):
            col = [self.entries[i][j] for i in range(self.rows)]
            if any(x < 0 or x > 1 for x in col):
                raise MatrixError(f"column {j} has entries outside [0, 1]")
            if sum(col) != 1:
                raise MatrixError(f"column {j} sums to {sum(col)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "StochMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        return cls(m, n, tuple(tuple(as_fraction(x) for x in r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "StochMatrix":
        if not columns:
            return empty(rows or 0, 0)
        m = len(columns[0])
        return cls(m, len(columns), tuple(
            tuple(as_fraction(c[i]) for c in columns) for i in range(m)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    @property
    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0

    def tolist(self) -> list[list[Fraction]]:
        if self.is_empty:
            return [[] for _ in range(self.rows)]
        return [list(r) for r in self.entries]

    def __str__(self) -> str:
        return format_matrix(self)


def _trusted(rows: int, cols: int, entries) -> StochMatrix:
    # Skips validation; callers guarantee stochasticity by construction.
    m = object.__new__(StochMatrix)
    if rows == 0 or cols == 0:
        entries = ()
    object.__setattr__(m, "rows", rows)
    object.__setattr__(m, "cols", cols)
    object.__setattr__(m, "entries", entries)
    return m


def empty(rows: int, cols: int) -> StochMatrix:
    if rows and cols:
        raise MatrixError("only matrices with a zero dimension are empty")
    if cols and not rows:
        raise MatrixError("columns of a matrix with no rows cannot sum to 1")
    return _trusted(rows, cols, ())


def identity(n: int) -> StochMatrix:
    return _trusted(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))


def permutation(targets: Sequence[int]) -> StochMatrix:
    """Permutation matrix sending basis vector ``j`` to ``targets[j]``."""
    n = len(targets)
    if sorted(targets) != list(range(n)):
        raise MatrixError(f"not a permutation: {targets}")
    rows = [[ZERO] * n for _ in range(n)]
    for j, i in enumerate(targets):
        rows[i][j] = ONE
    return _trusted(n, n, tuple(map(tuple, rows)))


def matmul(g: StochMatrix, f: StochMatrix) -> StochMatrix:
    """The composite ``f ; g`` (first ``f``, then ``g``), i.e. the product ``g f``."""
    if g.cols != f.rows:
        raise MatrixError(f"cannot compose {f.rows}x{f.cols} then {g.rows}x{g.cols}")
    m, n, k = g.rows, f.cols, f.rows
    if m == 0 or n == 0:
        return _trusted(m, n, ())
    if k == 0:
        # Only reachable for non-stochastic shapes; an honest zero product would violate column sums.
        raise MatrixError("composite through the empty object is not stochastic")
    fcols = [[f.entries[r][j] for r in range(k)] for j in range(n)]
    out = tuple(
        tuple(sum((gi[r] * fc[r] for r in range(k) if gi[r] and fc[r]), ZERO) for fc in fcols)
        for gi in g.entries)
    return _trusted(m, n, out)


def kron(a: StochMatrix, b: StochMatrix) -> StochMatrix:
    m, n = a.rows * b.rows, a.cols * b.cols
    if m == 0 or n == 0:
        return _trusted(m, n, ())
    out = tuple(
        tuple(ai[j1] * bi[j2] for j1 in range(a.cols) for j2 in range(b.cols))
        for ai in a.entries for bi in b.entries)
    return _trusted(m, n, out)


def dsum(a: StochMatrix, b: StochMatrix) -> StochMatrix:
    m, n = a.rows + b.rows, a.cols + b.cols
    if m == 0 or n == 0:
        return _trusted(m, n, ())
    top = tuple(_row(a, i) + (ZERO,) * b.cols for i in range(a.rows))
    bottom = tuple((ZERO,) * a.cols + _row(b, i) for i in range(b.rows))
    return _trusted(m, n, top + bottom)


def _row(a: StochMatrix, i: int) -> Tuple[Fraction, ...]:
    return a.entries[i] if a.cols else ()


def swap_kron_dims(a: int, b: int) -> StochMatrix:
    """Symmetry of the Kronecker product on objects of dimensions ``a`` and ``b``."""
    return permutation([j * a + i for i in range(a) for j in range(b)])


def swap_kron(n: int, m: int) -> StochMatrix:
    """Symmetry exchanging an ``n``-wire bundle with an ``m``-wire bundle."""
    return swap_kron_dims(2 ** n, 2 ** m)


def swap_dsum(n: int, m: int) -> StochMatrix:
    return permutation([m + j for j in range(n)] + list(range(m)))


def codiag(n: int, m: int) -> StochMatrix:
    """The ``m x nm`` matrix ``[I_m | ... | I_m]`` with ``n`` blocks."""
    if n < 1 or m < 0:
        raise MatrixError("codiag needs n >= 1 and m >= 0")
    if m == 0:
        return _trusted(0, 0, ())
    return _trusted(m, n * m, tuple(
        tuple(ONE if j % m == i else ZERO for j in range(n * m)) for i in range(m)))


def column(a: StochMatrix, j: int) -> Distribution:
    if not 0 <= j < a.cols or a.rows < 1:
        raise MatrixError(f"column {j} out of range for {a.rows}x{a.cols} matrix")
    return tuple(a.entries[i][j] for i in range(a.rows))


def columns(a: StochMatrix) -> list[Distribution]:
    return [column(a, j) for j in range(a.cols)] if a.rows else []


def state(mu: Sequence) -> StochMatrix:
    """A distribution as a one-column matrix."""
    return StochMatrix.from_columns([distribution(mu)])


def log2_exact(n: int) -> int:
    """Exponent ``k`` with ``2**k == n``; raises if ``n`` is not a power of two."""
    if n < 1 or n & (n - 1):
        raise MatrixError(f"{n} is not a power of two")
    return n.bit_length() - 1


def restrict_first_bit(f: StochMatrix, bit: int) -> StochMatrix:
    """Columns of ``f`` whose first input bit equals ``bit``."""
    k = log2_exact(f.cols)
    if k < 1:
        raise MatrixError("need at least one input wire to restrict")
    half = f.cols // 2
    lo = 0 if bit == 1 else half
    return _trusted(f.rows, half, tuple(r[lo:lo + half] for r in f.entries))


def _renormalize(ws: Sequence[Fraction], mass: Fraction) -> Distribution:
    if mass == 0:
        return uniform(len(ws))
    return tuple(w / mass for w in ws)


def cond_split_bit(mu: Sequence) -> tuple[Fraction, Distribution, Distribution]:
    """Split a distribution on bit strings by its first bit.

    Returns the mass ``p`` of the strings starting with 1 and the two conditionals;
    a half with zero mass gets the uniform conditional.
    """
    mu = distribution(mu)
    k = log2_exact(len(mu))
    if k < 1:
        raise MatrixError("need at least one bit to split")
    half = len(mu) // 2
    hi, lo = mu[:half], mu[half:]
    p = sum(hi, ZERO)
    return p, _renormalize(hi, p), _renormalize(lo, 1 - p)


def cond_split_first(mu: Sequence) -> tuple[Fraction, Distribution]:
    """Split off the first outcome; the rest is renormalized (uniform if massless)."""
    mu = distribution(mu)
    if len(mu) < 2:
        raise MatrixError("need at least two outcomes to split")
    p = mu[0]
    return p, _renormalize(mu[1:], 1 - p)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixError(f"bad rational {text!r}") from exc


def format_matrix(a: StochMatrix) -> str:
    lines = [f"{a.rows} {a.cols}"]
    if a.cols:
        lines += [" ".join(format_rational(x) for x in r) for r in a.entries]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> StochMatrix:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise MatrixError("empty matrix text")
    try:
        m, n = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise MatrixError(f"bad header {lines[0]!r}") from exc
    if m == 0 or n == 0:
        return empty(m, n)
    body = lines[1:]
    if len(body) != m:
        raise MatrixError(f"expected {m} rows, got {len(body)}")
    rows = [[parse_rational(t) for t in ln.split()] for ln in body]
    return StochMatrix(m, n, tuple(map(tuple, rows)))
