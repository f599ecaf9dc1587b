"""Seeded random inputs and the property suites run by ``qdiagram fuzz``.

Every trial draws from its own PCG64 stream seeded by ``(seed, trial)``, so
results do not depend on which trials ran before.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

import numpy as np

from . import extreal as er
from . import stochmat as sm
from .diagram import (
    Codiag,
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
    typecheck,
)
from .divergence import ORDERS, Order, chain_oracle_prod, chain_oracle_sum, div_max, format_order
from .proofs import (
    CHAIN_PROD,
    CHAIN_SUM,
    BoundMismatch,
    Derivation,
    ProofError,
    TheoryConfig,
    bound_of,
    check,
    inflate,
    with_bound,
)
from .semantics import if_matrix, matrix_term_circuit, matrix_term_convex
from .stochmat import StochMatrix
from .synth import derive

WEIGHT_MAX = 2 ** 16
PROBS = tuple(Fraction(x) for x in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


# -- random data -----------------------------------------------------------------


def random_distribution(rng: np.random.Generator, n: int, zero_rate: float = 0.2) -> sm.Distribution:
    """Exact distribution from integer weights in ``[0, 2^16]``, some forced to zero."""
    weights = [int(w) for w in rng.integers(0, WEIGHT_MAX, size=n, endpoint=True)]
    weights = [0 if rng.random() < zero_rate else w for w in weights]
    total = sum(weights)
    if total == 0:
        weights[int(rng.integers(n))] = 1
        total = 1
    return tuple(Fraction(w, total) for w in weights)


def random_matrix(rng: np.random.Generator, rows: int, cols: int, zero_rate: float = 0.2) -> StochMatrix:
    if cols == 0:
        return sm.empty(rows, 0)
    return StochMatrix.from_columns([random_distribution(rng, rows, zero_rate) for _ in range(cols)], rows)


def random_prob(rng: np.random.Generator) -> Fraction:
    if rng.random() < 0.5:
        return PROBS[int(rng.integers(len(PROBS)))]
    den = int(rng.integers(1, 13))
    return Fraction(int(rng.integers(0, den + 1)), den)


def random_shape(rng: np.random.Generator, kind: Theory, max_wires: int, max_dim: int) -> tuple[int, int]:
    """``(rows, cols)`` of a random matrix denotable in ``kind``."""
    if kind is Theory.CIRCUIT:
        n, m = (int(x) for x in rng.integers(0, max_wires + 1, size=2))
        return 2 ** m, 2 ** n
    cols = int(rng.integers(0, max_dim + 1))
    return int(rng.integers(1, max_dim + 1)), cols


# -- random terms ------------------------------------------------------------------

_CIRCUIT_UNARY = ("id", "not", "copy", "del", "convcomb")
_CIRCUIT_BINARY = ("and", "swap", "or")
_CONVEX_UNARY = ("id", "cc", "convpair")
_CONVEX_BINARY = ("cop", "swap", "codiag")


def _atom(rng: np.random.Generator, kind: Theory, width: int, cap: int) -> tuple[Term, int]:
    """A single gate consuming some of the first ``width`` wires: ``(term, inputs)``."""
    if kind is Theory.CIRCUIT:
        if width >= 3 and rng.random() < 0.1:
            return IfGate(Id(1), Id(1)), 3
        if width >= 2 and rng.random() < 0.4:
            name = _CIRCUIT_BINARY[int(rng.integers(3))]
            return {"and": Gen("and"), "swap": SwapElem(), "or": Or()}[name], 2
        if width == 0 or rng.random() < 0.1:
            return Gen("flip", random_prob(rng)), 0
        name = _CIRCUIT_UNARY[int(rng.integers(len(_CIRCUIT_UNARY)))]
        if name == "copy" and cap < 1:
            name = "del"
        if name == "convcomb":
            return ConvComb(random_prob(rng), Gen("not"), Id(1)), 1
        return (Id(1) if name == "id" else Gen(name)), 1
    if width >= 2 and rng.random() < 0.4:
        name = _CONVEX_BINARY[int(rng.integers(3))]
        if name == "swap":
            return (SwapElem() if rng.random() < 0.5 else Swap(1, 1)), 2
        return (Gen("cop") if name == "cop" else Codiag(2, 1)), 2
    if width == 0 or rng.random() < 0.1:
        return Gen("del"), 0
    name = _CONVEX_UNARY[int(rng.integers(len(_CONVEX_UNARY)))]
    if cap < 1:
        name = "id"
    if name == "cc":
        return Gen("cc", random_prob(rng)), 1
    if name == "convpair":
        return ConvPair(random_prob(rng), Id(1), Gen("cc", random_prob(rng))), 1
    return Id(1), 1


def _layer(rng: np.random.Generator, kind: Theory, n: int, max_wires: int) -> Term:
    parts: list[Term] = []
    left, out = n, 0
    while left > 0 or (not parts and rng.random() < 0.5):
        t, used = _atom(rng, kind, left, max_wires - out - left)
        parts.append(t)
        left -= used
        out += typecheck(t, kind)[1]
        if not left:
            break
    if not parts:
        return Id(0)
    term = parts[0]
    for t in parts[1:]:
        term = Par(term, t)
    return term


def random_term(rng: np.random.Generator, kind: Theory, dom: int, depth: int = 3,
                max_wires: int = 4) -> Term:
    """Well-typed random term with domain ``dom`` mixing core gates and macros."""
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        return _layer(rng, kind, dom, max_wires)
    if roll < 0.65:
        left = random_term(rng, kind, dom, depth - 1, max_wires)
        cod = typecheck(left, kind)[1]
        return Seq(left, random_term(rng, kind, cod, depth - 1, max_wires))
    split = int(rng.integers(0, dom + 1))
    left = random_term(rng, kind, split, depth - 1, max_wires)
    room = max(max_wires - typecheck(left, kind)[1], dom - split)
    return Par(left, random_term(rng, kind, dom - split, depth - 1, room))


# -- property suites ------------------------------------------------------------------


def _leq(x: float, y: float) -> bool:
    return x <= y or er.close(x, y)


def chain_prod_case(rng: np.random.Generator, alpha: Order, max_wires: int = 3,
                    zero_rate: float = 0.2) -> Optional[str]:
    n = 2 ** int(rng.integers(1, max_wires + 2))
    mu, nu = random_distribution(rng, n, zero_rate), random_distribution(rng, n, zero_rate)
    lhs, rhs = chain_oracle_prod(alpha, mu, nu)
    if not er.close(lhs, rhs):
        return f"product chain rule: renyi={lhs!r} but decomposition={rhs!r} for {mu} vs {nu}"
    return None


def chain_sum_case(rng: np.random.Generator, alpha: Order, max_dim: int = 6,
                   zero_rate: float = 0.2) -> Optional[str]:
    n = int(rng.integers(2, max(max_dim, 2) + 1))
    mu, nu = random_distribution(rng, n, zero_rate), random_distribution(rng, n, zero_rate)
    lhs, rhs = chain_oracle_sum(alpha, mu, nu)
    if not er.close(lhs, rhs):
        return f"sum chain rule: renyi={lhs!r} but decomposition={rhs!r} for {mu} vs {nu}"
    return None


def enrichment_case(rng: np.random.Generator, alpha: Order, max_wires: int = 2, max_dim: int = 4,
                    zero_rate: float = 0.2) -> Optional[str]:
    """Composition laws for the column-max divergence, one random instance of each."""
    def rm(r, c):
        return random_matrix(rng, r, c, zero_rate)

    def d(a, b):
        return div_max(alpha, a, b)

    # circuit (Kronecker) side
    n, k, m = (2 ** int(x) for x in rng.integers(0, max_wires + 1, size=3))
    f, f2, g, g2 = rm(k, n), rm(k, n), rm(m, k), rm(m, k)
    seq = d(sm.matmul(g, f), sm.matmul(g2, f2))
    if not _leq(seq, er.add(d(f, f2), d(g, g2))):
        return f"sequential composition increased the divergence: {seq} > {d(f, f2)} + {d(g, g2)}"
    kron = d(sm.kron(f, g), sm.kron(f2, g2))
    if not _leq(kron, er.add(d(f, f2), d(g, g2))):
        return f"Kronecker product increased the divergence: {kron}"
    u, v = (2 ** int(x) for x in rng.integers(0, max_wires + 1, size=2))
    a1, b1, a0, b0 = rm(m, u), rm(m, u), rm(m, v), rm(m, v)
    gate = d(if_matrix(a1, a0), if_matrix(b1, b0))
    if not er.close(gate, max(d(a1, b1), d(a0, b0))):
        return f"if-gate divergence {gate} differs from the max of its branches"

    # convex (direct sum) side
    n, k, m = (int(x) for x in rng.integers(1, max_dim + 1, size=3))
    f, f2, g, g2 = rm(k, n), rm(k, n), rm(m, k), rm(m, k)
    seq = d(sm.matmul(g, f), sm.matmul(g2, f2))
    if not _leq(seq, er.add(d(f, f2), d(g, g2))):
        return f"sequential composition increased the divergence: {seq}"
    h_rows, h_cols = int(rng.integers(1, max_dim + 1)), int(rng.integers(0, max_dim + 1))
    h, h2 = rm(h_rows, h_cols), rm(h_rows, h_cols)
    ds = d(sm.dsum(f, h), sm.dsum(f2, h2))
    if not er.close(ds, max(d(f, f2), d(h, h2))):
        return f"direct sum divergence {ds} differs from the max of its blocks"
    if not _leq(ds, er.add(d(f, f2), d(h, h2))):
        return f"direct sum increased the divergence: {ds}"
    return None


def canonical_term(kind: Theory, a: StochMatrix) -> Term:
    return matrix_term_circuit(a) if kind is Theory.CIRCUIT else matrix_term_convex(a)


def zero_branches(d: Derivation) -> bool:
    """Whether a chain-rule node splits off a branch of probability zero."""
    return any(node.rule in (CHAIN_PROD, CHAIN_SUM) and
               ({node.params["p"], node.params["q"]} & {0, 1})
               for _, node in d.nodes())


@dataclass
class TightnessResult:
    bound: float
    exact: float
    zero_branch: bool
    derivation: Derivation


def tightness_case(rng: np.random.Generator, cfg: TheoryConfig, rows: int, cols: int,
                   zero_rate: float = 0.2) -> TightnessResult:
    a, b = random_matrix(rng, rows, cols, zero_rate), random_matrix(rng, rows, cols, zero_rate)
    f = canonical_term(cfg.kind, a)
    # Pad one side so the root-level semantic gluing is exercised too.
    g = Seq(canonical_term(cfg.kind, b), Id(typecheck(f, cfg.kind)[1]))
    d = derive(cfg, f, g)
    check(d, cfg)
    return TightnessResult(bound_of(d), div_max(cfg.alpha, a, b), zero_branches(d), d)


def tightness_failure(r: TightnessResult) -> Optional[str]:
    if not er.close(r.bound, r.exact):
        return f"synthesized bound {r.bound!r} but the column-max divergence is {r.exact!r}"
    return None


def perturbation_case(rng: np.random.Generator, d: Derivation, cfg: TheoryConfig,
                      deflate: bool) -> Optional[str]:
    """Weaken or undercut a random node of an accepted derivation.

    Returns ``None`` on the expected verdict, an explanation otherwise, and the
    string ``"skip"`` when no node qualifies.
    """
    loose = [(p, n) for p, n in d.nodes() if not n.conclusion.strict]
    if deflate:
        loose = [(p, n) for p, n in loose if n.conclusion.eps > 1e-4]
    if not loose:
        return "skip"
    path, target = loose[int(rng.integers(len(loose)))]
    eps = target.conclusion.eps
    if deflate:
        lowered = float(rng.uniform(0, 1e3)) if eps == math.inf else eps * float(rng.uniform(0, 0.99))
        try:
            check(with_bound(d, path, lowered), cfg)
        except BoundMismatch as exc:
            if exc.path != path:
                return f"undercut at {path} reported at {exc.path}"
            return None
        except ProofError as exc:
            return f"undercut bound rejected with the wrong error: {exc}"
        return f"undercutting node {path} from {eps} to {lowered} was accepted"
    raised = math.inf if rng.random() < 0.1 else eps + float(rng.exponential(1.0))
    try:
        weakened = inflate(d, path, raised, cfg)
        check(weakened, cfg)
    except ProofError as exc:
        return f"inflating node {path} to {raised} was rejected: {exc}"
    if not _leq(bound_of(d), bound_of(weakened)):
        return f"inflation lowered the root bound from {bound_of(d)} to {bound_of(weakened)}"
    return None


# -- driver ----------------------------------------------------------------------------


@dataclass
class FuzzConfig:
    trials: int = 1000
    seed: int = 0
    max_wires: int = 3
    max_dim: int = 6
    zero_rate: float = 0.2
    kinds: tuple = (Theory.CIRCUIT, Theory.CONVEX)
    orders: tuple = ORDERS


@dataclass
class FuzzReport:
    trials: int = 0
    checks: int = 0
    counterexample: Optional[str] = None
    zero_branch_trials: int = 0
    log: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _trial(cfg: FuzzConfig, trial: int) -> Iterator[tuple[str, Optional[str], bool]]:
    rng = trial_rng(cfg.seed, trial)
    for alpha in cfg.orders:
        tag = f"alpha={format_order(alpha)}"
        yield f"chain-prod {tag}", chain_prod_case(rng, alpha, cfg.max_wires, cfg.zero_rate), False
        yield f"chain-sum {tag}", chain_sum_case(rng, alpha, cfg.max_dim, cfg.zero_rate), False
        yield f"enrichment {tag}", enrichment_case(
            rng, alpha, min(cfg.max_wires, 2), min(cfg.max_dim, 4), cfg.zero_rate), False
        for kind in cfg.kinds:
            tcfg = TheoryConfig(kind, alpha)
            rows, cols = random_shape(rng, kind, cfg.max_wires, cfg.max_dim)
            r = tightness_case(rng, tcfg, rows, cols, cfg.zero_rate)
            yield f"tightness {kind.value} {tag}", tightness_failure(r), r.zero_branch
            for deflate in (False, True):
                verdict = perturbation_case(rng, r.derivation, tcfg, deflate)
                if verdict != "skip":
                    label = "deflation" if deflate else "inflation"
                    yield f"{label} {kind.value} {tag}", verdict, False


def run_fuzz(cfg: FuzzConfig, progress: Optional[Callable[[str], None]] = None) -> FuzzReport:
    """Run trials in index order and stop at the first counterexample."""
    report = FuzzReport()
    for trial in range(cfg.trials):
        zero = False
        for label, failure, zb in _trial(cfg, trial):
            report.checks += 1
            zero = zero or zb
            if failure is not None:
                report.counterexample = f"trial {trial} (seed {cfg.seed}), {label}: {failure}"
                report.trials = trial + 1
                return report
        report.trials = trial + 1
        report.zero_branch_trials += zero
        if progress is not None and (trial + 1) % 100 == 0:
            progress(f"{trial + 1} trials, {report.checks} checks passed")
    return report
