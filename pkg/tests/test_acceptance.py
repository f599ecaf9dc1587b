"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal summary) or
``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import math
import sys
import time
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import oracle  # noqa: E402
from qdiagram import stochmat as sm  # noqa: E402
from qdiagram.axioms import CIRCUIT_AXIOMS, CONVEX_AXIOMS, GRID  # noqa: E402
from qdiagram.diagram import Theory, parse, show  # noqa: E402
from qdiagram.divergence import ORDERS, div_max, format_order, kl, renyi  # noqa: E402
from qdiagram.fuzz import (  # noqa: E402
    chain_prod_case, chain_sum_case, enrichment_case, perturbation_case, random_distribution,
    random_matrix, random_term, tightness_case, tightness_failure, trial_rng,
)
from qdiagram.proofs import TheoryConfig  # noqa: E402
from qdiagram.semantics import (  # noqa: E402
    column_term_convex, evaluate, matrix_term_circuit, matrix_term_convex, state_term_circuit,
)
from qdiagram.stochmat import StochMatrix  # noqa: E402

C, X = Theory.CIRCUIT, Theory.CONVEX
SEED = 2024
RESULTS: list[str] = []


def _record(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    within = elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    line = f"{verdict} criterion {number} ({title}): {detail}; {elapsed:.2f}s of {limit:.0f}s allowed"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


# 1 -------------------------------------------------------------------------------------

def test_criterion_1_generator_fidelity():
    start = time.perf_counter()
    M = StochMatrix.from_rows
    expected = [
        (C, "copy", M([[1, 0], [0, 0], [0, 0], [0, 1]])),
        (C, "and", M([[1, 0, 0, 0], [0, 1, 1, 1]])),
        (C, "not", M([[0, 1], [1, 0]])),
        (C, "del", M([[1, 1]])),
        (C, "flip(2/7)", M([[F(2, 7)], [F(5, 7)]])),
        (X, "cop", M([[1, 1]])),
        (X, "cc(2/7)", M([[F(2, 7)], [F(5, 7)]])),
        (X, "del", sm.empty(1, 0)),
    ]
    wrong = [src for k, src, m in expected if evaluate(parse(src, k), k) != m]
    _record(1, "generator fidelity", not wrong, f"{len(expected) - len(wrong)}/{len(expected)} "
            f"generator matrices exact" + (f", mismatched {wrong}" if wrong else ""),
            time.perf_counter() - start, 1)


# 2 -------------------------------------------------------------------------------------

def test_criterion_2_base_axioms():
    start = time.perf_counter()
    failures, instances = {}, 0
    for ax in CIRCUIT_AXIOMS + CONVEX_AXIOMS:
        instances += len(GRID) ** ax.arity
        bad = ax.failures(GRID)
        if bad:
            failures[f"{ax.theory.value}/{ax.name}"] = bad[:3]
    n = len(CIRCUIT_AXIOMS) + len(CONVEX_AXIOMS)
    _record(2, "base axioms", not failures,
            f"{n} schemas, {instances} grid instances exact" + (f", failing {failures}" if failures else ""),
            time.perf_counter() - start, 30)


# 3 -------------------------------------------------------------------------------------

def test_criterion_3_chain_rules():
    start = time.perf_counter()
    failures = []
    for alpha in ORDERS:
        for trial in range(1000):
            rng = trial_rng(SEED, trial)
            for case in (chain_prod_case(rng, alpha), chain_sum_case(rng, alpha)):
                if case is not None:
                    failures.append(f"alpha={format_order(alpha)} trial {trial}: {case}")
    _record(3, "chain-rule oracles", not failures,
            f"1000 pairs x 2 structures x {len(ORDERS)} orders" + (f", first failure {failures[0]}" if failures else ""),
            time.perf_counter() - start, 60)


# 4 -------------------------------------------------------------------------------------

def test_criterion_4_enrichment():
    start = time.perf_counter()
    failures = []
    for alpha in ORDERS:
        for trial in range(1000):
            case = enrichment_case(trial_rng(SEED + 1, trial), alpha)
            if case is not None:
                failures.append(f"alpha={format_order(alpha)} trial {trial}: {case}")
    _record(4, "enrichment", not failures,
            f"1000 instances x {len(ORDERS)} orders (seq, kron, dsum max-equality, if-gate max-equality)"
            + (f", first failure {failures[0]}" if failures else ""),
            time.perf_counter() - start, 60)


# 5 -------------------------------------------------------------------------------------

def test_criterion_5_checker_soundness():
    start = time.perf_counter()
    failures = []
    counts = {False: 0, True: 0}
    trial = 0
    while min(counts.values()) < 500 and trial < 5000:
        rng = trial_rng(SEED + 2, trial)
        kind = C if trial % 2 else X
        cfg = TheoryConfig(kind, ORDERS[trial % len(ORDERS)])
        rows, cols = ((2 ** int(rng.integers(0, 3)), 2 ** int(rng.integers(0, 3))) if kind is C
                      else (int(rng.integers(1, 6)), int(rng.integers(1, 5))))
        r = tightness_case(rng, cfg, rows, cols)  # raises if the checker refuses it
        for deflate in (False, True):
            if counts[deflate] >= 500:
                continue
            verdict = perturbation_case(rng, r.derivation, cfg, deflate)
            if verdict == "skip":
                continue
            counts[deflate] += 1
            if verdict is not None:
                failures.append(f"trial {trial}: {verdict}")
        trial += 1
    ok = not failures and counts[False] >= 500 and counts[True] >= 500
    _record(5, "checker soundness", ok,
            f"{trial} synthesized derivations accepted, {counts[False]} inflations accepted, "
            f"{counts[True]} deflations rejected with BoundMismatch"
            + (f", first failure {failures[0]}" if failures else ""),
            time.perf_counter() - start, 60)


# 6 -------------------------------------------------------------------------------------

def _shape(rng, config: str) -> tuple[Theory, int, int]:
    if config == "circuit-states":
        return C, 2 ** int(rng.integers(0, 6)), 1
    if config == "circuit-general":
        return C, 2 ** int(rng.integers(0, 4)), 2 ** int(rng.integers(0, 4))
    return X, int(rng.integers(1, 7)), int(rng.integers(0, 5))


def test_criterion_6_tightness():
    start = time.perf_counter()
    failures, runs, zero = [], 0, 0
    for config in ("circuit-states", "circuit-general", "convex"):
        for alpha in ORDERS:
            for trial in range(500):
                rng = trial_rng(SEED + 3, trial)
                kind, rows, cols = _shape(rng, config)
                r = tightness_case(rng, TheoryConfig(kind, alpha), rows, cols)
                runs += 1
                zero += r.zero_branch
                bad = tightness_failure(r)
                if bad:
                    failures.append(f"{config} alpha={format_order(alpha)} trial {trial}: {bad}")
    share = zero / runs
    ok = not failures and share >= 0.10
    _record(6, "completeness/tightness", ok,
            f"{runs} syntheses tight, {share:.0%} with zero-probability branches"
            + (f", first failure {failures[0]}" if failures else ""),
            time.perf_counter() - start, 120)


# 7 -------------------------------------------------------------------------------------

def test_criterion_7_point_values():
    start = time.perf_counter()
    half = F(1, 2)
    checks = {
        "kl([1/2,1/2],[1,0]) = inf": kl([half, half], [1, 0]) == math.inf,
        "kl(mu,mu) = 0": kl([F(1, 3), F(2, 3)], [F(1, 3), F(2, 3)]) == 0,
        "renyi(a,mu,mu) = 0": all(renyi(a, [F(1, 5), F(4, 5)], [F(1, 5), F(4, 5)]) == 0 for a in ORDERS),
        "kl([1,0],[1/2,1/2]) = log 2": abs(kl([1, 0], [half, half]) - oracle.kl([1, 0], [half, half])) <= 1e-12
        and abs(kl([1, 0], [half, half]) - math.log(2)) <= 1e-12,
        "div_max(1,[],[]) = 0": div_max(1, sm.empty(0, 0), sm.empty(0, 0)) == 0,
    }
    bad = [k for k, v in checks.items() if not v]
    _record(7, "point values", not bad, f"{len(checks) - len(bad)}/{len(checks)} exact"
            + (f", failing {bad}" if bad else ""), time.perf_counter() - start, 5)


# 8 -------------------------------------------------------------------------------------

def test_criterion_8_round_trips():
    start = time.perf_counter()
    bad = []
    for trial in range(1000):
        rng = trial_rng(SEED + 4, trial)
        kind = C if trial % 2 else X
        t = random_term(rng, kind, int(rng.integers(0, 4)))
        if parse(show(t), kind) != t:
            bad.append(f"parse/print {show(t)}")
    for trial in range(500):
        rng = trial_rng(SEED + 5, trial)
        mu = random_distribution(rng, 2 ** int(rng.integers(0, 5)))
        if sm.column(evaluate(state_term_circuit(mu), C), 0) != mu:
            bad.append(f"state_term_circuit {mu}")
        nu = random_distribution(rng, int(rng.integers(1, 7)))
        if sm.column(evaluate(column_term_convex(nu), X), 0) != nu:
            bad.append(f"column_term_convex {nu}")
        a = random_matrix(rng, 2 ** int(rng.integers(0, 4)), 2 ** int(rng.integers(0, 4)))
        if evaluate(matrix_term_circuit(a), C) != a:
            bad.append("matrix_term_circuit")
        b = random_matrix(rng, int(rng.integers(1, 7)), int(rng.integers(0, 5)))
        if evaluate(matrix_term_convex(b), X) != b:
            bad.append("matrix_term_convex")
    _record(8, "round trips", not bad,
            "1000 parse/print terms and 4 x 500 synthesis round trips exact"
            + (f", first failure {bad[0]}" if bad else ""), time.perf_counter() - start, 120)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
