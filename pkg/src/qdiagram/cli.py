"""Command-line front end: ``eval``, ``div``, ``derive``, ``check`` and ``fuzz``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import extreal as er
from . import stochmat as sm
from .diagram import ParseError, Term, Theory, TypeCheckError, parse, typecheck
from .divergence import DivergenceError, div_max, parse_order
from .fuzz import FuzzConfig, run_fuzz
from .proofs import ProofError, TheoryConfig, bound_of, check, dumps, from_json
from .semantics import evaluate
from .synth import derive

EXIT_OK, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad input text: reported on stderr with exit status 2."""


def _theory(text: str) -> Theory:
    try:
        return Theory(text)
    except ValueError:
        raise argparse.ArgumentTypeError("theory must be 'circuit' or 'convex'") from None


def _order(text: str):
    try:
        return parse_order(text)
    except DivergenceError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _source(text: str) -> str:
    if text.startswith("@"):
        return Path(text[1:]).read_text(encoding="utf-8")
    return text


def _term(text: str, k: Theory) -> Term:
    t = parse(_source(text), k)
    typecheck(t, k)
    return t


def _cmd_eval(args) -> int:
    sys.stdout.write(sm.format_matrix(evaluate(_term(args.term, args.theory), args.theory)))
    return EXIT_OK


def _pair(args) -> tuple[Term, Term]:
    f, g = _term(args.lhs, args.theory), _term(args.rhs, args.theory)
    tf, tg = typecheck(f, args.theory), typecheck(g, args.theory)
    if tf != tg:
        raise UsageError(f"terms have different types {tf[0]}->{tf[1]} and {tg[0]}->{tg[1]}")
    return f, g


def _cmd_div(args) -> int:
    f, g = _pair(args)
    value = div_max(args.alpha, evaluate(f, args.theory), evaluate(g, args.theory))
    print(er.render(value))
    return EXIT_OK


def _cmd_derive(args) -> int:
    f, g = _pair(args)
    cfg = TheoryConfig(args.theory, args.alpha)
    d = derive(cfg, f, g)
    check(d, cfg)
    text = dumps(d) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(er.render(bound_of(d)), file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK


def _cmd_check(args) -> int:
    try:
        doc = json.loads(Path(args.file).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read derivation: {exc}") from exc
    cfg = TheoryConfig(args.theory, args.alpha)
    try:
        d = from_json(doc, args.theory)
        judgement = check(d, cfg)
    except ProofError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    print(f"accepted under {cfg}: {judgement}")
    print(er.render(bound_of(d)))
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    kinds = (args.theory,) if args.theory else (Theory.CIRCUIT, Theory.CONVEX)
    orders = (args.alpha,) if args.alpha is not None else FuzzConfig().orders
    cfg = FuzzConfig(trials=args.trials, seed=args.seed, max_wires=args.max_wires,
                     max_dim=args.max_dim, zero_rate=args.zero_rate, kinds=kinds, orders=orders)
    report = run_fuzz(cfg, progress=lambda msg: print(msg, file=sys.stderr))
    if not report.ok:
        print(f"counterexample: {report.counterexample}")
        return EXIT_REJECTED
    print(f"ok: {report.trials} trials, {report.checks} checks, "
          f"{report.zero_branch_trials} trials with zero-probability branches")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdiagram", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def theory(p, required=True):
        p.add_argument("--theory", type=_theory, required=required, help="circuit or convex")

    def alpha(p, default="1"):
        p.add_argument("--alpha", type=_order, default=None if default is None else parse_order(default),
                       help="order: 0, 1 (KL), inf, or a rational/decimal (default %(default)s)")

    def pair(p):
        p.add_argument("--lhs", required=True, help="term text, or @file")
        p.add_argument("--rhs", required=True, help="term text, or @file")

    p = sub.add_parser("eval", help="print the matrix a term denotes")
    theory(p)
    p.add_argument("term", help="term text, or @file")
    p.set_defaults(run=_cmd_eval)

    p = sub.add_parser("div", help="column-max divergence between two terms")
    theory(p)
    alpha(p)
    pair(p)
    p.set_defaults(run=_cmd_div)

    p = sub.add_parser("derive", help="synthesize a tight derivation")
    theory(p)
    alpha(p)
    pair(p)
    p.add_argument("-o", "--output", help="write the derivation here instead of stdout")
    p.set_defaults(run=_cmd_derive)

    p = sub.add_parser("check", help="verify a derivation file")
    p.add_argument("file")
    theory(p)
    alpha(p)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("fuzz", help="seeded property fuzzing")
    theory(p, required=False)
    alpha(p, default=None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-wires", type=int, default=3)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--zero-rate", type=float, default=0.2)
    p.set_defaults(run=_cmd_fuzz)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.run(args)
    except (ParseError, TypeCheckError, UsageError, sm.MatrixError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
