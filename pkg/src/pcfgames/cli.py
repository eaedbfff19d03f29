"""Command-line front end: ``pcf <command> ...``.

Exit codes: 0 success, 1 usage or input error, 2 divergence or a resource
bound hit, 3 a check failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import kernel
from .decomposition import Bot, Bounds, Const, DecompositionError, check_axiom, decompose
from .definability import (
    approximant, extract_term, extract_term_pk, has_cut, show_tree, tree_of_strategy,
    tree_of_term,
)
from .denotation import DEFAULT_UNROLL, DEFAULT_WINDOW, DenotationError, adequacy_check, denote
from .fullabs import Separated, coherence
from .operational import DEFAULT_FUEL, Converges, evaluate
from .strategy import ShapeError, Strategy, StrategyFormatError, dumps, loads
from .stlc import check_full_completeness, is_pure_type
from .syntax import NAT, ParseError, PCFTypeError, parse_type, read_pcf_file, show, typecheck

EXIT_OK, EXIT_USAGE, EXIT_BOUND, EXIT_CHECK = 0, 1, 2, 3
DEFAULT_NORM_BOUND = 5

log = logging.getLogger("pcfgames")


class _Out:
    """Text or JSON-lines output, one record per check."""

    def __init__(self, mode: str, stream=None):
        self.mode = mode
        self.stream = stream or sys.stdout

    def text(self, line: str) -> None:
        if self.mode == "text":
            print(line, file=self.stream)

    def record(self, **rec) -> None:
        if self.mode == "json-lines":
            print(json.dumps(rec, sort_keys=True), file=self.stream)


def _seed(args) -> int:
    env = os.environ.get("PCF_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"PCF_SEED must be an integer, got {env!r}")
    return args.seed


def _load_program(path: str):
    return read_pcf_file(path)


def _load_strategy_or_term(path: str, window: int, unroll: int) -> Strategy:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("pcf-strategy"):
        return loads(text)
    return denote(read_pcf_file(path), (), unroll, window)


# ---------------------------------------------------------------------------

def cmd_run(args, out: _Out) -> int:
    p = _load_program(args.file)
    ty = typecheck((), p)
    if ty != NAT:
        print(f"error: a program has type nat, not {ty}", file=sys.stderr)
        return EXIT_USAGE
    res = evaluate(p, args.fuel)
    out.record(command="run", file=args.file, fuel=args.fuel,
               verdict=res.n if isinstance(res, Converges) else f"no-value:{res.reason}")
    if isinstance(res, Converges):
        out.text(str(res.n))
        return EXIT_OK
    print(f"no value within {args.fuel} steps ({res.reason})", file=sys.stderr)
    return EXIT_BOUND


def cmd_denote(args, out: _Out) -> int:
    m = _load_program(args.file)
    s = denote(m, (), args.unroll, args.window)
    text = dumps(s)
    if args.emit:
        Path(args.emit).write_text(text, encoding="utf-8")
        out.text(f"wrote {args.emit} (norm {len(s)})")
    else:
        out.text(text.rstrip("\n"))
    out.record(command="denote", file=args.file, unroll=args.unroll, window=args.window,
               norm=len(s), strategy=text)
    return EXIT_OK


def cmd_tree(args, out: _Out) -> int:
    m = _load_program(args.file)
    if args.via == "strategy":
        t = tree_of_strategy(denote(m, (), args.unroll, args.window), args.depth)
    else:
        t = tree_of_term(m, args.depth, args.window, unroll=args.unroll if args.unroll >= 0 else None)
    out.text(show_tree(t))
    out.record(command="tree", file=args.file, depth=args.depth, via=args.via,
               tree=show_tree(t), complete=not has_cut(t))
    if has_cut(t):
        print("note: depth bound reached; cut markers stand for the rest", file=sys.stderr)
    return EXIT_OK


def cmd_approx(args, out: _Out) -> int:
    s = _load_strategy_or_term(args.file, args.window, args.unroll)
    a = approximant(s, args.k)
    term = extract_term_pk(s, args.k)
    out.text(show(term))
    out.text(f"-- p_{args.k}: norm {len(a)} of {len(s)}")
    if args.emit:
        Path(args.emit).write_text(dumps(a), encoding="utf-8")
    out.record(command="approx", file=args.file, k=args.k, term=show(term),
               norm=len(a), strategy=dumps(a))
    return EXIT_OK


def cmd_extract(args, out: _Out) -> int:
    s = loads(Path(args.file).read_text(encoding="utf-8"))
    term = extract_term(s)
    out.text(show(term))
    out.record(command="extract", file=args.file, term=show(term))
    return EXIT_OK


def cmd_decompose(args, out: _Out) -> int:
    s = _load_strategy_or_term(args.file, args.window, args.unroll)
    d = decompose(s)
    if isinstance(d, Bot):
        out.text("bot")
        rec = {"case": "bot"}
    elif isinstance(d, Const):
        out.text(f"const {d.x}")
        rec = {"case": "const", "x": d.x}
    else:
        out.text(f"total head {d.i}")
        for j, g in enumerate(d.args, 1):
            out.text(f"arg {j}: norm {len(g)}")
            for line in g.describe():
                out.text(f"  {line}")
        for n, h in sorted(d.branches.items()):
            out.text(f"branch {n}: norm {len(h)}")
            for line in h.describe():
                out.text(f"  {line}")
        rec = {"case": "total", "head": d.i,
               "args": [dumps(g) for g in d.args],
               "branches": {str(n): dumps(h) for n, h in sorted(d.branches.items())}}
    out.record(command="decompose", file=args.file, **rec)
    return EXIT_OK


def _verdict_text(v) -> str:
    if isinstance(v, Separated):
        return f"separated (value {v.value}, test #{v.index})"
    return f"related-up-to-bounds ({v.tests_tried} tests)"


def cmd_compare(args, out: _Out) -> int:
    m = _load_program(args.file1)
    n = _load_program(args.file2)
    rec = coherence(m, n, args.norm_bound, args.fuel, args.window, args.unroll)
    sep = isinstance(rec.intrinsic, Separated) or isinstance(rec.observational, Separated)
    out.text("separated" if sep else "related-up-to-bounds")
    out.text(f"intrinsic: {_verdict_text(rec.intrinsic)}")
    out.text(f"observational: {_verdict_text(rec.observational)}")
    witness = {}
    if isinstance(rec.intrinsic, Separated):
        out.text("test strategy: " + "; ".join(rec.intrinsic.witness.describe()))
        witness["strategy"] = dumps(rec.intrinsic.witness)
        if args.witness:
            Path(args.witness).write_text(dumps(rec.intrinsic.witness), encoding="utf-8")
    if isinstance(rec.observational, Separated):
        out.text(f"context: {show(rec.observational.witness)}")
        witness["context"] = show(rec.observational.witness)
    if not rec.ok:
        out.text(f"incoherent: {rec.note}")
    out.record(command="compare", left=args.file1, right=args.file2,
               norm_bound=args.norm_bound, window=args.window,
               verdict="separated" if sep else "related-up-to-bounds",
               coherent=rec.ok, note=rec.note, **witness)
    return EXIT_OK if rec.ok else EXIT_CHECK


def cmd_axioms(args, out: _Out) -> int:
    seed = _seed(args)
    suites = ["A1", "A2", "A3", "A4", "A5"] if "all" in args.suite else args.suite
    bounds = Bounds(args.window, args.norm_bound)
    failed = False
    for name in suites:
        rep = check_axiom(name, args.cases, seed, bounds)
        failed |= not rep.ok
        out.text(f"{name}: {rep.cases} cases, {len(rep.failures)} failures (seed {seed})"
                 + ("" if rep.ok else " FAIL"))
        for f in rep.failures[:5]:
            out.text(f"  {f['what']}")
            for w in f["witnesses"]:
                out.text("    " + w.replace("\n", "\n    ").rstrip())
        out.record(command="axioms", suite=name, seed=seed, cases=rep.cases,
                   window=args.window, norm_bound=args.norm_bound,
                   verdict="pass" if rep.ok else "fail", failures=rep.failures)
    return EXIT_CHECK if failed else EXIT_OK


def cmd_stlc_check(args, out: _Out) -> int:
    t = parse_type(args.type)
    if not is_pure_type(t):
        print(f"error: {t} is not a pure type over iota", file=sys.stderr)
        return EXIT_USAGE
    rep = check_full_completeness(t, args.size, args.norm)
    out.text(f"type {rep.type}: {rep.normal_forms} normal forms, {rep.strategies} total strategies")
    for label in ("injective", "nf_roundtrip", "strategy_roundtrip", "surjective",
                  "norm_descent", "long_normal"):
        out.text(f"  {label}: {'yes' if getattr(rep, label) else 'NO'}")
    for b in rep.boundary:
        out.text(f"  beyond size bound: {b}")
    for f in rep.failures:
        out.text(f"  failure: {f}")
    out.record(command="stlc-check", type=rep.type, size=args.size, norm=args.norm,
               normal_forms=rep.normal_forms, strategies=rep.strategies,
               boundary=rep.boundary, failures=rep.failures,
               verdict="pass" if rep.ok else "fail")
    return EXIT_OK if rep.ok else EXIT_CHECK


def load_manifest(directory: Path) -> list[dict]:
    data = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    return data["programs"]


def cmd_corpus(args, out: _Out) -> int:
    directory = Path(args.dir)
    entries = load_manifest(directory)
    bad = 0
    for ent in entries:
        p = read_pcf_file(directory / ent["file"])
        rep = adequacy_check(p, args.fuel, args.k_max, args.window)
        expected = ent.get("value")
        got = rep.operational.n if rep.converged else None
        matches = rep.agree and got == expected
        bad += not matches
        shown = "diverges" if got is None else str(got)
        k = "-" if rep.first_k is None else str(rep.first_k)
        out.text(f"{ent['file']}: {shown} (k={k}) {'ok' if matches else 'MISMATCH'}")
        out.record(command="corpus", file=ent["file"], expected=expected, operational=got,
                   denotational=rep.value, first_k=rep.first_k, agree=rep.agree,
                   verdict="pass" if matches else "fail")
    out.text(f"{len(entries) - bad}/{len(entries)} programs agree")
    return EXIT_CHECK if bad else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=["text", "json-lines"], default="text",
                        help="output format (default: text)")
    common.add_argument("-v", "--verbose", action="store_true")

    sem = argparse.ArgumentParser(add_help=False)
    sem.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="answers 0..W-1 for nat")
    sem.add_argument("--unroll", type=int, default=DEFAULT_UNROLL, help="Y unrolling depth")

    parser = argparse.ArgumentParser(prog="pcf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="pcf 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="evaluate a program")
    p.add_argument("file")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("denote", parents=[common, sem], help="print the strategy of a term")
    p.add_argument("file")
    p.add_argument("--emit", metavar="STRATEGY-FILE")
    p.set_defaults(func=cmd_denote)

    p = sub.add_parser("tree", parents=[common, sem], help="evaluation tree of a term")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--via", choices=["term", "strategy"], default="term")
    p.set_defaults(func=cmd_tree, unroll=-1)

    p = sub.add_parser("approx", parents=[common, sem], help="p_k approximant and its term")
    p.add_argument("file", help="term (.pcf) or strategy file")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--emit", metavar="STRATEGY-FILE")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("extract", parents=[common], help="PCF term defining a strategy")
    p.add_argument("file", metavar="STRATEGY-FILE")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("decompose", parents=[common, sem], help="head/arguments/branches")
    p.add_argument("file", help="term (.pcf) or strategy file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compare", parents=[common, sem], help="bounded preorder check")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--norm-bound", type=int, default=DEFAULT_NORM_BOUND)
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--witness", metavar="STRATEGY-FILE", help="write a separating test here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("axioms", parents=[common], help="run axiom instance suites")
    p.add_argument("--suite", nargs="+", default=["all"],
                   choices=["A1", "A2", "A3", "A4", "A5", "all"])
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--norm-bound", type=int, default=6)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("stlc", help="pure simply-typed calculus")
    ssub = p.add_subparsers(dest="stlc_command", required=True)
    q = ssub.add_parser("check", parents=[common], help="bounded full-completeness check")
    q.add_argument("--type", required=True)
    q.add_argument("--size", type=int, default=7)
    q.add_argument("--norm", type=int, default=4)
    q.set_defaults(func=cmd_stlc_check)

    p = sub.add_parser("corpus", parents=[common], help="adequacy over a program corpus")
    p.add_argument("--dir", default="corpus/adequacy")
    p.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    p.add_argument("--k-max", type=int, default=32)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.set_defaults(func=cmd_corpus)
    return parser


def run_cli(argv=None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", kernel.BACKEND)
    out = _Out(getattr(args, "report", "text"), stdout)
    try:
        return args.func(args, out)
    except (ParseError, PCFTypeError, DenotationError, ShapeError, StrategyFormatError,
            DecompositionError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except kernel.KernelBudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BOUND


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
