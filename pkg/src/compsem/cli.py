"""Command line: decide, corpus, semantics, axioms, ingest."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from .axioms import SignatureError, instantiate_axioms, signature_of
from .ccg import DerivationSyntaxError, InvalidDerivation, parse_derivation, show_category
from .composer import CompositionError, interpret_nodes, resolve_constants
from .lexicon import LexiconError, builtin_lexicon
from .pipeline import (ProblemFormatError, bundled_dir, decide, gold_distribution, ingest_fracas_xml,
                       load_problem, pair_with_derivations, run_corpus, semantics)
from .prover import Budget
from .textual import show

OK, MISMATCH, BAD_INPUT = 0, 1, 2


def _budget(args) -> Budget:
    return Budget(time_limit=args.timeout, max_entities=args.max_entities,
                  max_degree_points=args.max_degrees)


def _bounds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--timeout", type=float, default=10.0, metavar="S",
                   help="seconds per prover or model search call (default 10)")
    p.add_argument("--max-entities", type=int, default=3, metavar="K")
    p.add_argument("--max-degrees", type=int, default=5, metavar="M",
                   help="distinct degree values a countermodel may use")
    p.add_argument("--engine", choices=("comp", "measure"), default="comp")


def cmd_decide(args) -> int:
    try:
        p = load_problem(args.problem)
    except (OSError, ProblemFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    d = decide(p, _budget(args), args.engine, emit_tptp=args.emit_tptp)
    if args.json:
        print(json.dumps(d.as_dict()))
    else:
        print(d.report())
    if d.error and d.error != "model-bound":
        return BAD_INPUT
    return OK if d.matches is not False else MISMATCH


def cmd_corpus(args) -> int:
    directory = args.dir or bundled_dir("corpus")
    try:
        report = run_corpus(directory, _budget(args), args.engine, args.jobs, args.traces)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    if args.jsonl:
        Path(args.jsonl).write_text(report.jsonl(), encoding="utf-8")
    sys.stdout.write(report.text())
    if report.format_errors:
        return BAD_INPUT
    return OK if report.all_match else MISMATCH


def cmd_semantics(args) -> int:
    lex = builtin_lexicon()
    try:
        text = Path(args.derivation).read_text(encoding="utf-8")
        tree = parse_derivation(text)
        nodes = interpret_nodes(tree, lex)
    except (OSError, DerivationSyntaxError, InvalidDerivation, CompositionError, LexiconError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    if args.nodes:
        for n in nodes:
            path = "/".join(map(str, n.path)) or "root"
            print(f"{path:<12} {show_category(n.cat)}  {show(resolve_constants(n.sr))}")
    else:
        print(show(resolve_constants(nodes[-1].sr)))
    return OK


def cmd_axioms(args) -> int:
    lex = builtin_lexicon()
    try:
        p = load_problem(args.problem)
        fs = [semantics(s, lex, p.base) for s in p.premises + [p.hypothesis]]
        sig = signature_of(fs, lex)
    except (OSError, ProblemFormatError, CompositionError, SignatureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    print("gradables: " + ", ".join(f"{g.lexeme}({g.polarity}, {g.dimension})" for g in sig.gradables))
    if sig.thresholds:
        print("thresholds: " + ", ".join(show(t) for t in sig.thresholds))
    for a in instantiate_axioms(sig):
        print(a)
    return OK


def cmd_ingest(args) -> int:
    try:
        problems = ingest_fracas_xml(args.xml)
    except (OSError, ProblemFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    sections: dict = {}
    for p in problems:
        sections.setdefault(p.section or "-", []).append(p)
    for name, ps in sections.items():
        yes, no, unk = gold_distribution(ps)
        print(f"{name:<32} {len(ps):>3} problems  (yes, no, unknown) = ({yes}, {no}, {unk})")
    if args.pair:
        paired, skipped = pair_with_derivations(problems, args.pair)
        print(f"paired with problem files: {len(paired)}; skipped: {len(skipped)}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="compsem", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide one problem file")
    p.add_argument("problem")
    _bounds(p)
    p.add_argument("--emit-tptp", metavar="PATH", help="write the problem as TPTP fof")
    p.add_argument("--json", action="store_true", help="one JSON object instead of the report")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("corpus", help="decide every *.problem file in a directory")
    p.add_argument("dir", nargs="?", help="defaults to the bundled corpus")
    _bounds(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--jsonl", metavar="PATH", help="write one JSON object per problem")
    p.add_argument("--traces", metavar="DIR", help="write a report per problem")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("semantics", help="compose a derivation file")
    p.add_argument("derivation")
    p.add_argument("--nodes", action="store_true", help="show the SR of every node")
    p.set_defaults(func=cmd_semantics)

    p = sub.add_parser("axioms", help="list the instantiated axioms of a problem")
    p.add_argument("problem")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("ingest", help="summarize a FraCaS XML file")
    p.add_argument("xml")
    p.add_argument("--pair", metavar="DIR", help="report which problems have problem files")
    p.set_defaults(func=cmd_ingest)
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if hasattr(args, "timeout"):
            _budget(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    return args.func(args)
