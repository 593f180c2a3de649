"""Entailment decisions for problems made of derivations or formulas.

A problem file is plain text, one field per line::

    id: fracas-224
    section: comparatives
    premise: f224_as_fast.ccg
    premise: formula: fast(itelxz, th(fast))
    hypothesis: f224_pc6082_fast.ccg
    gold: yes
    expected: unknown        # optional override for known failures

Derivation paths are looked up next to the problem file first, then in
the bundled derivation directory.
"""
from __future__ import annotations

import json
import logging
import os
import time
import xml.etree.ElementTree as ET
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .axioms import Axiom, Signature, compile_to_measures, instantiate_axioms, signature_of
from .ccg import parse_derivation
from .composer import interpret
from .lexicon import Lexicon, builtin_lexicon
from .prover import Budget, Model, Proved, find_countermodel, prove
from .prover.tptp import to_tptp
from .terms import Not, Term
from .textual import parse_formula, show

log = logging.getLogger(__name__)

PROBLEM_SUFFIX = ".problem"


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"
    ERROR = "error"

    def __str__(self) -> str:
        return self.value.capitalize()


class ProblemFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Source:
    kind: str                      # "derivation" or "formula"
    text: str

    def __str__(self) -> str:
        return self.text if self.kind == "derivation" else f"formula: {self.text}"


@dataclass
class Problem:
    id: str
    premises: list
    hypothesis: Source
    gold: Optional[Verdict] = None
    expected: Optional[Verdict] = None
    section: str = ""
    base: Optional[Path] = None    # directory for relative derivation paths
    notes: list = field(default_factory=list)

    @property
    def target(self) -> Optional[Verdict]:
        return self.expected or self.gold


def bundled_dir(name: str) -> Path:
    return Path(str(resources.files("compsem") / "data" / name))


def _verdict(v: str, where: str) -> Verdict:
    try:
        return Verdict(v.strip().lower())
    except ValueError:
        raise ProblemFormatError(f"{where}: unknown verdict {v.strip()!r}") from None


def _source(v: str) -> Source:
    v = v.strip()
    if v.startswith("formula:"):
        return Source("formula", v[len("formula:"):].strip())
    return Source("derivation", v)


def parse_problem(text: str, name: str = "<problem>", base: Optional[Path] = None) -> Problem:
    fields: dict = {"premise": [], "note": []}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or not value.strip():
            raise ProblemFormatError(f"{name}:{n}: expected 'field: value'")
        if key in ("premise", "note"):
            fields[key].append(value.strip())
        elif key in ("id", "section", "hypothesis", "gold", "expected"):
            if key in fields:
                raise ProblemFormatError(f"{name}:{n}: duplicate field {key!r}")
            fields[key] = value.strip()
        else:
            raise ProblemFormatError(f"{name}:{n}: unknown field {key!r}")
    if "id" not in fields:
        raise ProblemFormatError(f"{name}: missing id")
    if not fields["premise"]:
        raise ProblemFormatError(f"{name}: at least one premise is required")
    if "hypothesis" not in fields:
        raise ProblemFormatError(f"{name}: missing hypothesis")
    return Problem(
        id=fields["id"],
        premises=[_source(p) for p in fields["premise"]],
        hypothesis=_source(fields["hypothesis"]),
        gold=_verdict(fields["gold"], name) if "gold" in fields else None,
        expected=_verdict(fields["expected"], name) if "expected" in fields else None,
        section=fields.get("section", ""),
        base=base,
        notes=fields["note"],
    )


def load_problem(path) -> Problem:
    path = Path(path)
    return parse_problem(path.read_text(encoding="utf-8"), str(path), path.parent)


def _derivation_path(ref: str, base: Optional[Path]) -> Path:
    candidates = [Path(ref)] if Path(ref).is_absolute() else \
        ([base / ref] if base else []) + [Path(ref), bundled_dir("derivations") / ref]
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(f"derivation {ref!r} not found")


def semantics(src: Source, lex: Lexicon, base: Optional[Path] = None) -> Term:
    if src.kind == "formula":
        return parse_formula(src.text, lex.constant_types())
    path = _derivation_path(src.text, base)
    return interpret(parse_derivation(path.read_text(encoding="utf-8")), lex)


@dataclass
class Decision:
    problem: Problem
    verdict: Verdict
    error: Optional[str] = None            # "model-bound" or a diagnostic
    premises: list = field(default_factory=list)
    hypothesis: Optional[Term] = None
    axioms: list = field(default_factory=list)
    proof: Optional[Proved] = None
    proved: Optional[str] = None           # "hypothesis" or "negation"
    model: Optional[Model] = None
    stages: list = field(default_factory=list)
    millis: float = 0.0
    trace_path: Optional[str] = None

    @property
    def label(self) -> str:
        if self.verdict is Verdict.ERROR and self.error == "model-bound":
            return "error:model-bound"
        return self.verdict.value

    @property
    def matches(self) -> Optional[bool]:
        t = self.problem.target
        return None if t is None else self.verdict is t

    @property
    def known_fail(self) -> bool:
        p = self.problem
        return p.expected is not None and p.gold is not None and p.expected is not p.gold

    def report(self) -> str:
        p = self.problem
        out = [f"problem {p.id}" + (f" ({p.section})" if p.section else "")]
        for src, sr in zip(p.premises, self.premises):
            out.append(f"  premise {src}\n    {show(sr)}")
        if self.hypothesis is not None:
            out.append(f"  hypothesis {p.hypothesis}\n    {show(self.hypothesis)}")
        if self.axioms:
            out.append("axioms:")
            out += [f"  {a}" for a in self.axioms]
        out.append("stages:")
        out += [f"  {s}" for s in self.stages]
        out.append(f"verdict: {self.label}" + (f" ({self.error})" if self.error and
                                                self.error != "model-bound" else ""))
        if self.proof is not None:
            out.append(f"proof of the {self.proved}:")
            out.append(self.proof.render())
        if self.model is not None:
            out.append("countermodel:")
            out.append(self.model.render())
        return "\n".join(out)

    def as_dict(self) -> dict:
        p = self.problem
        return {
            "id": p.id,
            "section": p.section,
            "verdict": self.label,
            "gold": p.gold.value if p.gold else None,
            "expected": p.expected.value if p.expected else None,
            "match": self.matches,
            "known_fail": self.known_fail,
            "millis": round(self.millis, 1),
            "trace": self.trace_path,
            "error": self.error,
        }


def _measure(fs: Sequence[Term], sig: Signature) -> list:
    return [compile_to_measures(f, sig) for f in fs]


def decide(p: Problem, cfg: Budget = Budget(), engine: str = "comp",
           lexicon: Optional[Lexicon] = None, emit_tptp: Optional[str] = None) -> Decision:
    """Yes if the hypothesis is proved, No if its negation is, Unknown on a countermodel.

    A countermodel of premises, axioms and the negated hypothesis shows the
    hypothesis is not provable, and one of premises, axioms and the
    hypothesis shows its negation is not; such searches run first so that
    the prover is only called when it can succeed.  The verdict is the one
    the sequential order gives, since proofs are sound and models checked.
    """
    if engine not in ("comp", "measure"):
        raise ValueError(f"unknown engine {engine!r}")
    lex = lexicon or builtin_lexicon()
    start = time.monotonic()
    d = Decision(p, Verdict.ERROR)
    try:
        d.premises = [semantics(s, lex, p.base) for s in p.premises]
        d.hypothesis = semantics(p.hypothesis, lex, p.base)
        sig = signature_of(d.premises + [d.hypothesis], lex)
        d.axioms = instantiate_axioms(sig)
    except Exception as exc:                       # composition, parsing, I/O
        d.error = f"{type(exc).__name__}: {exc}"
        d.stages.append("composition failed")
        d.millis = (time.monotonic() - start) * 1000
        return d

    axioms: list = d.axioms
    prem, hyp = d.premises, d.hypothesis
    if engine == "measure":
        axioms = [Axiom(a.name, f) for a, f in zip(axioms, _measure([a.formula for a in axioms], sig))]
        prem, hyp = _measure(prem, sig), compile_to_measures(hyp, sig)
    base = [a.formula for a in axioms] + list(prem)
    against_yes = find_countermodel(base + [Not(hyp)], cfg, lex, sig)
    d.stages.append(f"model of premises and not-H: {type(against_yes).__name__}")
    if not isinstance(against_yes, Model):
        r = prove(axioms, prem, hyp, cfg, lex, sig)
        d.stages.append(f"prove H: {type(r).__name__}" + ("" if r else f" ({r.reason})"))
        if r:
            d.verdict, d.proof, d.proved = Verdict.YES, r, "hypothesis"
    if d.proof is None:
        against_no = find_countermodel(base + [hyp], cfg, lex, sig)
        d.stages.append(f"model of premises and H: {type(against_no).__name__}")
        if not isinstance(against_no, Model):
            r = prove(axioms, prem, Not(hyp), cfg, lex, sig)
            d.stages.append(f"prove not-H: {type(r).__name__}" + ("" if r else f" ({r.reason})"))
            if r:
                d.verdict, d.proof, d.proved = Verdict.NO, r, "negation"
    if d.proof is None:
        if isinstance(against_yes, Model):
            d.verdict, d.model = Verdict.UNKNOWN, against_yes
        else:
            d.error = "model-bound"
    if emit_tptp:
        # conjecture is whatever was proved, or the hypothesis when nothing was
        goal = Not(hyp) if d.verdict is Verdict.NO else hyp
        Path(emit_tptp).write_text(to_tptp(axioms, prem, goal), encoding="utf-8")
    d.millis = (time.monotonic() - start) * 1000
    return d


def decide_file(path, cfg: Budget = Budget(), engine: str = "comp",
                lexicon: Optional[Lexicon] = None) -> Decision:
    try:
        p = load_problem(path)
    except (OSError, ProblemFormatError) as exc:
        stub = Problem(Path(path).stem, [], Source("formula", ""))
        return Decision(stub, Verdict.ERROR, error=f"{type(exc).__name__}: {exc}")
    return decide(p, cfg, engine, lexicon)


@dataclass
class Report:
    decisions: list

    def _scored(self, attr: str) -> list:
        return [d for d in self.decisions if getattr(d.problem, attr) is not None]

    @property
    def accuracy(self) -> Optional[float]:
        """Agreement with gold labels."""
        s = self._scored("gold")
        return sum(d.verdict is d.problem.gold for d in s) / len(s) if s else None

    @property
    def all_match(self) -> bool:
        return all(d.matches is not False for d in self.decisions)

    @property
    def format_errors(self) -> int:
        return sum(1 for d in self.decisions if not d.problem.premises)

    def sections(self) -> dict:
        out: dict = {}
        for d in self.decisions:
            n, ok, target_ok = out.get(d.problem.section or "-", (0, 0, 0))
            out[d.problem.section or "-"] = (n + 1, ok + (d.verdict is d.problem.gold),
                                            target_ok + bool(d.matches))
        return dict(sorted(out.items()))

    def jsonl(self) -> str:
        return "".join(json.dumps(d.as_dict()) + "\n" for d in self.decisions)

    def text(self) -> str:
        rows = [f"{'id':<26} {'section':<13} {'verdict':<18} {'gold':<8} {'ms':>8}  status"]
        for d in self.decisions:
            p = d.problem
            if d.matches is None:
                status = "-"
            elif not d.matches:
                status = "MISMATCH"
            else:
                status = "known-fail" if d.known_fail else "ok"
            rows.append(f"{p.id:<26} {p.section or '-':<13} {d.label:<18} "
                        f"{p.gold.value if p.gold else '-':<8} {d.millis:>8.0f}  {status}")
        rows.append("")
        for sec, (n, ok, tok) in self.sections().items():
            rows.append(f"{sec:<13} {n:>3} problems  gold {ok}/{n}  expected {tok}/{n}")
        acc = self.accuracy
        rows.append(f"total {len(self.decisions)} problems" +
                    (f", accuracy vs gold {acc:.2f}" if acc is not None else ""))
        return "\n".join(rows) + "\n"


def _run_one(args) -> Decision:
    path, cfg, engine, trace_dir = args
    d = decide_file(path, cfg, engine)
    if trace_dir is not None:
        out = Path(trace_dir) / f"{d.problem.id}.trace"
        out.write_text(d.report() + "\n", encoding="utf-8")
        d.trace_path = str(out)
    return d


def problem_files(directory) -> list:
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(str(directory))
    return sorted(directory.glob(f"*{PROBLEM_SUFFIX}"))


def run_corpus(directory, cfg: Budget = Budget(), engine: str = "comp", jobs: int = 1,
               trace_dir: Optional[str] = None) -> Report:
    """Decide every problem file in directory; the report is ordered by problem id."""
    files = problem_files(directory)
    if trace_dir is not None:
        os.makedirs(trace_dir, exist_ok=True)
    work = [(f, cfg, engine, trace_dir) for f in files]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            decisions = list(pool.map(_run_one, work))
    else:
        decisions = [_run_one(w) for w in work]
    decisions.sort(key=lambda d: d.problem.id)
    return Report(decisions)


# --- FraCaS XML ----------------------------------------------------------------------

_ANSWERS = {"yes": Verdict.YES, "no": Verdict.NO, "unknown": Verdict.UNKNOWN}


@dataclass
class TextProblem:
    id: str
    section: str
    premises: list
    hypothesis: str
    gold: Optional[Verdict]


def ingest_fracas_xml(path) -> list:
    """Problems of a FraCaS XML file as raw text with gold answers.

    Sections come from the headings before each group of problems, either
    ``<comment class="section">5 ADJECTIVES</comment>`` elements or plain
    XML comments of the same shape.  Problems whose answer is not one of
    yes/no/unknown keep gold None.
    """
    parser = ET.XMLParser(target=ET.TreeBuilder(insert_comments=True))
    try:
        root = ET.parse(str(path), parser=parser).getroot()
    except ET.ParseError as exc:
        raise ProblemFormatError(f"{path}: malformed XML: {exc}") from None
    out, section = [], ""
    for node in root.iter():
        if node.tag is ET.Comment or (node.tag == "comment" and node.get("class", "section") == "section"):
            head = (node.text or "").split()
            if len(head) >= 2 and head[0].rstrip(".").isdigit() and head[1].isupper():
                section = " ".join(w for w in head[1:] if w.isupper()).lower()
            continue
        if node.tag != "problem":
            continue
        prems = [(p.text or "").strip() for p in node.findall("p")]
        hyp = (node.findtext("h") or "").strip()
        answer = (node.get("fracas_answer") or node.findtext("a") or "").strip().lower()
        out.append(TextProblem(node.get("id", ""), section, prems, hyp, _ANSWERS.get(answer)))
    return out


def gold_distribution(problems: Sequence[TextProblem]) -> tuple:
    """(yes, no, unknown) counts."""
    return tuple(sum(p.gold is v for p in problems) for v in (Verdict.YES, Verdict.NO, Verdict.UNKNOWN))


def pair_with_derivations(problems: Sequence[TextProblem], directory) -> tuple:
    """Split text problems into those with a problem file named fracas-<id> and the rest."""
    have = {p.stem for p in problem_files(directory)}
    paired = [p for p in problems if f"fracas-{p.id}" in have]
    skipped = [p for p in problems if f"fracas-{p.id}" not in have]
    return paired, skipped
