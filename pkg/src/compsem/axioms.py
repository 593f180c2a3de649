"""COMP axioms instantiated over a problem's signature, and the measure reading.

The intended model interprets a positive adjective F+ by a measure
function mu: F+(x, d) iff mu(x) >= d, and its antonym F- by the same
measure: F-(x, d) iff mu(x) <= d.  compile_to_measures performs that
translation; holds() evaluates formulas in a concrete finite model.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional

from .lexicon import PRIVATIVE_MODIFIERS, GradableRecord, Lexicon
from .terms import (D, E, T, Abs, And, App, Cmp, Const, DegAdd, DegLit, Exists, Forall, Fun,
                    Implies, Not, Or, Term, Threshold, Var, fun, head_and_args, map_bottom_up,
                    subterms)
from .textual import parse_formula, show

log = logging.getLogger(__name__)

ADJ_TYPE = fun(E, D, T)
CHOICE = "the"


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    gradables: tuple = ()          # GradableRecord, sorted by lexeme
    thresholds: tuple = ()         # Threshold
    entities: tuple = ()           # names of E constants
    classes: tuple = ()            # unary noun predicates
    privatives: tuple = ()         # (modifier, noun)
    choice_terms: tuple = ()       # nouns P with the(P) in the formulas

    def gradable(self, name: str) -> Optional[GradableRecord]:
        for g in self.gradables:
            if g.lexeme == name:
                return g
        return None

    @property
    def gradable_names(self) -> tuple:
        return tuple(g.lexeme for g in self.gradables)


class Axiom(NamedTuple):
    name: str
    formula: Term

    def __str__(self) -> str:
        return f"{self.name}: {show(self.formula)}"


def choice_name(noun: str) -> str:
    return f"the({noun})"


def _is_choice(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Const) and t.fun.name == CHOICE


def signature_of(fs: Iterable[Term], lex: Lexicon) -> Signature:
    grad, ths, ents, classes, privs, choice = {}, set(), set(), set(), set(), set()
    for f in fs:
        for s in subterms(f):
            if isinstance(s, Const):
                if s.type == ADJ_TYPE:
                    rec = lex.gradable(s.name)
                    if rec is None:
                        raise SignatureError(f"gradable predicate {s.name!r} has no registry record")
                    grad[s.name] = rec
                elif s.type == E:
                    ents.add(s.name)
                elif s.type == Fun(E, T):
                    mod, _, noun = s.name.partition("_")
                    if mod in PRIVATIVE_MODIFIERS and noun:
                        privs.add((mod, noun))
                    else:
                        classes.add(s.name)
            elif isinstance(s, Threshold):
                rec = lex.gradable(s.adjective)
                if rec is None:
                    raise SignatureError(f"threshold of unregistered gradable {s.adjective!r}")
                grad[s.adjective] = rec
                ths.add(s)
                if s.cls:
                    classes.add(s.cls)
            elif _is_choice(s):
                if not isinstance(s.arg, Const):
                    raise SignatureError(f"the() applied to a complex predicate: {show(s)}")
                choice.add(s.arg.name)
                ents.add(choice_name(s.arg.name))
    return Signature(
        gradables=tuple(grad[k] for k in sorted(grad)),
        thresholds=tuple(sorted(ths, key=lambda t: (t.adjective, t.cls or ""))),
        entities=tuple(sorted(ents)),
        classes=tuple(sorted(classes)),
        privatives=tuple(sorted(privs)),
        choice_terms=tuple(sorted(choice)),
    )


# --- axiom schemata ------------------------------------------------------------

_CP = "forall x:E. forall y:E. ((exists d:D. ({F}(x, d) & ~{F}(y, d))) -> forall e:D. ({F}(y, e) -> {F}(x, e)))"
_AX1 = "forall d1:D. forall d2:D. (d1 >= d2 -> forall x:E. ({N}(x, d2) -> {N}(x, d1)))"
_AX2 = "forall d1:D. forall d2:D. (d1 >= d2 -> forall x:E. ({P}(x, d1) -> {P}(x, d2)))"
_AX3 = "forall d1:D. forall d2:D. (d1 > d2 -> forall x:E. ({N}(x, d2) -> ~{P}(x, d1)))"
_AX4 = "forall d1:D. forall d2:D. (d1 < d2 -> forall x:E. ({P}(x, d2) -> ~{N}(x, d1)))"
_AX5 = "forall d1:D. forall d2:D. (d2 <= d1 -> forall x:E. (~{N}(x, d1) -> {P}(x, d2)))"
_AX6 = "forall d1:D. forall d2:D. (d2 >= d1 -> forall x:E. (~{P}(x, d1) -> {N}(x, d2)))"
# boundary forms: leaving F- at d1 means reaching F+ strictly above d1, and dually
_AX5B = "forall d1:D. forall x:E. (~{N}(x, d1) -> exists d2:D. (d1 < d2 & {P}(x, d2)))"
_AX6B = "forall d1:D. forall x:E. (~{P}(x, d1) -> exists d2:D. (d2 < d1 & {N}(x, d2)))"


def _ax(name: str, template: str, **adj: str) -> Axiom:
    consts = {a: ADJ_TYPE for a in adj.values()}
    return Axiom(name, parse_formula(template.format(**adj), consts))


def _threshold_classes(sig: Signature, pos: str, neg: str) -> list:
    found = {t.cls for t in sig.thresholds if t.adjective in (pos, neg)}
    return [None] + sorted(c for c in found if c)


def instantiate_axioms(sig: Signature) -> list:
    """Named axiom instances for every relevant member of the signature."""
    out = []
    names = set(sig.gradable_names)
    for g in sig.gradables:
        out.append(_ax(f"CP[{g.lexeme}]", _CP, F=g.lexeme))
    for g in sig.gradables:
        if g.polarity == "negative":
            out.append(_ax(f"Ax1[{g.lexeme}]", _AX1, N=g.lexeme))
        else:
            out.append(_ax(f"Ax2[{g.lexeme}]", _AX2, P=g.lexeme))
    for g in sig.gradables:
        if g.polarity != "positive" or g.antonym is None:
            continue
        if g.antonym not in names:
            continue
        p, n = g.lexeme, g.antonym
        out += [
            _ax(f"Ax3[{n},{p}]", _AX3, N=n, P=p),
            _ax(f"Ax4[{p},{n}]", _AX4, N=n, P=p),
            _ax(f"Ax5[{n},{p}]", _AX5, N=n, P=p),
            _ax(f"Ax6[{p},{n}]", _AX6, N=n, P=p),
            _ax(f"Ax5'[{n},{p}]", _AX5B, N=n, P=p),
            _ax(f"Ax6'[{p},{n}]", _AX6B, N=n, P=p),
        ]
        for cls in _threshold_classes(sig, p, n):
            tag = f"{n},{p}" + (f"|{cls}" if cls else "")
            out.append(Axiom(f"TH[{tag}]", Cmp("<", Threshold(n, cls), Threshold(p, cls))))
    for mod, noun in sig.privatives:
        x = Var("x", E)
        out.append(Axiom(f"Privative[{mod},{noun}]", Forall(x, Implies(
            App(Const(f"{mod}_{noun}", Fun(E, T)), x), Not(App(Const(noun, Fun(E, T)), x))))))
    for noun in sig.choice_terms:
        p = Const(noun, Fun(E, T))
        out.append(Axiom(f"Choice[{noun}]", App(p, App(Const(CHOICE, Fun(Fun(E, T), E)), p))))
    return out


def comp_axiom(a: Axiom) -> bool:
    """True for the order-theoretic axioms (CP, Ax*, TH) as opposed to meaning postulates."""
    return a.name.startswith(("CP[", "Ax", "TH["))


# --- measure compilation -------------------------------------------------------

@dataclass(frozen=True)
class MeasureSymbol:
    dimension: str
    scale: str

    @property
    def name(self) -> str:
        return f"mu_{self.scale}"

    @property
    def const(self) -> Const:
        return Const(self.name, Fun(E, D))


def measure_symbols(sig: Signature) -> list:
    return sorted({MeasureSymbol(g.dimension, g.scale) for g in sig.gradables},
                  key=lambda m: m.scale)


def compile_to_measures(f: Term, sig: Signature) -> Term:
    """Replace F+(x, d) by mu(x) >= d and F-(x, d) by mu(x) <= d."""

    def step(s: Term) -> Term:
        if isinstance(s, App):
            head, args = head_and_args(s)
            if isinstance(head, Const) and head.type == ADJ_TYPE and len(args) == 2:
                rec = sig.gradable(head.name)
                if rec is None:
                    raise SignatureError(f"gradable predicate {head.name!r} is not in the signature")
                mu = App(MeasureSymbol(rec.dimension, rec.scale).const, args[0])
                return Cmp(">=" if rec.polarity == "positive" else "<=", mu, args[1])
        return s

    return map_bottom_up(f, step)


# --- dimensions ------------------------------------------------------------------

class _UF:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # dimension names win as representatives
        if isinstance(rb, tuple) and rb[0] == "dim":
            ra, rb = rb, ra
        if isinstance(ra, tuple) and ra[0] == "dim" and isinstance(rb, tuple) and rb[0] == "dim":
            raise SignatureError(f"degree compared across dimensions {ra[1]} and {rb[1]}")
        self.parent[rb] = ra


def binder_dimensions(f: Term, dims_of: Mapping[str, str]) -> dict:
    """Dimension of every degree binder in f, keyed by id() of the binder node.

    dims_of maps gradable predicates, measure functions and threshold
    adjectives to dimensions.  Unconstrained binders get 'degree'.
    """
    uf = _UF()
    binders: dict = {}

    def key(t: Term, env: dict):
        if isinstance(t, Var):
            return env.get(t.name, ("free", t.name))
        if isinstance(t, DegLit):
            return ("dim", t.dimension)
        if isinstance(t, Threshold):
            d = dims_of.get(t.adjective)
            return ("dim", d) if d else ("th", t.adjective, t.cls)
        if isinstance(t, DegAdd):
            a, b = key(t.left, env), key(t.right, env)
            uf.union(a, b)
            return a
        if isinstance(t, App) and isinstance(t.fun, Const) and t.fun.name in dims_of:
            walk(t.arg, env)
            return ("dim", dims_of[t.fun.name])
        if isinstance(t, Const):
            return ("const", t.name)
        return ("term", show(t))

    def walk(t: Term, env: dict):
        if isinstance(t, (Forall, Exists, Abs)):
            inner = dict(env)
            if t.var.type == D:
                k = ("bv", id(t))
                binders[id(t)] = k
                uf.find(k)
                inner[t.var.name] = k
            else:
                inner.pop(t.var.name, None)
            walk(t.body, inner)
        elif isinstance(t, Cmp):
            uf.union(key(t.left, env), key(t.right, env))
        elif isinstance(t, App):
            head, args = head_and_args(t)
            if isinstance(head, Const) and head.type == ADJ_TYPE and head.name in dims_of \
                    and len(args) == 2:
                walk(args[0], env)
                uf.union(key(args[1], env), ("dim", dims_of[head.name]))
            else:
                for a in args:
                    walk(a, env)
        elif isinstance(t, (Not,)):
            walk(t.body, env)
        elif isinstance(t, (And, Or, Implies)):
            walk(t.left, env)
            walk(t.right, env)

    walk(f, {})
    out = {}
    for bid, k in binders.items():
        root = uf.find(k)
        out[bid] = root[1] if isinstance(root, tuple) and root[0] == "dim" else "degree"
    return out


def dimension_table(sig: Signature) -> dict:
    out = {}
    for g in sig.gradables:
        out[g.lexeme] = g.dimension
        out[MeasureSymbol(g.dimension, g.scale).name] = g.dimension
    return out


# --- concrete evaluation -----------------------------------------------------------

@dataclass
class Interpretation:
    """A finite entity domain with exact rational degrees.

    consts maps E-constant names (including 'the(P)') to elements; preds
    maps non-gradable predicate names to sets of element tuples; measures
    maps (scale, element) to a degree; thresholds maps (adjective, cls) to
    a degree.  Gradable predicates are read off the measures.
    """

    entities: tuple
    consts: dict
    preds: dict
    measures: dict
    thresholds: dict
    gradables: dict                 # lexeme -> GradableRecord
    integral: frozenset = frozenset({"count"})
    _points: Optional[list] = field(default=None, repr=False)


class EvaluationError(ValueError):
    pass


def _deg_value(t: Term, it: Interpretation, env: dict) -> Fraction:
    if isinstance(t, DegLit):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Threshold):
        try:
            return it.thresholds[(t.adjective, t.cls)]
        except KeyError:
            raise EvaluationError(f"no value for {show(t)}") from None
    if isinstance(t, DegAdd):
        return _deg_value(t.left, it, env) + _deg_value(t.right, it, env)
    if isinstance(t, App) and isinstance(t.fun, Const) and t.fun.name.startswith("mu_"):
        return it.measures[(t.fun.name[3:], _entity(t.arg, it, env))]
    raise EvaluationError(f"not a degree term: {show(t)}")


def _entity(t: Term, it: Interpretation, env: dict):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return it.consts[t.name]
    if _is_choice(t):
        return it.consts[choice_name(t.arg.name)]
    raise EvaluationError(f"not an entity term: {show(t)}")


_OPS = {">": lambda a, b: a > b, ">=": lambda a, b: a >= b, "<": lambda a, b: a < b,
        "<=": lambda a, b: a <= b, "=": lambda a, b: a == b}


def _offsets(f: Term) -> set:
    offs = {Fraction(0)}
    lits = [s.value for s in subterms(f) if isinstance(s, DegLit)]
    for a in lits:
        offs |= {a, -a}
    for a in lits:
        for b in lits:
            offs.add(a - b)
    return offs


def _candidates(base: list, offsets: set, integral: bool) -> list:
    pts = sorted({b + o for b in base for o in offsets}) or [Fraction(0)]
    if integral:
        out = set()
        for p in pts:
            out |= {Fraction(math.floor(p)), Fraction(math.ceil(p))}
        lo, hi = min(out), max(out)
        return sorted(out | {lo - 1, hi + 1})
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids) | {pts[0] - 1, pts[-1] + 1})


def holds(f: Term, it: Interpretation, dims: Optional[dict] = None) -> bool:
    """Truth of a closed formula; degree quantifiers range over exact test points."""
    if dims is None:
        table = {}
        for g in it.gradables.values():
            table[g.lexeme] = g.dimension
            table[f"mu_{g.scale}"] = g.dimension
        dims = binder_dimensions(f, table)
    base = list(it.measures.values()) + list(it.thresholds.values())
    base += [s.value for s in subterms(f) if isinstance(s, DegLit)]
    offsets = _offsets(f)
    return _holds(f, it, {}, dims, base, offsets)


def _holds(f: Term, it, env, dims, base, offsets) -> bool:
    if isinstance(f, Not):
        return not _holds(f.body, it, env, dims, base, offsets)
    if isinstance(f, And):
        return _holds(f.left, it, env, dims, base, offsets) and _holds(f.right, it, env, dims, base, offsets)
    if isinstance(f, Or):
        return _holds(f.left, it, env, dims, base, offsets) or _holds(f.right, it, env, dims, base, offsets)
    if isinstance(f, Implies):
        return (not _holds(f.left, it, env, dims, base, offsets)) or _holds(f.right, it, env, dims, base, offsets)
    if isinstance(f, (Forall, Exists)):
        want = isinstance(f, Exists)
        if f.var.type == E:
            dom = it.entities
        elif f.var.type == D:
            extra = [v for v in env.values() if isinstance(v, Fraction)]
            dom = _candidates(base + extra, offsets, dims.get(id(f), "degree") in it.integral)
        else:
            raise EvaluationError(f"cannot quantify over {f.var.type}")
        for v in dom:
            if _holds(f.body, it, {**env, f.var.name: v}, dims, base, offsets) == want:
                return want
        return not want
    if isinstance(f, Cmp):
        return _OPS[f.op](_deg_value(f.left, it, env), _deg_value(f.right, it, env))
    head, args = head_and_args(f)
    if isinstance(head, Const):
        rec = it.gradables.get(head.name)
        if rec is not None and head.type == ADJ_TYPE:
            mu = it.measures[(rec.scale, _entity(args[0], it, env))]
            d = _deg_value(args[1], it, env)
            return mu >= d if rec.polarity == "positive" else mu <= d
        row = tuple(_entity(a, it, env) for a in args)
        return row in it.preds.get(head.name, set())
    raise EvaluationError(f"cannot evaluate {show(f)}")
