"""TPTP (fof) export of a proof problem.

Degrees become ordinary terms; comparisons become the uninterpreted
predicates ``less`` and ``leq`` with explicit order axioms, numerals
become constants ordered by ground facts, and ``d + c`` becomes
``plus(d, c)`` with shift axioms for each constant used.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from ..axioms import Axiom
from ..terms import (And, Cmp, Const, DegAdd, DegLit, Exists, Forall, Implies, Not, Or, Term,
                     Threshold, Var, head_and_args)

_ORDER = [
    ("leq_refl", "![X]: leq(X, X)"),
    ("leq_trans", "![X, Y, Z]: ((leq(X, Y) & leq(Y, Z)) => leq(X, Z))"),
    ("leq_total", "![X, Y]: (leq(X, Y) | leq(Y, X))"),
    ("less_def", "![X, Y]: (less(X, Y) <=> (leq(X, Y) & ~ leq(Y, X)))"),
]


def _atom(name: str) -> str:
    s = re.sub(r"[^a-z0-9_]", "_", name.lower()).strip("_")
    return s if s and s[0].isalpha() else f"c_{s}"


def numeral(v: Fraction, dim: str) -> str:
    body = str(v.numerator if v.denominator == 1 else f"{v.numerator}_{v.denominator}")
    return _atom(f"n_{dim}_{body}".replace("-", "m"))


class _Writer:
    def __init__(self):
        self.lits: set = set()         # (value, dimension)
        self.shifts: set = set()       # (value, dimension)

    def term(self, t: Term, env: dict) -> str:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return _atom(t.name)
        if isinstance(t, DegLit):
            self.lits.add((t.value, t.dimension))
            return numeral(t.value, t.dimension)
        if isinstance(t, Threshold):
            return _atom(f"th_{t.adjective}" + (f"_{t.cls}" if t.cls else ""))
        if isinstance(t, DegAdd):
            if isinstance(t.right, DegLit):
                self.shifts.add((t.right.value, t.right.dimension))
                return f"plus({self.term(t.left, env)}, {numeral(t.right.value, t.right.dimension)})"
            if isinstance(t.left, DegLit):
                return self.term(DegAdd(t.right, t.left), env)
            raise ValueError("only shifts by a literal are exported")
        head, args = head_and_args(t)
        if isinstance(head, Const) and head.name == "the" and len(args) == 1:
            return _atom(f"the_{args[0].name}")
        if isinstance(head, Const):
            return f"{_atom(head.name)}({', '.join(self.term(a, env) for a in args)})"
        raise ValueError(f"cannot export term {t}")

    def formula(self, f: Term, env: dict) -> str:
        if isinstance(f, Not):
            return f"~ ({self.formula(f.body, env)})"
        for cls, op in ((And, "&"), (Or, "|"), (Implies, "=>")):
            if isinstance(f, cls):
                return f"({self.formula(f.left, env)} {op} {self.formula(f.right, env)})"
        if isinstance(f, (Forall, Exists)):
            name = f"V{len(env)}_{_atom(f.var.name)}".upper()
            q = "!" if isinstance(f, Forall) else "?"
            return f"{q}[{name}]: ({self.formula(f.body, {**env, f.var.name: name})})"
        if isinstance(f, Cmp):
            l, r = self.term(f.left, env), self.term(f.right, env)
            return {">": f"less({r}, {l})", ">=": f"leq({r}, {l})", "<": f"less({l}, {r})",
                    "<=": f"leq({l}, {r})", "=": f"{l} = {r}"}[f.op]
        return self.term(f, env)

    def arithmetic(self) -> list:
        base = set(self.lits)
        points = set(base)
        for c, dim in self.shifts:
            points |= {(a + c, dim) for a, d in base if d == dim}
        points |= {(a + 1, "count") for a, d in base if d == "count"}
        out = []
        for dim in sorted({d for _, d in points}):
            vals = sorted(v for v, d in points if d == dim)
            for a, b in zip(vals, vals[1:]):
                out.append((f"order_{numeral(a, dim)}_{numeral(b, dim)}",
                            f"less({numeral(a, dim)}, {numeral(b, dim)})"))
            if dim == "count":
                for a in vals:
                    if (a + 1, dim) in points:
                        out.append((f"next_{numeral(a, dim)}",
                                    f"![X]: (less({numeral(a, dim)}, X) => leq({numeral(a + 1, dim)}, X))"))
        for c, dim in sorted(self.shifts):
            n = numeral(c, dim)
            rel = "less" if c > 0 else "leq" if c == 0 else None
            if rel:
                out.append((f"shift_{n}_up", f"![X]: {rel}(X, plus(X, {n}))"))
            out.append((f"shift_{n}_mono", f"![X, Y]: (leq(X, Y) <=> leq(plus(X, {n}), plus(Y, {n})))"))
            for a, d2 in sorted(base):
                if d2 == dim:
                    out.append((f"sum_{numeral(a, dim)}_{n}",
                                f"plus({numeral(a, dim)}, {n}) = {numeral(a + c, dim)}"))
        return out


def to_tptp(axioms: Sequence, premises: Sequence[Term], goal: Term) -> str:
    """fof problem whose unsatisfiability means the goal follows."""
    w = _Writer()
    body = []
    for k, a in enumerate(axioms, 1):
        name, f = (a.name, a.formula) if isinstance(a, Axiom) else (f"axiom {k}", a)
        body.append(f"% {name}\nfof({_atom(f'ax{k}_{name}')}, axiom, {w.formula(f, {})}).")
    for k, p in enumerate(premises, 1):
        body.append(f"fof(premise_{k}, axiom, {w.formula(p, {})}).")
    body.append(f"fof(negated_goal, negated_conjecture, ~ ({w.formula(goal, {})})).")
    head = [f"fof({name}, axiom, {text})." for name, text in _ORDER]
    head += [f"fof({_atom(name)}, axiom, {text})." for name, text in w.arithmetic()]
    return "\n".join(["% degree order"] + head + ["% problem"] + body) + "\n"

