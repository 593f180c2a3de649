"""Bounded countermodel search in the measure reading.

For each entity-domain size and each canonical assignment of constants to
elements, the formulas are grounded, their degree quantifiers eliminated,
and the resulting boolean combination of atoms and comparisons is searched
by a tableau that consults the difference-logic solver at every step.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from ..axioms import Interpretation, Signature, holds, signature_of
from ..degree import INTEGRAL_DIMENSIONS, DegreeConstraint, DegTerm, check_constraints
from ..lexicon import Lexicon, builtin_lexicon
from ..terms import Term
from . import qe
from .ground import Grounder
from .resolution import Budget


@dataclass
class Model:
    entities: tuple
    consts: dict
    preds: dict                        # name -> sorted list of element tuples
    measures: dict                     # (scale, element) -> degree
    thresholds: dict                   # (adjective, cls) -> degree
    interpretation: Interpretation = field(repr=False, default=None)

    def __bool__(self) -> bool:
        return True

    @property
    def degree_points(self) -> int:
        return len(set(self.measures.values()) | set(self.thresholds.values()))

    def render(self) -> str:
        lines = [f"entities: {', '.join(self.entities)}"]
        for c, e in sorted(self.consts.items()):
            lines.append(f"  {c} = {e}")
        for p, rows in sorted(self.preds.items()):
            cells = ", ".join("(" + ", ".join(r) + ")" if len(r) != 1 else r[0] for r in rows)
            lines.append(f"  {p}: {{{cells}}}")
        for (s, e), v in sorted(self.measures.items()):
            lines.append(f"  mu_{s}({e}) = {v}")
        for (a, c), v in sorted(self.thresholds.items(), key=lambda kv: (kv[0][0], kv[0][1] or "")):
            lines.append(f"  th({a}{',' + c if c else ''}) = {v}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "entities": list(self.entities),
            "constants": dict(self.consts),
            "predicates": {p: [list(r) for r in rows] for p, rows in self.preds.items()},
            "measures": {f"mu_{s}({e})": str(v) for (s, e), v in sorted(self.measures.items())},
            "thresholds": {f"th({a}{',' + c if c else ''})": str(v)
                           for (a, c), v in self.thresholds.items()},
        }


@dataclass
class NoModelWithinBounds:
    def __bool__(self) -> bool:
        return False


@dataclass
class OutOfBudget:
    def __bool__(self) -> bool:
        return False


def _assignments(n_consts: int, n: int) -> Iterator[tuple]:
    """Restricted growth strings: constants to elements up to renaming of elements."""
    def go(prefix: tuple, top: int):
        if len(prefix) == n_consts:
            yield prefix
            return
        for v in range(min(top + 2, n)):
            yield from go(prefix + (v,), max(top, v))
    yield from go((), -1)


class _Bounds:
    """Closed difference-bound matrix: d[u][v] bounds v - u, as (constant, strict).

    Weights are pairs compared lexicographically, strict meaning minus an
    infinitesimal; in integral dimensions strict bounds are rounded down.
    """

    __slots__ = ("d", "integral")

    def __init__(self, integral: frozenset, d: Optional[dict] = None):
        self.integral = integral
        self.d = d if d is not None else {}

    def copy(self) -> "_Bounds":
        return _Bounds(self.integral, {u: dict(row) for u, row in self.d.items()})

    def _node(self, k, dim: str) -> str:
        n = k if k is not None else f"0@{dim}"
        if n not in self.d:
            self.d[n] = {n: (0, 0)}
        return n

    def edges(self, c: tuple, dim: str) -> list:
        _, op, (x, a), (y, b) = c
        x, y = self._node(x, dim), self._node(y, dim)
        strict = -1 if op in ("<", ">") else 0

        def w(k):
            return (k - 1, 0) if strict and dim in self.integral else (k, strict)

        le = [(y, x, w(b - a))]          # x + a <= y + b
        ge = [(x, y, w(a - b))]          # y + b <= x + a
        return {"<": le, "<=": le, ">": ge, ">=": ge, "=": le + ge}[op]

    def _get(self, u, v):
        return self.d[u].get(v)

    def allows(self, edges: list) -> bool:
        for u, v, w in edges:
            back = self._get(v, u)
            if back is not None and (back[0] + w[0], back[1] + w[1]) < (0, 0):
                return False
        if len(edges) > 1:
            trial = self.copy()
            return trial.add(edges)
        return True

    def entails(self, edges: list) -> bool:
        for u, v, w in edges:
            cur = self._get(u, v)
            if cur is None or cur > w:
                return False
        return True

    def add(self, edges: list) -> bool:
        for u, v, w in edges:
            cur = self._get(u, v)
            if cur is not None and cur <= w:
                continue
            back = self._get(v, u)
            if back is not None and (back[0] + w[0], back[1] + w[1]) < (0, 0):
                return False
            into_u = [(i, row[u]) for i, row in self.d.items() if u in row]
            from_v = list(self.d[v].items())
            for i, wi in into_u:
                row = self.d[i]
                for j, wj in from_v:
                    cand = (wi[0] + w[0] + wj[0], wi[1] + w[1] + wj[1])
                    old = row.get(j)
                    if old is None or cand < old:
                        row[j] = cand
        return True


class _Search:
    def __init__(self, dims: dict, max_points: int, deadline: float):
        self.dims = dims
        self.max_points = max_points
        self.deadline = deadline

    def dim(self, c: tuple) -> str:
        _, _, (k1, _), (k2, _) = c
        return self.dims.get(k1) or self.dims.get(k2) or "degree"

    def constraint(self, c: tuple) -> DegreeConstraint:
        _, op, (k1, a), (k2, b) = c
        return DegreeConstraint(op, DegTerm(k1, a), DegTerm(k2, b), self.dim(c))

    def _simp(self, f, atoms: dict, bounds: _Bounds):
        tag = f[0]
        if tag == "atom":
            v = atoms.get(f[1])
            return f if v is None else (qe.TRUE if v else qe.FALSE)
        if tag == "not":
            inner = self._simp(f[1], atoms, bounds)
            return qe.negate(inner) if inner[0] in ("true", "false") else f
        if tag == "cmp":
            e = bounds.edges(f, self.dim(f))
            if bounds.entails(e):
                return qe.TRUE
            return f if bounds.allows(e) else qe.FALSE
        if tag == "and":
            return qe.mk_and([self._simp(g, atoms, bounds) for g in f[1]])
        if tag == "or":
            return qe.mk_or([self._simp(g, atoms, bounds) for g in f[1]])
        return f

    def solve(self, pending: list, atoms: dict, cons: list, bounds: _Bounds, disj: list):
        if time.monotonic() > self.deadline:
            raise TimeoutError
        pending = list(pending)
        bounds = bounds.copy()
        while True:
            while pending:
                f = pending.pop()
                tag = f[0]
                if tag == "true":
                    continue
                if tag == "false":
                    return None
                if tag == "and":
                    pending.extend(f[1])
                elif tag == "atom":
                    if atoms.get(f[1]) is False:
                        return None
                    atoms = {**atoms, f[1]: True}
                elif tag == "not" and f[1][0] == "atom":
                    if atoms.get(f[1][1]) is True:
                        return None
                    atoms = {**atoms, f[1][1]: False}
                elif tag == "cmp":
                    if not bounds.add(bounds.edges(f, self.dim(f))):
                        return None
                    cons = cons + [self.constraint(f)]
                elif tag == "or":
                    disj = disj + [f]
                else:
                    raise ValueError(f"unexpected node {tag}")
            new_disj = []
            for d in disj:
                s = self._simp(d, atoms, bounds)
                if s == qe.FALSE:
                    return None
                if s == qe.TRUE:
                    continue
                if s[0] == "or":
                    new_disj.append(s)
                else:
                    pending.append(s)
            disj = new_disj
            if not pending:
                break
        if not disj:
            res = check_constraints(cons)
            if not res:
                raise AssertionError("difference bounds and solver disagree")
            if len(set(res.model.values())) > self.max_points:
                return None
            return atoms, res.model
        disj.sort(key=lambda d: len(d[1]))
        first, rest = disj[0], disj[1:]
        for option in first[1]:
            got = self.solve([option], atoms, cons, bounds, rest)
            if got is not None:
                return got
        return None


_MU = re.compile(r"mu_(\w+)\((\w+)\)$")
_TH = re.compile(r"th\((\w+)(?:,(\w+))?\)$")


def find_countermodel(fs: Sequence[Term], b: Budget = Budget(), lexicon: Optional[Lexicon] = None,
                      sig: Optional[Signature] = None):
    """First model (in enumeration order) satisfying every formula, or why there is none."""
    lex = lexicon or builtin_lexicon()
    if sig is None:
        sig = signature_of(fs, lex)
    gradables = {g.lexeme: g for g in sig.gradables}
    for g in list(gradables.values()):
        if g.antonym and g.antonym not in gradables and lex.gradable(g.antonym):
            gradables[g.antonym] = lex.gradable(g.antonym)
    consts = list(sig.entities)
    deadline = time.monotonic() + b.time_limit
    scales = sorted({g.scale for g in gradables.values()})
    try:
        for n in range(1, b.max_entities + 1):
            domain = tuple(f"e{i}" for i in range(n))
            for assign in _assignments(len(consts), n):
                if time.monotonic() > deadline:
                    raise TimeoutError
                cmap = dict(zip(consts, (domain[i] for i in assign)))
                g = Grounder(domain, cmap, gradables)
                parts = [qe.eliminate(g.ground(f), frozenset(g.integral_vars)) for f in fs]
                body = qe.mk_and(parts)
                if body == qe.FALSE:
                    continue
                search = _Search(g.dims, b.max_degree_points, deadline)
                got = search.solve([body], {}, [], _Bounds(INTEGRAL_DIMENSIONS), [])
                if got is None:
                    continue
                atoms, values = got
                model = _build(domain, cmap, atoms, values, scales, sig, gradables)
                for f in fs:
                    if not holds(f, model.interpretation):
                        raise AssertionError(f"countermodel fails its own formula: {f}")
                return model
    except TimeoutError:
        return OutOfBudget()
    return NoModelWithinBounds()


def _build(domain, cmap, atoms, values, scales, sig, gradables) -> Model:
    preds: dict = {}
    for key, val in atoms.items():
        if val:
            preds.setdefault(key[0], set()).add(tuple(key[1:]))
    preds = {p: sorted(rows) for p, rows in sorted(preds.items())}
    measures = {(s, e): Fraction(0) for s in scales for e in domain}
    thresholds: dict = {(t.adjective, t.cls): Fraction(0) for t in sig.thresholds}
    for key, v in values.items():
        m = _MU.match(key)
        if m:
            measures[(m.group(1), m.group(2))] = v
            continue
        m = _TH.match(key)
        if m:
            thresholds[(m.group(1), m.group(2))] = v
    interp = Interpretation(domain, dict(cmap), {p: set(r) for p, r in preds.items()},
                            measures, thresholds, gradables)
    return Model(domain, dict(cmap), preds, measures, thresholds, interp)
