"""Given-clause resolution with a difference-logic theory for degree literals.

Predicate literals are resolved and factored; comparison literals are
constraints.  A ground comparison is dropped from a clause when the unit
degree facts refute it, and the clause is dropped when the facts entail it.
A degree variable that occurs only in comparisons is eliminated by virtual
substitution.  Ground clauses made only of comparisons are collected and
checked together; an unsatisfiable collection closes the proof.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..degree import INTEGRAL_DIMENSIONS, MixedDimensions, check_constraints
from . import qe
from .fol import (CLit, F, L, Literal, PLit, V, clause_vars, constraint, decided, depth, is_ground,
                  linear, lit_vars, normalize_vars, rename, shift, show_clause, subst_lit, unify)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Budget:
    time_limit: float = 10.0
    max_clauses: int = 50_000
    max_entities: int = 3
    max_degree_points: int = 5
    max_depth: int = 3
    max_literals: int = 4

    def __post_init__(self):
        for name in ("time_limit", "max_clauses", "max_entities", "max_degree_points", "max_depth",
                     "max_literals"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")


@dataclass
class Step:
    id: int
    lits: tuple
    rule: str                      # input | resolve | factor | theory | eliminate | close
    parents: tuple = ()
    info: dict = field(default_factory=dict)
    label: Optional[str] = None

    def __str__(self) -> str:
        src = self.label if self.rule == "input" else \
            f"{self.rule} {','.join(map(str, self.parents))}" if self.parents else self.rule
        return f"{self.id:>4}. {show_clause(self.lits)}   [{src}]"


@dataclass
class Proved:
    trace: list                    # Steps of the refutation, topologically ordered

    def __bool__(self) -> bool:
        return True

    def cited(self) -> list:
        return [s.label for s in self.trace if s.rule == "input"]

    def render(self) -> str:
        return "\n".join(map(str, self.trace))


@dataclass
class GaveUp:
    reason: str                    # budget | saturation-without-proof

    def __bool__(self) -> bool:
        return False


class _Refuted(Exception):
    def __init__(self, step: Step):
        self.step = step


def _integral(dim: str) -> bool:
    return dim in INTEGRAL_DIMENSIONS


def _weight(lits: tuple) -> tuple:
    size = sum(len(str(l)) for l in lits)
    return (len(lits), size)


# --- clause-level degree-variable elimination -------------------------------------------

def _key(t):
    base, off = linear(t)
    return (base, off)


def _from_key(k, dim) -> object:
    base, off = k
    if base is None:
        return L(off, dim)
    return shift(base, off)


def _to_qe(c: CLit) -> tuple:
    return qe.cmp(c.op, _key(c.left), _key(c.right))


def _from_qe(node: tuple, dim: str) -> Optional[CLit]:
    _, op, l, r = node
    return CLit(op, _from_key(l, dim), _from_key(r, dim), dim)


def eliminable(lits: tuple) -> Optional[V]:
    """A degree variable occurring only in comparison literals, if any."""
    blocked = set()
    for l in lits:
        if isinstance(l, PLit):
            blocked |= lit_vars(l)
        else:
            # variables nested inside function terms cannot be eliminated
            for t in (l.left, l.right):
                base, _ = linear(t)
                if not isinstance(base, V):
                    blocked |= lit_vars(CLit("=", t, t))
    for l in lits:
        if isinstance(l, CLit):
            for v in sorted(lit_vars(l), key=str):
                if v.sort == "D" and v not in blocked:
                    return v
    return None


def eliminate_var(lits: tuple, v: V) -> list:
    """Clauses equivalent to  forall v. lits  (v only in comparisons)."""
    with_v = [l for l in lits if isinstance(l, CLit) and v in lit_vars(l)]
    rest = [l for l in lits if not (isinstance(l, CLit) and v in lit_vars(l))]
    dim = with_v[0].dim
    neg = qe.mk_and([qe.negate(_to_qe(l)) for l in with_v])
    ex = qe.eliminate_exists(v, neg, _integral(dim))
    out = []
    for cl in qe.cnf(qe.negate(ex)):
        new = list(rest)
        for node in cl:
            new.append(_from_qe(node, dim))
        out.append(tuple(dict.fromkeys(new)))
    return out


# --- satisfiability of ground comparison clauses ------------------------------------------

def _dpll(clauses: Sequence[tuple], chosen: list, deadline: float) -> bool:
    """Is there a choice of one literal per clause that is jointly consistent?"""
    if time.monotonic() > deadline:
        raise TimeoutError
    if not clauses:
        return True
    cs = [constraint(c) for c in chosen]
    # prune each clause's literals against the current choice
    best = None
    for i, cl in enumerate(clauses):
        live = [l for l in cl if check_constraints(cs + [constraint(l)])]
        if not live:
            return False
        if best is None or len(live) < len(best[1]):
            best = (i, live)
    i, live = best
    rest = clauses[:i] + clauses[i + 1:]
    for l in live:
        if _dpll(rest, chosen + [l], deadline):
            return True
    return False


def ground_cmp_unsat(clauses: Sequence[tuple], deadline: float = float("inf")) -> bool:
    return not _dpll(list(clauses), [], deadline)


# --- the prover ---------------------------------------------------------------------------

class Prover:
    def __init__(self, budget: Budget):
        self.b = budget
        self.steps: dict = {}
        self._ids = itertools.count(1)
        self.active: list = []
        self.passive: list = []
        self.facts: list = []              # (DegreeConstraint, step id)
        self.cmp_clauses: list = []        # ground pure-comparison clauses (step ids)
        self.seen: set = set()
        self.generated = 0
        self.deadline = time.monotonic() + budget.time_limit

    # bookkeeping
    def _new(self, lits, rule, parents=(), info=None, label=None) -> Step:
        s = Step(next(self._ids), tuple(lits), rule, tuple(parents), info or {}, label)
        self.steps[s.id] = s
        return s

    def _check_budget(self) -> None:
        if self.generated > self.b.max_clauses or time.monotonic() > self.deadline:
            raise TimeoutError

    # simplification pipeline; returns the final step to keep, or None
    def process(self, s: Step) -> None:
        work = [s]
        while work:
            self._check_budget()
            cur = work.pop()
            kept = self._simplify(cur, work)
            if kept is not None:
                self._keep(kept)

    def _simplify(self, s: Step, work: list) -> Optional[Step]:
        lits = s.lits
        # evaluate decided comparisons
        out, removed = [], []
        for l in lits:
            if isinstance(l, CLit):
                val = decided(l)
                if val is True:
                    return None
                if val is False:
                    removed.append(l)
                    continue
            out.append(l)
        if removed:
            s = self._new(out, "theory", (s.id,), {"removed": [str(l) for l in removed], "core": []})
            lits = s.lits
        # tautologies
        pos = {(l.pred, l.args) for l in lits if isinstance(l, PLit) and l.positive}
        if any(isinstance(l, PLit) and not l.positive and (l.pred, l.args) in pos for l in lits):
            return None
        if any(depth(a) > self.b.max_depth for l in lits if isinstance(l, PLit) for a in l.args):
            return None
        if sum(isinstance(l, PLit) for l in lits) > self.b.max_literals:
            return None
        # theory simplification against unit facts
        s2 = self._theory(s)
        if s2 is None:
            return None
        s = s2
        lits = s.lits
        # degree variables that only occur in comparisons
        v = eliminable(lits)
        if v is not None:
            for k, new in enumerate(eliminate_var(lits, v)):
                work.append(self._new(normalize_vars(new), "eliminate", (s.id,), {"var": str(v), "index": k}))
            return None
        key = normalize_vars(sorted(lits, key=str))
        if key in self.seen:
            return None
        if self._subsumed(lits):
            return None
        self.seen.add(key)
        return s

    def _theory(self, s: Step) -> Optional[Step]:
        if not self.facts:
            return s
        cs = [c for c, _ in self.facts]
        keep, removed, core_ids = [], [], set()
        for l in s.lits:
            if isinstance(l, CLit) and is_ground(l):
                c = constraint(l)
                try:
                    res = check_constraints(cs + [c])
                except MixedDimensions:
                    keep.append(l)
                    continue
                if not res:
                    removed.append(str(l))
                    core_ids |= self._fact_ids(res.core, c)
                    continue
                if _entailed(cs, c):
                    return None
            keep.append(l)
        if not removed:
            return s
        return self._new(keep, "theory", (s.id,) + tuple(sorted(core_ids)),
                         {"removed": removed, "core": sorted(core_ids)})

    def _fact_ids(self, core, own) -> set:
        out = set()
        for c in core:
            if c == own:
                continue
            for fc, fid in self.facts:
                if fc == c:
                    out.add(fid)
                    break
        return out

    def _subsumed(self, lits: tuple) -> bool:
        n = len(lits)
        for sid in self.active:
            other = self.steps[sid].lits
            if len(other) <= n and _subsumes(other, lits):
                return True
        return False

    def _keep(self, s: Step) -> None:
        self.generated += 1
        self._check_budget()
        if not s.lits:
            raise _Refuted(s)
        if all(isinstance(l, CLit) for l in s.lits) and all(is_ground(l) for l in s.lits):
            self.cmp_clauses.append(s.id)
            if len(s.lits) == 1:
                self._add_fact(s)
            if len(s.lits) > 1 or len(self.cmp_clauses) > len(self.facts):
                self._check_cmp_clauses()
            return
        heapq.heappush(self.passive, (_weight(s.lits), s.id))

    def _add_fact(self, s: Step) -> None:
        c = constraint(s.lits[0])
        self.facts.append((c, s.id))
        res = check_constraints([c for c, _ in self.facts])
        if not res:
            ids = sorted(self._fact_ids(res.core, None))
            raise _Refuted(self._new((), "close", tuple(ids), {"core": ids}))
        # clauses kept earlier may now simplify
        for sid in list(self.active):
            st = self.steps[sid]
            if any(isinstance(l, CLit) and is_ground(l) for l in st.lits):
                self._pending.append(st)

    def _check_cmp_clauses(self) -> None:
        pool = [self.steps[i] for i in self.cmp_clauses]
        if not ground_cmp_unsat([p.lits for p in pool], self.deadline):
            return
        # shrink to a minimal unsatisfiable subset
        core = list(pool)
        for p in pool:
            trial = [q for q in core if q is not p]
            if ground_cmp_unsat([q.lits for q in trial], self.deadline):
                core = trial
        ids = [p.id for p in core]
        raise _Refuted(self._new((), "close", tuple(ids), {"core": ids}))

    # inferences
    def _infer(self, g: Step) -> list:
        out = []
        for aid in self.active:
            a = self.steps[aid]
            out.extend(self._resolve(g, a))
        out.extend(self._factor(g))
        return out

    def _resolve(self, g: Step, a: Step) -> list:
        out = []
        b_lits = rename(a.lits, "'")
        for i, li in enumerate(g.lits):
            if not isinstance(li, PLit):
                continue
            for j, lj in enumerate(b_lits):
                if not isinstance(lj, PLit) or lj.positive == li.positive or lj.pred != li.pred \
                        or len(lj.args) != len(li.args):
                    continue
                sub: Optional[dict] = {}
                for x, y in zip(li.args, lj.args):
                    sub = unify(x, y, sub)
                    if sub is None:
                        break
                if sub is None:
                    continue
                lits = [subst_lit(l, sub) for k, l in enumerate(g.lits) if k != i]
                lits += [subst_lit(l, sub) for k, l in enumerate(b_lits) if k != j]
                lits = normalize_vars(tuple(dict.fromkeys(lits)))
                out.append(self._new(lits, "resolve", (g.id, a.id), {"lits": (i, j)}))
        return out

    def _factor(self, g: Step) -> list:
        out = []
        for i, j in itertools.combinations(range(len(g.lits)), 2):
            li, lj = g.lits[i], g.lits[j]
            if not (isinstance(li, PLit) and isinstance(lj, PLit)) or li.positive != lj.positive \
                    or li.pred != lj.pred:
                continue
            sub: Optional[dict] = {}
            for x, y in zip(li.args, lj.args):
                sub = unify(x, y, sub)
                if sub is None:
                    break
            if sub is None:
                continue
            lits = [subst_lit(l, sub) for k, l in enumerate(g.lits) if k != j]
            lits = normalize_vars(tuple(dict.fromkeys(lits)))
            out.append(self._new(lits, "factor", (g.id,), {"lits": (i, j)}))
        return out

    def run(self, inputs: Iterable[tuple]) -> object:
        """inputs: (label, clause literals)."""
        self._pending: list = []
        try:
            for label, lits in inputs:
                self.process(self._new(lits, "input", (), {}, label))
            while True:
                self._drain_pending()
                if not self.passive:
                    return GaveUp("saturation-without-proof")
                _, gid = heapq.heappop(self.passive)
                g = self.steps[gid]
                if any(isinstance(l, CLit) and is_ground(l) for l in g.lits) and self.facts:
                    g2 = self._theory(g)
                    if g2 is None:
                        continue
                    if g2 is not g:
                        self.process(g2)
                        continue
                if self._subsumed_strict(g):
                    continue
                self.active.append(g.id)
                for new in self._infer(g):
                    self.process(new)
                    self._check_budget()
        except _Refuted as r:
            return Proved(extract(self.steps, r.step))
        except TimeoutError:
            return GaveUp("budget")

    def _drain_pending(self) -> None:
        while self._pending:
            st = self._pending.pop()
            s2 = self._theory(st)
            if s2 is None or s2 is st:
                continue
            self.process(s2)

    def _subsumed_strict(self, g: Step) -> bool:
        for sid in self.active:
            other = self.steps[sid].lits
            if len(other) <= len(g.lits) and _subsumes(other, g.lits):
                return True
        return False


def _entailed(cs: list, c) -> bool:
    for neg in c.negated():
        if check_constraints(cs + [neg]):
            return False
    return True


def _match(pat, t, s: dict) -> Optional[dict]:
    """One-way matching of FOL terms (variables only in pat)."""
    if isinstance(pat, V):
        if pat in s:
            return s if s[pat] == t else None
        if pat.sort != t.sort:
            return None
        s = dict(s)
        s[pat] = t
        return s
    if type(pat) is not type(t):
        if hasattr(pat, "base") and isinstance(pat.base, V):
            # D + c matches any degree term t as D := t - c
            return _match(pat.base, shift(t, -pat.offset), s)
        return None
    if isinstance(pat, F):
        if pat.name != t.name or len(pat.args) != len(t.args):
            return None
        for a, b in zip(pat.args, t.args):
            s = _match(a, b, s)
            if s is None:
                return None
        return s
    if hasattr(pat, "base"):
        if pat.offset != t.offset:
            return _match(pat.base, shift(t, -pat.offset), s) if isinstance(pat.base, V) else None
        return _match(pat.base, t.base, s)
    return s if pat == t else None


def _match_lit(a: Literal, b: Literal, s: dict) -> Optional[dict]:
    if isinstance(a, PLit):
        if not isinstance(b, PLit) or a.positive != b.positive or a.pred != b.pred \
                or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            s = _match(x, y, s)
            if s is None:
                return None
        return s
    if not isinstance(b, CLit) or a.op != b.op:
        return None
    s = _match(a.left, b.left, s)
    return None if s is None else _match(a.right, b.right, s)


def _implies(a: CLit, b: CLit) -> bool:
    """a entails b, free variables read as unknown degrees."""
    if a.dim != b.dim:
        return False
    try:
        return _entailed([constraint(a)], constraint(b))
    except MixedDimensions:
        return False


def _subsumes(c: tuple, d: tuple) -> bool:
    """Does clause c subsume clause d?

    Some instance of c must map each literal into d: predicate literals
    exactly, comparison literals onto a literal of d they entail.
    """
    # rename c apart so its variables cannot clash with d's; predicate literals bind first
    c = sorted(rename(c, "~"), key=lambda l: isinstance(l, CLit))

    def go(i: int, s: dict) -> bool:
        if i == len(c):
            return True
        for l in d:
            s2 = _match_lit(c[i], l, s)
            if s2 is not None and go(i + 1, s2):
                return True
        if isinstance(c[i], CLit):
            inst = subst_lit(c[i], s)
            if lit_vars(inst) <= clause_vars(d):
                for l in d:
                    if isinstance(l, CLit) and _implies(inst, l) and go(i + 1, s):
                        return True
        return False

    return go(0, {})


def extract(steps: dict, final: Step) -> list:
    """Ancestors of the final step, in id order."""
    need, stack = set(), [final.id]
    while stack:
        i = stack.pop()
        if i in need:
            continue
        need.add(i)
        stack.extend(steps[i].parents)
    return [steps[i] for i in sorted(need)]


def prove_clauses(inputs: list, budget: Budget) -> object:
    return Prover(budget).run(inputs)


# --- replay --------------------------------------------------------------------------------

class ReplayError(AssertionError):
    pass


def _same_upto_renaming(a: tuple, b: tuple) -> bool:
    return normalize_vars(a) == normalize_vars(b)


def replay(trace: list) -> bool:
    """Check every step of a proof trace; raises ReplayError on the first bad step."""
    by_id = {s.id: s for s in trace}
    for s in trace:
        if s.rule == "input":
            continue
        ps = [by_id[p] for p in s.parents]
        if s.rule == "resolve":
            g, a = ps[0], ps[1]
            i, j = s.info["lits"]
            b = rename(a.lits, "'")
            li, lj = g.lits[i], b[j]
            if not (isinstance(li, PLit) and isinstance(lj, PLit) and li.positive != lj.positive
                    and li.pred == lj.pred):
                raise ReplayError(f"step {s.id}: literals are not complementary")
            sub: Optional[dict] = {}
            for x, y in zip(li.args, lj.args):
                sub = unify(x, y, sub)
                if sub is None:
                    raise ReplayError(f"step {s.id}: literals do not unify")
            lits = [subst_lit(l, sub) for k, l in enumerate(g.lits) if k != i]
            lits += [subst_lit(l, sub) for k, l in enumerate(b) if k != j]
            if not _same_upto_renaming(tuple(dict.fromkeys(lits)), s.lits):
                raise ReplayError(f"step {s.id}: wrong resolvent")
        elif s.rule == "factor":
            g = ps[0]
            i, j = s.info["lits"]
            sub = {}
            for x, y in zip(g.lits[i].args, g.lits[j].args):
                sub = unify(x, y, sub)
                if sub is None:
                    raise ReplayError(f"step {s.id}: factor does not unify")
            lits = [subst_lit(l, sub) for k, l in enumerate(g.lits) if k != j]
            if not _same_upto_renaming(tuple(dict.fromkeys(lits)), s.lits):
                raise ReplayError(f"step {s.id}: wrong factor")
        elif s.rule == "theory":
            parent = ps[0]
            facts = [constraint(by_id[i].lits[0]) for i in s.info["core"]]
            removed = [l for l in parent.lits if str(l) in s.info["removed"]]
            for l in removed:
                if check_constraints(facts + [constraint(l)]):
                    raise ReplayError(f"step {s.id}: {l} is not refuted by its core")
            rest = tuple(l for l in parent.lits if str(l) not in s.info["removed"])
            if rest != s.lits:
                raise ReplayError(f"step {s.id}: wrong remainder")
        elif s.rule == "eliminate":
            parent = ps[0]
            v = next(x for x in clause_vars(parent.lits) if str(x) == s.info["var"])
            new = eliminate_var(parent.lits, v)[s.info["index"]]
            if not _same_upto_renaming(new, s.lits):
                raise ReplayError(f"step {s.id}: wrong elimination")
        elif s.rule == "close":
            if s.lits:
                raise ReplayError(f"step {s.id}: close must conclude the empty clause")
            pool = [p.lits for p in ps]
            if not all(all(isinstance(l, CLit) and is_ground(l) for l in p) for p in pool):
                raise ReplayError(f"step {s.id}: close over non-ground or predicate literals")
            if not ground_cmp_unsat(pool):
                raise ReplayError(f"step {s.id}: comparison clauses are satisfiable")
        else:
            raise ReplayError(f"step {s.id}: unknown rule {s.rule}")
    if not trace or trace[-1].lits:
        raise ReplayError("trace does not end in the empty clause")
    return True
