"""Difference-logic solver for ground degree constraints.

Every constraint ``x + a  op  y + b`` becomes an edge of a weighted graph;
the conjunction is inconsistent iff the graph has a negative cycle.  Edge
weights are pairs (rational, k) read as ``rational + k*eps`` for an
infinitesimal eps, so strict inequalities are exact over a dense order.
Integral dimensions tighten ``x - y < c`` to ``x - y <= ceil(c) - 1`` instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union


class UnknownUnit(ValueError):
    pass


class MixedDimensions(ValueError):
    pass


# unit -> (dimension, factor to the base unit)
UNITS = {
    "inch": ("length", Fraction(1)), "inches": ("length", Fraction(1)), "in": ("length", Fraction(1)),
    "foot": ("length", Fraction(12)), "feet": ("length", Fraction(12)), "ft": ("length", Fraction(12)),
    "yard": ("length", Fraction(36)), "yards": ("length", Fraction(36)), "yd": ("length", Fraction(36)),
    "unit": ("count", Fraction(1)), "units": ("count", Fraction(1)),
}

INTEGRAL_DIMENSIONS = frozenset({"count"})


def unit_dimension(unit: str) -> str:
    try:
        return UNITS[unit][0]
    except KeyError:
        raise UnknownUnit(f"unknown unit {unit!r}") from None


def normalize_measure(value, unit: str) -> Fraction:
    """Convert a measure to its dimension's base unit, exactly."""
    try:
        _, factor = UNITS[unit]
    except KeyError:
        raise UnknownUnit(f"unknown unit {unit!r}") from None
    return Fraction(value) * factor


@dataclass(frozen=True, order=True)
class DegTerm:
    """atom + offset; atom None is a pure literal."""

    atom: Optional[str]
    offset: Fraction = Fraction(0)

    def __str__(self) -> str:
        if self.atom is None:
            return str(self.offset)
        if self.offset == 0:
            return self.atom
        sign = "+" if self.offset > 0 else "-"
        return f"{self.atom} {sign} {abs(self.offset)}"


def lit(v) -> DegTerm:
    return DegTerm(None, Fraction(v))


def atom(name: str, offset=0) -> DegTerm:
    return DegTerm(name, Fraction(offset))


NEGATE = {">": "<=", ">=": "<", "<": ">=", "<=": ">", "=": "!="}
FLIP = {">": "<", ">=": "<=", "<": ">", "<=": ">=", "=": "=", "!=": "!="}


@dataclass(frozen=True, order=True)
class DegreeConstraint:
    op: str
    lhs: DegTerm
    rhs: DegTerm
    dimension: str = "degree"

    def __post_init__(self):
        if self.op not in (">", ">=", "<", "<=", "="):
            raise ValueError(f"unsupported degree comparison {self.op!r}")

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs} [{self.dimension}]"

    def negated(self) -> list:
        """Disjuncts of the negation (two for '=')."""
        if self.op == "=":
            return [DegreeConstraint("<", self.lhs, self.rhs, self.dimension),
                    DegreeConstraint(">", self.lhs, self.rhs, self.dimension)]
        return [DegreeConstraint(NEGATE[self.op], self.lhs, self.rhs, self.dimension)]

    def holds(self, values: dict) -> bool:
        l = _value(self.lhs, values)
        r = _value(self.rhs, values)
        return {">": l > r, ">=": l >= r, "<": l < r, "<=": l <= r, "=": l == r}[self.op]


def _value(t: DegTerm, values: dict) -> Fraction:
    return t.offset + (values[t.atom] if t.atom is not None else 0)


@dataclass(frozen=True)
class Consistent:
    model: dict

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Inconsistent:
    core: tuple

    def __bool__(self) -> bool:
        return False


Outcome = Union[Consistent, Inconsistent]


def _zero(dim: str) -> str:
    return f"0@{dim}"


def _edges(c: DegreeConstraint, integral: bool) -> list:
    """Edges (src, dst, (w, k)) meaning dst - src <= w + k*eps."""
    l, r = c.lhs, c.rhs
    x = l.atom if l.atom is not None else _zero(c.dimension)
    y = r.atom if r.atom is not None else _zero(c.dimension)
    # normalise to  x + a  op  y + b
    a, b = l.offset, r.offset
    op = c.op
    out = []

    def le(u, ua, v, vb, strict):
        # u + ua <= v + vb  (strict: <)  i.e.  u - v <= vb - ua
        w = vb - ua
        if strict:
            if integral:
                out.append((v, u, (Fraction(math.ceil(w) - 1), 0)))
            else:
                out.append((v, u, (w, -1)))
        else:
            if integral:
                w = Fraction(math.floor(w))
            out.append((v, u, (w, 0)))

    if op in ("<", "<="):
        le(x, a, y, b, op == "<")
    elif op in (">", ">="):
        le(y, b, x, a, op == ">")
    else:
        le(x, a, y, b, False)
        le(y, b, x, a, False)
    return out


def _dimensions(cs: list) -> dict:
    dims: dict = {}
    for c in cs:
        for t in (c.lhs, c.rhs):
            if t.atom is None:
                continue
            prior = dims.setdefault(t.atom, c.dimension)
            if prior != c.dimension:
                raise MixedDimensions(
                    f"{t.atom} is compared in dimension {prior} and in dimension {c.dimension}")
    return dims


def check_constraints(cs: Iterable[DegreeConstraint],
                      integral: Iterable[str] = INTEGRAL_DIMENSIONS) -> Outcome:
    """Decide a conjunction of difference constraints.

    Returns Consistent(model) with an exact satisfying assignment of every
    atom, or Inconsistent(core) with the constraints on a negative cycle.
    """
    cs = list(dict.fromkeys(cs))
    integral = frozenset(integral)
    _dimensions(cs)
    edges = []
    for i, c in enumerate(cs):
        for src, dst, w in _edges(c, c.dimension in integral):
            edges.append((src, dst, w, i))
    nodes = sorted({n for e in edges for n in e[:2]})
    zero = (Fraction(0), 0)
    dist = {n: zero for n in nodes}
    pred: dict = {}
    changed_node = None
    for _ in range(len(nodes) + 1):
        changed_node = None
        for src, dst, w, i in edges:
            cand = (dist[src][0] + w[0], dist[src][1] + w[1])
            if cand < dist[dst]:
                dist[dst] = cand
                pred[dst] = (src, i)
                changed_node = dst
        if changed_node is None:
            break
    if changed_node is not None:
        return Inconsistent(_cycle_core(changed_node, pred, cs, len(nodes)))
    return Consistent(_model(dist, edges, cs, integral))


def _cycle_core(start: str, pred: dict, cs: list, n: int) -> tuple:
    node = start
    for _ in range(n):
        node = pred[node][0]
    cycle, seen, cur = [], set(), node
    while cur not in seen:
        seen.add(cur)
        src, i = pred[cur]
        cycle.append(i)
        cur = src
    return tuple(cs[i] for i in sorted(set(cycle)))


def _model(dist: dict, edges: list, cs: list, integral: frozenset) -> dict:
    # choose eps small enough that every lexicographic inequality stays true numerically
    eps = Fraction(1)
    for src, dst, w, _ in edges:
        slack = dist[src][0] + w[0] - dist[dst][0]
        coef = dist[dst][1] - dist[src][1] - w[1]
        if slack > 0 and coef > 0:
            eps = min(eps, slack / coef / 2)
    value = {n: d[0] + d[1] * eps for n, d in dist.items()}
    dims = _dimensions(cs)
    out = {}
    for n, v in value.items():
        if n.startswith("0@"):
            continue
        dim = dims.get(n)
        base = value.get(_zero(dim), Fraction(0)) if dim else Fraction(0)
        out[n] = v - base
    return out


def entails(facts: Iterable[DegreeConstraint], c: DegreeConstraint,
            integral: Iterable[str] = INTEGRAL_DIMENSIONS) -> Optional[tuple]:
    """If facts entail c, return the supporting core (one per negation disjunct), else None."""
    facts = list(facts)
    cores = []
    for neg in c.negated():
        res = check_constraints(facts + [neg], integral)
        if res:
            return None
        cores.extend(x for x in res.core if x != neg)
    return tuple(dict.fromkeys(cores))
