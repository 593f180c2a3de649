"""Two-sorted first-order clauses and clausification.

Sorts are "E" (entities) and "D" (degrees).  Degree terms may carry a
rational offset (``Add``); comparison literals (``CLit``) are interpreted
by the degree theory and never resolved upon.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from ..axioms import CHOICE, binder_dimensions
from ..degree import NEGATE, DegreeConstraint, DegTerm
from ..terms import (D, E, And, App, Cmp, Const, DegAdd, DegLit, Exists, Forall, Fun, Implies,
                     Not, Or, Term, Threshold, Var, head_and_args)
from ..textual import show


class ClausifyError(ValueError):
    pass


# --- terms -------------------------------------------------------------------------

@dataclass(frozen=True)
class V:
    name: str
    sort: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class F:
    name: str
    args: tuple = ()
    sort: str = "E"

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class L:
    """A numeric degree in base units."""

    value: Fraction
    dim: str

    sort = "D"

    def __str__(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Add:
    base: "FTerm"
    offset: Fraction

    sort = "D"

    def __str__(self) -> str:
        sign = "+" if self.offset > 0 else "-"
        return f"{self.base} {sign} {L(abs(self.offset), '')}"


FTerm = Union[V, F, L, Add]


def shift(t: FTerm, c: Fraction) -> FTerm:
    """t + c, normalised."""
    if not c:
        return t
    if isinstance(t, L):
        return L(t.value + c, t.dim)
    if isinstance(t, Add):
        return shift(t.base, t.offset + c)
    return Add(t, Fraction(c))


def linear(t: FTerm) -> tuple:
    """(base | None, offset)."""
    if isinstance(t, L):
        return None, t.value
    if isinstance(t, Add):
        return t.base, t.offset
    return t, Fraction(0)


def term_vars(t: FTerm, out: Optional[set] = None) -> set:
    out = set() if out is None else out
    if isinstance(t, V):
        out.add(t)
    elif isinstance(t, F):
        for a in t.args:
            term_vars(a, out)
    elif isinstance(t, Add):
        term_vars(t.base, out)
    return out


def depth(t: FTerm) -> int:
    if isinstance(t, F) and t.args:
        return 1 + max(depth(a) for a in t.args)
    if isinstance(t, Add):
        return depth(t.base)
    return 0


# --- literals ------------------------------------------------------------------------

@dataclass(frozen=True)
class PLit:
    positive: bool
    pred: str
    args: tuple

    def __str__(self) -> str:
        body = f"{self.pred}({', '.join(map(str, self.args))})" if self.args else self.pred
        return body if self.positive else "~" + body

    def negated(self) -> "PLit":
        return PLit(not self.positive, self.pred, self.args)


@dataclass(frozen=True)
class CLit:
    op: str
    left: FTerm
    right: FTerm
    dim: str = "degree"

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"

    def negated(self) -> list:
        if self.op == "=":
            return [CLit("<", self.left, self.right, self.dim), CLit(">", self.left, self.right, self.dim)]
        return [CLit(NEGATE[self.op], self.left, self.right, self.dim)]


Literal = Union[PLit, CLit]

_EVAL = {">": lambda a, b: a > b, ">=": lambda a, b: a >= b, "<": lambda a, b: a < b,
         "<=": lambda a, b: a <= b, "=": lambda a, b: a == b}


def lit_vars(l: Literal) -> set:
    out: set = set()
    for a in (l.args if isinstance(l, PLit) else (l.left, l.right)):
        term_vars(a, out)
    return out


def clause_vars(lits: Iterable[Literal]) -> set:
    out: set = set()
    for l in lits:
        out |= lit_vars(l)
    return out


def decided(c: CLit) -> Optional[bool]:
    """Truth value of a comparison whose sides share their base (or are both numbers)."""
    b1, a = linear(c.left)
    b2, b = linear(c.right)
    if b1 == b2:
        return _EVAL[c.op](a, b)
    return None


def is_ground(l: Literal) -> bool:
    return not lit_vars(l)


def constraint(c: CLit) -> DegreeConstraint:
    """The degree-theory reading of a ground comparison literal."""

    def side(t):
        base, off = linear(t)
        return DegTerm(None if base is None else str(base), off)

    return DegreeConstraint(c.op, side(c.left), side(c.right), c.dim)


def show_clause(lits) -> str:
    return " | ".join(map(str, lits)) if lits else "$false"


# --- substitution ----------------------------------------------------------------------

def subst_term(t: FTerm, s: Mapping, once: bool = False) -> FTerm:
    """Apply s; bindings are followed transitively unless once (plain renaming)."""
    if isinstance(t, V):
        if t in s:
            return s[t] if once else subst_term(s[t], s)
        return t
    if isinstance(t, F):
        if not t.args:
            return t
        return F(t.name, tuple(subst_term(a, s, once) for a in t.args), t.sort)
    if isinstance(t, Add):
        return shift(subst_term(t.base, s, once), t.offset)
    return t


def subst_lit(l: Literal, s: Mapping, once: bool = False) -> Literal:
    if isinstance(l, PLit):
        return PLit(l.positive, l.pred, tuple(subst_term(a, s, once) for a in l.args))
    return CLit(l.op, subst_term(l.left, s, once), subst_term(l.right, s, once), l.dim)


def _occurs(v: V, t: FTerm, s: Mapping) -> bool:
    t = subst_term(t, s)
    return v in term_vars(t)


def unify(a: FTerm, b: FTerm, s: Optional[dict] = None) -> Optional[dict]:
    """Most general unifier extending s; degree offsets unify by solving for the variable."""
    s = dict(s or {})
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = subst_term(x, s), subst_term(y, s)
        if x == y:
            continue
        if x.sort != y.sort:
            return None
        if isinstance(y, V) and not isinstance(x, V):
            x, y = y, x
        if isinstance(x, V):
            if _occurs(x, y, s):
                return None
            s[x] = y
            continue
        if isinstance(x, Add) or isinstance(y, Add):
            bx, ox = linear(x)
            by, oy = linear(y)
            if isinstance(bx, V) and bx not in term_vars(y):
                s[bx] = shift(y, -ox)
                continue
            if isinstance(by, V) and by not in term_vars(x):
                s[by] = shift(x, -oy)
                continue
            if bx is None or by is None or ox != oy:
                return None
            stack.append((bx, by))
            continue
        if isinstance(x, F) and isinstance(y, F):
            if x.name != y.name or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
            continue
        return None
    return s


def rename(lits: Iterable[Literal], suffix: str) -> tuple:
    s = {}
    for v in clause_vars(lits):
        s[v] = V(v.name + suffix, v.sort)
    return tuple(subst_lit(l, s, True) for l in lits)


def normalize_vars(lits: Iterable[Literal]) -> tuple:
    """Rename variables to X0, X1, ... (E) and D0, D1, ... (degrees) by first occurrence."""
    order: list = []
    for l in lits:
        for a in (l.args if isinstance(l, PLit) else (l.left, l.right)):
            _collect(a, order)
    s, ne, nd = {}, 0, 0
    for v in order:
        if v in s:
            continue
        if v.sort == "E":
            s[v] = V(f"X{ne}", "E")
            ne += 1
        else:
            s[v] = V(f"D{nd}", "D")
            nd += 1
    return tuple(subst_lit(l, s, True) for l in lits)


def _collect(t: FTerm, out: list) -> None:
    if isinstance(t, V):
        out.append(t)
    elif isinstance(t, F):
        for a in t.args:
            _collect(a, out)
    elif isinstance(t, Add):
        _collect(t.base, out)


# --- from typed terms ------------------------------------------------------------------

def symbol_for_threshold(t: Threshold) -> str:
    return f"th_{t.adjective}" if t.cls is None else f"th_{t.adjective}_{t.cls}"


class Converter:
    """Typed formulas to a first-order formula tree.

    Tree nodes: ("lit", Literal) ("not", f) ("and", a, b) ("or", a, b)
    ("all", V, f) ("ex", V, f).
    """

    def __init__(self, dims_of: Mapping[str, str]):
        self.dims_of = dict(dims_of)
        self._n = itertools.count()

    def convert(self, f: Term) -> tuple:
        self._bdims = binder_dimensions(f, self.dims_of)
        return self._f(f, {})

    def _term(self, t: Term, env: dict) -> FTerm:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise ClausifyError(f"free variable {t.name}") from None
        if isinstance(t, Const):
            if t.type == E:
                return F(t.name, (), "E")
            if t.type == D:
                return F(t.name, (), "D")
            raise ClausifyError(f"constant {t.name} of type {t.type} used as a term")
        if isinstance(t, DegLit):
            return L(t.value, t.dimension)
        if isinstance(t, Threshold):
            return F(symbol_for_threshold(t), (), "D")
        if isinstance(t, DegAdd):
            l, r = self._term(t.left, env), self._term(t.right, env)
            if isinstance(r, L):
                return shift(l, r.value)
            if isinstance(l, L):
                return shift(r, l.value)
            raise ClausifyError(f"sum of two degree atoms: {show(t)}")
        if isinstance(t, App):
            head, args = head_and_args(t)
            if isinstance(head, Const) and head.name == CHOICE and len(args) == 1 \
                    and isinstance(args[0], Const):
                return F(f"the_{args[0].name}", (), "E")
            if isinstance(head, Const) and head.type == Fun(E, D):
                return F(head.name, tuple(self._term(a, env) for a in args), "D")
        raise ClausifyError(f"unsupported term {show(t)}")

    def _dim(self, t: Term, env_dims: dict) -> Optional[str]:
        if isinstance(t, DegLit):
            return t.dimension
        if isinstance(t, Threshold):
            return self.dims_of.get(t.adjective)
        if isinstance(t, Var):
            return env_dims.get(t.name)
        if isinstance(t, DegAdd):
            return self._dim(t.left, env_dims) or self._dim(t.right, env_dims)
        if isinstance(t, App) and isinstance(t.fun, Const):
            return self.dims_of.get(t.fun.name)
        return None

    def _f(self, f: Term, env: dict, env_dims: Optional[dict] = None) -> tuple:
        env_dims = env_dims or {}
        if isinstance(f, Not):
            return ("not", self._f(f.body, env, env_dims))
        if isinstance(f, And):
            return ("and", self._f(f.left, env, env_dims), self._f(f.right, env, env_dims))
        if isinstance(f, Or):
            return ("or", self._f(f.left, env, env_dims), self._f(f.right, env, env_dims))
        if isinstance(f, Implies):
            return ("or", ("not", self._f(f.left, env, env_dims)), self._f(f.right, env, env_dims))
        if isinstance(f, (Forall, Exists)):
            sort = {E: "E", D: "D"}.get(f.var.type)
            if sort is None:
                raise ClausifyError(f"higher-order quantifier over {f.var.type}")
            v = V(f"{f.var.name}_{next(self._n)}", sort)
            dims = dict(env_dims)
            if sort == "D":
                dims[f.var.name] = self._bdims.get(id(f), "degree")
            body = self._f(f.body, {**env, f.var.name: v}, dims)
            return ("all" if isinstance(f, Forall) else "ex", v, body)
        if isinstance(f, Cmp):
            dim = self._dim(f.left, env_dims) or self._dim(f.right, env_dims) or "degree"
            return ("lit", CLit(f.op, self._term(f.left, env), self._term(f.right, env), dim))
        head, args = head_and_args(f)
        if isinstance(head, Const):
            return ("lit", PLit(True, head.name, tuple(self._term(a, env) for a in args)))
        raise ClausifyError(f"cannot convert {show(f)}")


def _nnf(f: tuple, positive: bool = True) -> tuple:
    tag = f[0]
    if tag == "not":
        return _nnf(f[1], not positive)
    if tag in ("and", "or"):
        flip = {"and": "or", "or": "and"}
        t = tag if positive else flip[tag]
        return (t, _nnf(f[1], positive), _nnf(f[2], positive))
    if tag in ("all", "ex"):
        flip = {"all": "ex", "ex": "all"}
        return (tag if positive else flip[tag], f[1], _nnf(f[2], positive))
    lit = f[1]
    if positive:
        return f
    if isinstance(lit, PLit):
        return ("lit", lit.negated())
    neg = lit.negated()
    if len(neg) == 1:
        return ("lit", neg[0])
    return ("or", ("lit", neg[0]), ("lit", neg[1]))


def _free(f: tuple) -> set:
    tag = f[0]
    if tag == "lit":
        return lit_vars(f[1])
    if tag == "not":
        return _free(f[1])
    if tag in ("and", "or"):
        return _free(f[1]) | _free(f[2])
    return _free(f[2]) - {f[1]}


class Skolemizer:
    def __init__(self, prefix: str = "sk"):
        self.prefix = prefix
        self._n = itertools.count(1)
        self.symbols: dict = {}        # name -> (sort, arity, dimension)

    def run(self, f: tuple, universals: tuple = ()) -> tuple:
        tag = f[0]
        if tag == "lit":
            return f
        if tag in ("and", "or"):
            return (tag, self.run(f[1], universals), self.run(f[2], universals))
        if tag == "all":
            return ("all", f[1], self.run(f[2], universals + (f[1],)))
        # exists: replace by a Skolem term over the universals it depends on
        v, body = f[1], f[2]
        fv = _free(body)
        args = tuple(u for u in universals if u in fv)
        name = f"{self.prefix}{next(self._n)}"
        self.symbols[name] = (v.sort, len(args))
        sk = F(name, args, v.sort)
        return self.run(_replace(body, v, sk), universals)


def _replace(f: tuple, v: V, t: FTerm) -> tuple:
    tag = f[0]
    if tag == "lit":
        return ("lit", subst_lit(f[1], {v: t}))
    if tag in ("and", "or"):
        return (tag, _replace(f[1], v, t), _replace(f[2], v, t))
    if tag in ("all", "ex"):
        if f[1] == v:
            return f
        return (tag, f[1], _replace(f[2], v, t))
    return ("not", _replace(f[1], v, t))


def _cnf(f: tuple) -> list:
    tag = f[0]
    if tag == "lit":
        return [[f[1]]]
    if tag == "all":
        return _cnf(f[2])
    if tag == "and":
        return _cnf(f[1]) + _cnf(f[2])
    if tag == "or":
        return [a + b for a in _cnf(f[1]) for b in _cnf(f[2])]
    raise ClausifyError(f"unexpected node {tag} after Skolemization")


def clausify(f: Term, conv: Converter, sk: Skolemizer) -> list:
    """Clauses (tuples of literals, variables normalised) of a closed formula."""
    tree = _nnf(conv.convert(f))
    tree = sk.run(tree)
    out = []
    for lits in _cnf(tree):
        lits = tuple(dict.fromkeys(lits))
        out.append(normalize_vars(lits))
    return out


def dims_table(gradables: Iterable) -> dict:
    out = {}
    for g in gradables:
        out[g.lexeme] = g.dimension
        out[f"mu_{g.scale}"] = g.dimension
    return out
