"""Simply typed lambda terms with logical constants and degree arithmetic.

Terms are immutable; every operation here is pure.  Variables carry their
type (Church style), so type checking needs no separate annotations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union


class LambdaTypeError(TypeError):
    def __init__(self, message: str, term: Optional["Term"] = None):
        self.term = term
        if term is not None:
            from .textual import show

            message = f"{message}: {show(term)}"
        super().__init__(message)


# --- types -----------------------------------------------------------------

@dataclass(frozen=True)
class Atomic:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fun:
    arg: "SemType"
    res: "SemType"

    def __str__(self) -> str:
        left = f"({self.arg})" if isinstance(self.arg, Fun) else str(self.arg)
        return f"{left} -> {self.res}"


SemType = Union[Atomic, Fun]

E = Atomic("E")
D = Atomic("D")
T = Atomic("T")


def fun(*types: SemType) -> SemType:
    """Right-nested function type: fun(D, E, T) is D -> E -> T."""
    out = types[-1]
    for t in reversed(types[:-1]):
        out = Fun(t, out)
    return out


# --- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    type: SemType


@dataclass(frozen=True)
class Const:
    name: str
    type: SemType


@dataclass(frozen=True)
class Abs:
    var: Var
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Not:
    body: "Term"


@dataclass(frozen=True)
class And:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Or:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Implies:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Term"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Term"


@dataclass(frozen=True)
class DegLit:
    value: Fraction
    dimension: str

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class DegAdd:
    left: "Term"
    right: "Term"


CMP_OPS = (">", "<", ">=", "<=", "=")


@dataclass(frozen=True)
class Cmp:
    op: str
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class Threshold:
    """Contextual threshold of a gradable adjective; cls None is the default class U."""

    adjective: str
    cls: Optional[str] = None


Term = Union[Var, Const, Abs, App, Not, And, Or, Implies, Forall, Exists,
             DegLit, DegAdd, Cmp, Threshold]

BINARY = (And, Or, Implies)
BINDERS = (Abs, Forall, Exists)

Env = dict


def _str(self) -> str:
    from .textual import show

    return show(self)


for _cls in (Var, Const, Abs, App, Not, And, Or, Implies, Forall, Exists,
             DegLit, DegAdd, Cmp, Threshold):
    _cls.__str__ = _str  # type: ignore[assignment]


# --- structural helpers -----------------------------------------------------

def children(t: Term) -> tuple:
    if isinstance(t, (Abs, Forall, Exists)):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Not):
        return (t.body,)
    if isinstance(t, (And, Or, Implies, DegAdd, Cmp)):
        return (t.left, t.right)
    return ()


def rebuild(t: Term, kids: tuple) -> Term:
    if isinstance(t, BINDERS):
        return type(t)(t.var, kids[0])
    if isinstance(t, App):
        return App(kids[0], kids[1])
    if isinstance(t, Not):
        return Not(kids[0])
    if isinstance(t, (And, Or, Implies, DegAdd)):
        return type(t)(kids[0], kids[1])
    if isinstance(t, Cmp):
        return Cmp(t.op, kids[0], kids[1])
    return t


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for k in children(t):
        yield from subterms(k)


def free_vars(t: Term) -> set:
    """Names of free variables."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, BINDERS):
        return free_vars(t.body) - {t.var.name}
    out: set = set()
    for k in children(t):
        out |= free_vars(k)
    return out


def all_names(t: Term) -> set:
    out = set()
    for s in subterms(t):
        if isinstance(s, Var):
            out.add(s.name)
        elif isinstance(s, BINDERS):
            out.add(s.var.name)
    return out


def fresh_name(base: str, avoid: set) -> str:
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def map_bottom_up(t: Term, f: Callable[[Term], Term]) -> Term:
    kids = children(t)
    if kids:
        t = rebuild(t, tuple(map_bottom_up(k, f) for k in kids))
    return f(t)


# --- substitution and reduction --------------------------------------------

def substitute(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding t[value/name]."""
    return _subst(t, name, value, free_vars(value))


def _subst(t: Term, name: str, value: Term, fv: set) -> Term:
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, BINDERS):
        v = t.var
        if v.name == name:
            return t
        body = t.body
        if name not in free_vars(body):
            return t
        if v.name in fv:
            new = fresh_name(v.name, fv | all_names(body) | {name})
            nv = Var(new, v.type)
            body = _subst(body, v.name, nv, {new})
            v = nv
        return type(t)(v, _subst(body, name, value, fv))
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_subst(k, name, value, fv) for k in kids))


def _norm(t: Term) -> Term:
    if isinstance(t, App):
        f = _norm(t.fun)
        if isinstance(f, Abs):
            return _norm(substitute(f.body, f.var.name, t.arg))
        return App(f, _norm(t.arg))
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, tuple(_norm(k) for k in kids))


def beta_normalize(t: Term) -> Term:
    """Beta-normal form.  Free variables are allowed; ill-typed input raises."""
    type_of(t, allow_free=True)
    return _norm(t)


def is_beta_normal(t: Term) -> bool:
    return not any(isinstance(s, App) and isinstance(s.fun, Abs) for s in subterms(t))


# --- typing ------------------------------------------------------------------

def type_of(t: Term, env: Optional[Env] = None, allow_free: bool = False) -> SemType:
    """Principal type of t; env maps bound variable names to types."""
    env = {} if env is None else env
    if isinstance(t, Var):
        if t.name in env:
            if env[t.name] != t.type:
                raise LambdaTypeError(f"variable {t.name} used at {t.type}, bound at {env[t.name]}", t)
            return t.type
        if allow_free:
            return t.type
        raise LambdaTypeError(f"unbound variable {t.name}", t)
    if isinstance(t, Const):
        return t.type
    if isinstance(t, Abs):
        inner = {**env, t.var.name: t.var.type}
        return Fun(t.var.type, type_of(t.body, inner, allow_free))
    if isinstance(t, App):
        ft = type_of(t.fun, env, allow_free)
        at = type_of(t.arg, env, allow_free)
        if not isinstance(ft, Fun):
            raise LambdaTypeError(f"applying a non-function of type {ft}", t)
        if ft.arg != at:
            raise LambdaTypeError(f"argument type mismatch: expected {ft.arg}, got {at}", t)
        return ft.res
    if isinstance(t, (Forall, Exists)):
        inner = {**env, t.var.name: t.var.type}
        _expect(t.body, T, inner, allow_free)
        return T
    if isinstance(t, Not):
        _expect(t.body, T, env, allow_free)
        return T
    if isinstance(t, BINARY):
        _expect(t.left, T, env, allow_free)
        _expect(t.right, T, env, allow_free)
        return T
    if isinstance(t, (DegLit, Threshold)):
        return D
    if isinstance(t, DegAdd):
        _expect(t.left, D, env, allow_free)
        _expect(t.right, D, env, allow_free)
        return D
    if isinstance(t, Cmp):
        _expect(t.left, D, env, allow_free)
        _expect(t.right, D, env, allow_free)
        return T
    raise LambdaTypeError(f"not a term: {t!r}")


def _expect(t: Term, ty: SemType, env: Env, allow_free: bool) -> None:
    got = type_of(t, env, allow_free)
    if got != ty:
        raise LambdaTypeError(f"expected type {ty}, got {got}", t)


# --- alpha equivalence ------------------------------------------------------

def alpha_equal(a: Term, b: Term) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Term, b: Term, ma: dict, mb: dict, depth: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        if a.type != b.type:
            return False
        la, lb = ma.get(a.name), mb.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if isinstance(a, BINDERS):
        if a.var.type != b.var.type:
            return False
        return _alpha(a.body, b.body, {**ma, a.var.name: depth},
                      {**mb, b.var.name: depth}, depth + 1)
    if isinstance(a, Cmp) and a.op != b.op:
        return False
    ka, kb = children(a), children(b)
    if not ka:
        return a == b
    return all(_alpha(x, y, ma, mb, depth) for x, y in zip(ka, kb))


# --- convenience ------------------------------------------------------------

def apply(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def head_and_args(t: Term) -> tuple:
    """Split an application spine f(a1)...(an) into (f, [a1..an])."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


def conj(*ts: Term) -> Term:
    out = ts[0]
    for t in ts[1:]:
        out = And(out, t)
    return out
