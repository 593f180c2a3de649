"""Bottom-up semantic composition over validated derivation trees."""
from __future__ import annotations

from dataclasses import dataclass

from .ccg import (DerivationTree, InvalidDerivation, Leaf, Unary, cat_to_semtype,
                  validate_derivation)
from .lexicon import PRIVATIVE_MODIFIERS, Lexicon, LexiconError
from .terms import (Abs, App, Const, Fun, LambdaTypeError, Term, Threshold, Var, alpha_equal,
                    beta_normalize, free_vars, fresh_name, map_bottom_up, type_of, E, T, D)
from .textual import show


class CompositionError(ValueError):
    def __init__(self, message: str, path: tuple = ()):
        self.path = path
        where = "/".join(map(str, path)) or "root"
        super().__init__(f"at {where}: {message}")


@dataclass(frozen=True)
class NodeSR:
    path: tuple
    cat: object
    sr: Term


def _compose(t: DerivationTree, lex: Lexicon, path: tuple, trail: list) -> Term:
    if isinstance(t, Leaf):
        try:
            sr = lex.lookup(t.token, t.entry_key).template
        except LexiconError as exc:
            raise CompositionError(f"unresolved leaf: {exc}", path) from None
    elif isinstance(t, Unary):
        a = _compose(t.child, lex, path + (0,), trail)
        ptype = cat_to_semtype(t.cat.arg)
        p = Var(fresh_name("P", free_vars(a)), ptype)
        sr = Abs(p, App(p, a))
    else:
        left = _compose(t.left, lex, path + (0,), trail)
        right = _compose(t.right, lex, path + (1,), trail)
        if t.rule == "fa":
            sr = App(left, right)
        elif t.rule == "ba":
            sr = App(right, left)
        else:
            f, g = (left, right) if t.rule == "fc" else (right, left)
            gt = type_of(g)
            z = Var(fresh_name("z", free_vars(f) | free_vars(g)), gt.arg)
            sr = Abs(z, App(f, App(g, z)))
    try:
        sr = beta_normalize(sr)
        got = type_of(sr)
    except LambdaTypeError as exc:
        raise CompositionError(f"type mismatch: {exc}", path) from None
    want = cat_to_semtype(t.cat)
    if got != want:
        raise CompositionError(f"semantic type {got} does not match category {t.cat} ({want})", path)
    trail.append(NodeSR(path, t.cat, sr))
    return sr


_ADJ_SHAPE = Fun(D, Fun(E, T))


def _adjective_of(a: Term):
    """Name F when a is (alpha-equal to) \\d. \\x. F(x, d)."""
    if not (isinstance(a, Abs) and isinstance(a.body, Abs)):
        return None
    d, x, body = a.var, a.body.var, a.body.body
    if isinstance(body, App) and isinstance(body.fun, App) and isinstance(body.fun.fun, Const):
        if body.fun.arg == x and body.arg == d:
            return body.fun.fun.name
    return None


def resolve_constants(t: Term) -> Term:
    """Replace threshold and privative-modifier applications by first-order symbols."""

    def step(s: Term) -> Term:
        if isinstance(s, App) and isinstance(s.fun, Const) and s.fun.name == "theta":
            adj = _adjective_of(s.arg)
            if adj:
                return Threshold(adj)
        if isinstance(s, App) and isinstance(s.fun, App) and isinstance(s.fun.fun, Const) \
                and s.fun.fun.name == "theta_cls":
            adj = _adjective_of(s.fun.arg)
            if adj and isinstance(s.arg, Const):
                return Threshold(adj, s.arg.name)
        if isinstance(s, App) and isinstance(s.fun, Const) and s.fun.name in PRIVATIVE_MODIFIERS \
                and isinstance(s.arg, Const):
            return Const(f"{s.fun.name}_{s.arg.name}", Fun(E, T))
        return s

    return map_bottom_up(t, step)


def interpret_nodes(t: DerivationTree, lex: Lexicon) -> list:
    """Composed SR at every node, in post-order (root last)."""
    bad = validate_derivation(t)
    if bad:
        raise InvalidDerivation(bad)
    trail: list = []
    _compose(t, lex, (), trail)
    return trail


def interpret(t: DerivationTree, lex: Lexicon) -> Term:
    """Closed beta-normal formula of type T for a validated derivation."""
    root = interpret_nodes(t, lex)[-1].sr
    out = resolve_constants(root)
    if type_of(out) != T:
        raise CompositionError(f"root has type {type_of(out)}, expected T")
    leftovers = [s for s in ("theta", "theta_cls", *PRIVATIVE_MODIFIERS) if _mentions(out, s)]
    if leftovers:
        raise CompositionError(f"could not resolve {', '.join(leftovers)} in {show(out)}")
    return out


def _mentions(t: Term, name: str) -> bool:
    from .terms import subterms

    return any(isinstance(s, Const) and s.name == name for s in subterms(t))


def same_sr(a: Term, b: Term) -> bool:
    return alpha_equal(a, b)
