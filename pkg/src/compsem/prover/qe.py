"""Degree-quantifier elimination by virtual substitution.

Formulas here are small tuples so that both the term layer and the clause
layer can share one implementation:

    ("true",) ("false",) ("atom", key) ("not", f) ("and", fs) ("or", fs)
    ("cmp", op, lhs, rhs)      lhs/rhs are linear terms (key | None, offset)
    ("ex", v, f) ("all", v, f)

A linear term with key None is a plain number.  Over a dense order the
test points for ``exists v`` are -inf, t and t+eps for every bound t;
over the integers they are -inf, t and t+1.
"""
from __future__ import annotations

from fractions import Fraction

TRUE = ("true",)
FALSE = ("false",)

_NEG = {">": "<=", ">=": "<", "<": ">=", "<=": ">"}
_FLIP = {">": "<", ">=": "<=", "<": ">", "<=": ">=", "=": "="}
_EVAL = {">": lambda a, b: a > b, ">=": lambda a, b: a >= b, "<": lambda a, b: a < b,
         "<=": lambda a, b: a <= b, "=": lambda a, b: a == b}


def cmp(op, lhs, rhs):
    """Canonical comparison: keyed side first, its offset moved across."""
    if lhs[0] is None or (rhs[0] is not None and repr(rhs[0]) < repr(lhs[0])):
        op, lhs, rhs = _FLIP[op], rhs, lhs
    if lhs[1]:
        lhs, rhs = (lhs[0], Fraction(0)), (rhs[0], rhs[1] - lhs[1])
    return fold(("cmp", op, lhs, rhs))


def fold(c):
    """Decide a comparison whose sides share a key (or are both numbers)."""
    _, op, (k1, a), (k2, b) = c
    if k1 == k2:
        return TRUE if _EVAL[op](a, b) else FALSE
    return c


def mk_and(fs) -> tuple:
    out = []
    for f in fs:
        if f == FALSE:
            return FALSE
        if f == TRUE:
            continue
        out.extend(f[1] if f[0] == "and" else [f])
    out = list(dict.fromkeys(out))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else ("and", tuple(out))


def mk_or(fs) -> tuple:
    out = []
    for f in fs:
        if f == TRUE:
            return TRUE
        if f == FALSE:
            continue
        out.extend(f[1] if f[0] == "or" else [f])
    out = list(dict.fromkeys(out))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else ("or", tuple(out))


def negate(f) -> tuple:
    """Negation pushed to the atoms (comparisons absorb it)."""
    tag = f[0]
    if tag == "true":
        return FALSE
    if tag == "false":
        return TRUE
    if tag == "not":
        return nnf(f[1])
    if tag == "and":
        return mk_or([negate(g) for g in f[1]])
    if tag == "or":
        return mk_and([negate(g) for g in f[1]])
    if tag == "cmp":
        _, op, l, r = f
        if op == "=":
            return mk_or([cmp("<", l, r), cmp(">", l, r)])
        return cmp(_NEG[op], l, r)
    if tag == "ex":
        return ("all", f[1], negate(f[2]))
    if tag == "all":
        return ("ex", f[1], negate(f[2]))
    return ("not", f)


def nnf(f) -> tuple:
    tag = f[0]
    if tag == "not":
        return negate(f[1])
    if tag == "and":
        return mk_and([nnf(g) for g in f[1]])
    if tag == "or":
        return mk_or([nnf(g) for g in f[1]])
    if tag in ("ex", "all"):
        return (tag, f[1], nnf(f[2]))
    if tag == "cmp":
        return fold(f)
    return f


def _shift(t, c):
    return (t[0], t[1] + c)


def _bounds(v, f, out: list) -> None:
    """Collect every t with an atom  v op t  (after moving offsets right)."""
    tag = f[0]
    if tag in ("and", "or"):
        for g in f[1]:
            _bounds(v, g, out)
    elif tag == "not":
        _bounds(v, f[1], out)
    elif tag == "cmp":
        _, op, (k1, a), (k2, b) = f
        if k1 == v and k2 != v:
            out.append((k2, b - a))
        elif k2 == v and k1 != v:
            out.append((k1, a - b))
    elif tag in ("ex", "all"):
        raise ValueError("eliminate inner quantifiers first")


def _subst(v, f, point):
    """point is ("-inf",) | ("at", t) | ("eps", t)."""
    tag = f[0]
    if tag == "and":
        return mk_and([_subst(v, g, point) for g in f[1]])
    if tag == "or":
        return mk_or([_subst(v, g, point) for g in f[1]])
    if tag == "not":
        return negate(_subst(v, f[1], point))
    if tag != "cmp":
        return f
    _, op, l, r = f
    if l[0] != v and r[0] != v:
        return f
    if l[0] == v and r[0] == v:
        return fold(f)
    if r[0] == v:
        op, l, r = _FLIP[op], r, l
    # now  v + a  op  r   i.e.  v  op  r - a
    s = _shift(r, -l[1])
    kind = point[0]
    if kind == "-inf":
        return TRUE if op in ("<", "<=") else FALSE
    t = point[1]
    if kind == "at":
        return cmp(op, t, s)
    # t + eps
    if op in (">", ">="):
        return cmp(">=", t, s)
    if op in ("<", "<="):
        return cmp("<", t, s)
    return FALSE


def eliminate_exists(v, f, integral: bool = False) -> tuple:
    """Quantifier-free equivalent of  exists v. f  (f quantifier-free)."""
    f = nnf(f)
    ts: list = []
    _bounds(v, f, ts)
    ts = list(dict.fromkeys(ts))
    parts = [_subst(v, f, ("-inf",))]
    for t in ts:
        parts.append(_subst(v, f, ("at", t)))
        if integral:
            parts.append(_subst(v, f, ("at", _shift(t, Fraction(1)))))
        else:
            parts.append(_subst(v, f, ("eps", t)))
        if parts[-1] == TRUE or parts[-2] == TRUE:
            return TRUE
    return mk_or(parts)


def eliminate(f, integral_vars=frozenset()) -> tuple:
    """Remove every ex/all node, innermost first."""
    tag = f[0]
    if tag in ("and", "or"):
        return (mk_and if tag == "and" else mk_or)([eliminate(g, integral_vars) for g in f[1]])
    if tag == "not":
        return negate(eliminate(f[1], integral_vars))
    if tag == "ex":
        return eliminate_exists(f[1], eliminate(f[2], integral_vars), f[1] in integral_vars)
    if tag == "all":
        body = negate(eliminate(f[2], integral_vars))
        return negate(eliminate_exists(f[1], body, f[1] in integral_vars))
    if tag == "cmp":
        return fold(f)
    return f


def cnf(f) -> list:
    """Clauses (lists of literal nodes) of a quantifier-free NNF formula."""
    f = nnf(f)
    if f == TRUE:
        return []
    if f == FALSE:
        return [[]]
    if f[0] == "and":
        out = []
        for g in f[1]:
            out.extend(cnf(g))
        return out
    if f[0] == "or":
        acc = [[]]
        for g in f[1]:
            acc = [a + b for a in acc for b in cnf(g)]
        return acc
    return [[f]]


def evaluate(f, atoms: dict, values: dict) -> bool:
    """Truth value of a quantifier-free formula under atom and degree values."""
    tag = f[0]
    if tag == "true":
        return True
    if tag == "false":
        return False
    if tag == "atom":
        return atoms.get(f[1], False)
    if tag == "not":
        return not evaluate(f[1], atoms, values)
    if tag == "and":
        return all(evaluate(g, atoms, values) for g in f[1])
    if tag == "or":
        return any(evaluate(g, atoms, values) for g in f[1])
    if tag == "cmp":
        _, op, (k1, a), (k2, b) = f
        x = a + (values[k1] if k1 is not None else 0)
        y = b + (values[k2] if k2 is not None else 0)
        return _EVAL[op](x, y)
    raise ValueError(f"cannot evaluate {tag}")
