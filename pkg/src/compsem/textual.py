"""Canonical text form of terms: printing and parsing.

    exists d:D. (tall(m, d) & ~tall(h, d))
    forall d:D. (tall(h, d) -> tall(m, (d + lit(2, length))))
    \\A:D -> E -> T. \\x:E. A(th(tall))(x)

Binary connectives are always printed in parentheses.  The parser also
accepts precedence-based input (~ binds tightest, then &, |, and
right-associative ->) and the unicode symbols used in the literature.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .terms import (D, E, T, Abs, And, App, Atomic, Cmp, Const, DegAdd, DegLit, Exists,
                    Forall, Fun, Implies, Not, Or, SemType, Term, Threshold, Var,
                    head_and_args, type_of)


class FormulaSyntaxError(ValueError):
    pass


# --- printing ---------------------------------------------------------------

def show_type(t: SemType) -> str:
    return str(t)


def _num(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def show(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Threshold):
        return f"th({t.adjective})" if t.cls is None else f"th({t.adjective}, {t.cls})"
    if isinstance(t, DegLit):
        return f"lit({_num(t.value)}, {t.dimension})"
    if isinstance(t, DegAdd):
        return f"({show(t.left)} + {show(t.right)})"
    if isinstance(t, Cmp):
        return f"{show(t.left)} {t.op} {show(t.right)}"
    if isinstance(t, App):
        head, args = head_and_args(t)
        if isinstance(head, (Var, Const)):
            return f"{head.name}({', '.join(show(a) for a in args)})"
        return f"({show(head)})" + "".join(f"({show(a)})" for a in args)
    if isinstance(t, Not):
        inner = show(t.body)
        if isinstance(t.body, (Forall, Exists, Abs, Cmp)):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(t, And):
        return f"({show(t.left)} & {show(t.right)})"
    if isinstance(t, Or):
        return f"({show(t.left)} | {show(t.right)})"
    if isinstance(t, Implies):
        return f"({show(t.left)} -> {show(t.right)})"
    if isinstance(t, Forall):
        return f"forall {t.var.name}:{t.var.type}. {show(t.body)}"
    if isinstance(t, Exists):
        return f"exists {t.var.name}:{t.var.type}. {show(t.body)}"
    if isinstance(t, Abs):
        return f"\\{t.var.name}:{t.var.type}. {show(t.body)}"
    raise TypeError(f"not a term: {t!r}")


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|→|>=|<=|≥|≤|-|[()\[\],.:~¬&∧|∨<>=+\\λ∀∃])
""", re.VERBOSE)

_UNICODE = {"→": "->", "≥": ">=", "≤": "<=", "¬": "~", "∧": "&", "∨": "|",
            "λ": "\\", "∀": "forall", "∃": "exists"}

# constants whose types the parser knows without a table
BUILTIN_CONSTS = {"the": Fun(Fun(E, T), E)}


def _tokenize(src: str) -> list:
    out, pos = [], 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {src[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        text = _UNICODE.get(m.group(), m.group())
        if kind == "op" and text in ("forall", "exists"):
            kind = "name"
        out.append((kind, text, m.start()))
    out.append(("eof", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, consts: Optional[dict]):
        self.toks = _tokenize(src)
        self.i = 0
        self.consts = {**BUILTIN_CONSTS, **(consts or {})}
        self.scope: list = []

    # token helpers
    def peek(self, k: int = 0):
        return self.toks[self.i + k]

    def take(self, text: Optional[str] = None):
        tok = self.toks[self.i]
        if text is not None and tok[1] != text:
            raise FormulaSyntaxError(f"expected {text!r} at offset {tok[2]}, found {tok[1]!r}")
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek()[1] == text

    # grammar
    def formula(self) -> Term:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Term:
        out = self.conj()
        while self.at("|"):
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Term:
        out = self.unary()
        while self.at("&"):
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self) -> Term:
        tok = self.peek()
        if tok[1] == "~":
            self.take()
            return Not(self.unary())
        if tok[1] in ("forall", "exists", "\\"):
            return self.binder()
        return self.comparison()

    def binder(self) -> Term:
        kw = self.take()[1]
        var = self.var_decl()
        self.take(".")
        self.scope.append(var)
        try:
            body = self.formula()
        finally:
            self.scope.pop()
        return {"forall": Forall, "exists": Exists, "\\": Abs}[kw](var, body)

    def var_decl(self) -> Var:
        kind, name, pos = self.take()
        if kind != "name":
            raise FormulaSyntaxError(f"expected a variable name at offset {pos}")
        self.take(":")
        return Var(name, self.type_())

    def type_(self) -> SemType:
        if self.at("("):
            self.take()
            left = self.type_()
            self.take(")")
        else:
            kind, name, pos = self.take()
            if name not in ("E", "D", "T"):
                raise FormulaSyntaxError(f"unknown type {name!r} at offset {pos}")
            left = Atomic(name)
        if self.at("->"):
            self.take()
            return Fun(left, self.type_())
        return left

    def comparison(self) -> Term:
        left = self.sum_()
        if self.peek()[1] in (">", "<", ">=", "<=", "="):
            op = self.take()[1]
            return Cmp(op, left, self.sum_())
        return left

    def sum_(self, expected: Optional[SemType] = None) -> Term:
        out = self.application(expected)
        while self.at("+"):
            self.take()
            out = DegAdd(out, self.application(D))
        return out

    def application(self, expected: Optional[SemType] = None) -> Term:
        kind, text, pos = self.peek()
        if kind == "name" and self.peek(1)[1] == "(" and not self._bound(text) \
                and text not in ("lit", "th"):
            return self.const_application()
        out = self.primary(expected)
        while self.at("("):
            ft = type_of(out, allow_free=True)
            for arg_t in self.arglist(ft):
                out = App(out, arg_t)
                ft = ft.res if isinstance(ft, Fun) else None
        return out

    def arglist(self, ft) -> list:
        self.take("(")
        args = []
        while True:
            exp = ft.arg if isinstance(ft, Fun) else None
            args.append(self.arg(exp))
            ft = ft.res if isinstance(ft, Fun) else None
            if self.at(","):
                self.take()
                continue
            self.take(")")
            return args

    def arg(self, expected: Optional[SemType]) -> Term:
        tok = self.peek()
        if tok[1] in ("forall", "exists", "\\", "~"):
            return self.formula()
        left = self.sum_(expected)
        if self.peek()[1] in (">", "<", ">=", "<=", "="):
            op = self.take()[1]
            left = Cmp(op, left, self.sum_())
        while self.peek()[1] in ("&", "|", "->"):
            # a full formula in argument position
            op = self.take()[1]
            right = self.formula()
            left = {"&": And, "|": Or, "->": Implies}[op](left, right)
        return left

    def const_application(self) -> Term:
        _, name, _ = self.take()
        known = self.consts.get(name)
        if known is not None:
            head: Term = Const(name, known)
            out = head
            ft = known
            while self.at("("):
                for a in self.arglist(ft):
                    out = App(out, a)
                    ft = ft.res if isinstance(ft, Fun) else None
            type_of(out, allow_free=True)
            return out
        args = self.arglist(None)
        types = [type_of(a, allow_free=True) for a in args]
        ty: SemType = T
        for at_ in reversed(types):
            ty = Fun(at_, ty)
        out = Const(name, ty)
        for a in args:
            out = App(out, a)
        return out

    def _bound(self, name: str) -> Optional[Var]:
        for v in reversed(self.scope):
            if v.name == name:
                return v
        return None

    def primary(self, expected: Optional[SemType] = None) -> Term:
        kind, text, pos = self.take()
        if text == "(":
            out = self.formula()
            self.take(")")
            return out
        if kind != "name":
            raise FormulaSyntaxError(f"unexpected {text!r} at offset {pos}")
        if text == "lit" and self.at("("):
            self.take("(")
            sign = 1
            if self.at("-"):
                self.take()
                sign = -1
            nk, num, npos = self.take()
            if nk != "num":
                raise FormulaSyntaxError(f"expected a number at offset {npos}")
            self.take(",")
            dim = self.take()[1]
            self.take(")")
            return DegLit(sign * Fraction(num), dim)
        if text == "th" and self.at("("):
            self.take("(")
            adj = self.take()[1]
            cls = None
            if self.at(","):
                self.take()
                cls = self.take()[1]
            self.take(")")
            return Threshold(adj, cls)
        var = self._bound(text)
        if var is not None:
            return var
        if self.at(":"):
            self.take()
            return Const(text, self.type_())
        if text in self.consts:
            return Const(text, self.consts[text])
        return Const(text, expected if expected is not None else E)


def parse_formula(src: str, consts: Optional[dict] = None) -> Term:
    """Parse canonical text.  consts maps constant names to their types."""
    p = _Parser(src, consts)
    out = p.formula()
    kind, text, pos = p.peek()
    if kind != "eof":
        raise FormulaSyntaxError(f"trailing input at offset {pos}: {text!r}")
    return out


def parse_type(src: str) -> SemType:
    p = _Parser(src, None)
    out = p.type_()
    if p.peek()[0] != "eof":
        raise FormulaSyntaxError("trailing input after type")
    return out
