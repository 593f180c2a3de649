"""CCG categories and gold derivation trees.

Derivation files are s-expressions::

    (b fa S
       (u tr (S/(S\\NP)) (lex "Mary" mary NP))
       (b fa (S\\NP) (lex "is" is ((S\\NP)/(S\\NP))) ...))

Rules: fa (>), ba (<), fc (>B), bc (<B) and forward type raising tr (>T).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .terms import D, E, T, Fun, SemType


class CategoryError(ValueError):
    pass


class DerivationSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{message} (line {line}, column {col})" if line else message)


class InvalidDerivation(ValueError):
    def __init__(self, violations: list):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


# --- categories ---------------------------------------------------------------

ATOMS = ("S", "NP", "N", "D")


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FSlash:
    res: "Category"
    arg: "Category"

    def __str__(self) -> str:
        return f"({self.res}/{self.arg})"


@dataclass(frozen=True)
class BSlash:
    res: "Category"
    arg: "Category"

    def __str__(self) -> str:
        return f"({self.res}\\{self.arg})"


Category = Union[Atom, FSlash, BSlash]

S, NP, N, DEG = Atom("S"), Atom("NP"), Atom("N"), Atom("D")
VP = BSlash(S, NP)
AP = BSlash(VP, DEG)
NP_RAISED = FSlash(S, VP)
ALIASES = {"AP": AP, "NP^": NP_RAISED}


def show_category(c: Category, compact: bool = False) -> str:
    """Fully parenthesised by default; compact drops left-associative parentheses."""
    if not compact:
        return str(c)
    if isinstance(c, Atom):
        return c.name
    slash = "/" if isinstance(c, FSlash) else "\\"
    res = show_category(c.res, True)
    arg = show_category(c.arg, True)
    if not isinstance(c.arg, Atom):
        arg = f"({arg})"
    return f"{res}{slash}{arg}"


def parse_category(src: str) -> Category:
    """Parse a category; slashes associate to the left, aliases AP and NP^ expand."""
    pos = 0
    src = src.strip()

    def primary() -> Category:
        nonlocal pos
        if pos < len(src) and src[pos] == "(":
            pos += 1
            c = chain()
            if pos >= len(src) or src[pos] != ")":
                raise CategoryError(f"unbalanced parentheses in category {src!r}")
            pos += 1
            return c
        for name in ("NP^", "AP", "NP", "S", "N", "D"):
            if src.startswith(name, pos):
                pos += len(name)
                return ALIASES.get(name) or Atom(name)
        raise CategoryError(f"malformed category {src!r} at offset {pos}")

    def chain() -> Category:
        nonlocal pos
        c = primary()
        while pos < len(src) and src[pos] in "/\\":
            slash = src[pos]
            pos += 1
            arg = primary()
            c = FSlash(c, arg) if slash == "/" else BSlash(c, arg)
        return c

    out = chain()
    if pos != len(src):
        raise CategoryError(f"malformed category {src!r} at offset {pos}")
    return out


def cat_to_semtype(c: Category) -> SemType:
    if isinstance(c, Atom):
        return {"S": T, "NP": E, "N": Fun(E, T), "D": D}[c.name]
    return Fun(cat_to_semtype(c.arg), cat_to_semtype(c.res))


# --- derivation trees ----------------------------------------------------------

BINARY_RULES = ("fa", "ba", "fc", "bc")
UNARY_RULES = ("tr",)


@dataclass(frozen=True)
class Leaf:
    token: str
    entry_key: str
    cat: Category


@dataclass(frozen=True)
class Unary:
    rule: str
    cat: Category
    child: "DerivationTree"


@dataclass(frozen=True)
class Binary:
    rule: str
    cat: Category
    left: "DerivationTree"
    right: "DerivationTree"


DerivationTree = Union[Leaf, Unary, Binary]


def leaves(t: DerivationTree) -> list:
    if isinstance(t, Leaf):
        return [t]
    if isinstance(t, Unary):
        return leaves(t.child)
    return leaves(t.left) + leaves(t.right)


def combine(rule: str, left: Category, right: Optional[Category] = None) -> Category:
    """Result category of a combinator; raises CategoryError when it does not apply."""
    if rule == "fa":
        if not isinstance(left, FSlash):
            raise CategoryError(f"fa requires a forward functor on the left, got {left}")
        if left.arg != right:
            raise CategoryError(f"fa requires argument {left.arg}, got {right}")
        return left.res
    if rule == "ba":
        if not isinstance(right, BSlash):
            raise CategoryError(f"ba requires a backward functor on the right, got {right}")
        if right.arg != left:
            raise CategoryError(f"ba requires argument {right.arg}, got {left}")
        return right.res
    if rule == "fc":
        if not (isinstance(left, FSlash) and isinstance(right, FSlash)):
            raise CategoryError(f"fc requires X/Y and Y/Z, got {left} and {right}")
        if left.arg != right.res:
            raise CategoryError(f"fc requires {left.arg} as the result of the right functor, got {right.res}")
        return FSlash(left.res, right.arg)
    if rule == "bc":
        if not (isinstance(left, BSlash) and isinstance(right, BSlash)):
            raise CategoryError(f"bc requires Y\\Z and X\\Y, got {left} and {right}")
        if right.arg != left.res:
            raise CategoryError(f"bc requires {right.arg} as the result of the left functor, got {left.res}")
        return BSlash(right.res, left.arg)
    raise CategoryError(f"unknown rule {rule!r}")


def is_type_raise(child: Category, result: Category) -> bool:
    return (isinstance(result, FSlash) and isinstance(result.arg, BSlash)
            and result.arg.res == result.res and result.arg.arg == child)


@dataclass(frozen=True)
class Violation:
    path: tuple
    rule: str
    message: str

    def __str__(self) -> str:
        where = "/".join(map(str, self.path)) or "root"
        return f"{where} [{self.rule}]: {self.message}"


def validate_derivation(t: DerivationTree, path: tuple = ()) -> list:
    if isinstance(t, Leaf):
        return []
    if isinstance(t, Unary):
        out = validate_derivation(t.child, path + (0,))
        if t.rule != "tr":
            out.append(Violation(path, t.rule, "unknown unary rule"))
        elif not is_type_raise(t.child.cat, t.cat):
            out.append(Violation(path, "tr", f"{t.cat} is not a forward raise of {t.child.cat}"))
        return out
    out = validate_derivation(t.left, path + (0,)) + validate_derivation(t.right, path + (1,))
    try:
        got = combine(t.rule, t.left.cat, t.right.cat)
    except CategoryError as exc:
        out.append(Violation(path, t.rule, str(exc)))
    else:
        if got != t.cat:
            out.append(Violation(path, t.rule, f"node category {t.cat} but rule yields {got}"))
    return out


# --- s-expression reader/writer --------------------------------------------------

class _Reader:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def where(self, pos: Optional[int] = None) -> tuple:
        pos = self.pos if pos is None else pos
        line = self.src.count("\n", 0, pos) + 1
        col = pos - (self.src.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg: str, pos: Optional[int] = None):
        return DerivationSyntaxError(msg, *self.where(pos))

    def skip(self) -> None:
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == ";":
                while self.pos < len(self.src) and self.src[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def expect(self, ch: str) -> None:
        self.skip()
        if self.pos >= len(self.src) or self.src[self.pos] != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def symbol(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.src) and not self.src[self.pos].isspace() \
                and self.src[self.pos] not in "()\"":
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a symbol")
        return self.src[start:self.pos]

    def string(self) -> str:
        self.skip()
        if self.pos >= len(self.src) or self.src[self.pos] != '"':
            raise self.error("expected a quoted token")
        end = self.src.find('"', self.pos + 1)
        if end < 0:
            raise self.error("unterminated string")
        out = self.src[self.pos + 1:end]
        self.pos = end + 1
        return out

    def category(self) -> Category:
        self.skip()
        start, depth = self.pos, 0
        while self.pos < len(self.src):
            ch = self.src[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch.isspace() and depth == 0:
                break
            self.pos += 1
        text = self.src[start:self.pos]
        try:
            return parse_category(text)
        except CategoryError as exc:
            raise self.error(str(exc), start) from None

    def tree(self) -> DerivationTree:
        self.expect("(")
        start = self.pos
        kind = self.symbol()
        if kind == "lex":
            token = self.string()
            key = self.symbol()
            cat = self.category()
            out: DerivationTree = Leaf(token, key, cat)
        elif kind == "u":
            rule = self.symbol()
            if rule not in UNARY_RULES:
                raise self.error(f"unknown unary rule {rule!r}", start)
            cat = self.category()
            out = Unary(rule, cat, self.tree())
        elif kind == "b":
            rule = self.symbol()
            if rule not in BINARY_RULES:
                raise self.error(f"unknown rule name {rule!r}", start)
            cat = self.category()
            left = self.tree()
            out = Binary(rule, cat, left, self.tree())
        else:
            raise self.error(f"unknown node kind {kind!r}", start)
        self.expect(")")
        return out


def parse_derivation(src: str, validate: bool = True) -> DerivationTree:
    """Read a derivation; with validate=True, combinator violations raise InvalidDerivation."""
    r = _Reader(src)
    out = r.tree()
    r.skip()
    if r.pos != len(src):
        raise r.error("trailing input after derivation")
    if validate:
        bad = validate_derivation(out)
        if bad:
            raise InvalidDerivation(bad)
    return out


def serialize(t: DerivationTree, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(t, Leaf):
        return f'{pad}(lex "{t.token}" {t.entry_key} {t.cat})'
    if isinstance(t, Unary):
        return f"{pad}(u {t.rule} {t.cat}\n{serialize(t.child, indent + 2)})"
    return (f"{pad}(b {t.rule} {t.cat}\n{serialize(t.left, indent + 2)}\n"
            f"{serialize(t.right, indent + 2)})")
