"""Lexical entries, the gradable-adjective registry and measure units.

Entry keys name the lexical item explicitly (surface morphology is not
analysed).  Besides the fixed entries, several key families are generated
on demand:

    np_<name>        proper name, NP constant <name>
    n_<noun>         common noun, N
    tv_<verb>        transitive verb, (S\\NP)/NP
    iv_<verb>        intransitive verb, S\\NP
    num_<n>          numeral modifier, N/N ("ten orders")
    numobj_<n>       numeral object determiner ("won ten orders")
    deg_<n><unit>    measure phrase, D ("4 feet" is deg_4ft)
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional

from . import ccg
from .ccg import Category, cat_to_semtype, parse_category
from .degree import UnknownUnit, normalize_measure, unit_dimension
from .terms import D, E, T, Const, DegLit, Fun, Term, fun, type_of
from .textual import parse_formula

log = logging.getLogger(__name__)


class LexiconError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "lexicon error"


@dataclass(frozen=True)
class LexEntry:
    surface: str
    entry_key: str
    cat: Category
    template: Term


@dataclass(frozen=True)
class GradableRecord:
    lexeme: str
    polarity: str                      # "positive" | "negative"
    dimension: str
    antonym: Optional[str] = None
    base_unit: Optional[str] = None
    integral: bool = False

    @property
    def scale(self) -> str:
        """Name of the measure function shared by an antonym pair (keyed by its positive member)."""
        if self.polarity == "positive" or self.antonym is None:
            return self.lexeme
        return self.antonym


# higher-order constants used by the templates; resolved after composition
THETA = Const("theta", Fun(fun(D, E, T), D))
THETA_CLS = Const("theta_cls", fun(fun(D, E, T), Fun(E, T), D))
PRIVATIVE_MODIFIERS = frozenset({"former"})

_ADJ = "D -> E -> T"
_NP_UP = "(E -> T) -> T"
_TV = "E -> E -> T"

_BASE_CONSTS = {
    "theta": THETA.type,
    "theta_cls": THETA_CLS.type,
    "many": fun(E, D, T),
    "person": Fun(E, T),
    "former": fun(Fun(E, T), E, T),
}

# (key, surface, category, template)
_FIXED = [
    ("is", "is", r"(S\NP)/(S\NP)", r"\P:E -> T. P"),
    ("aux", "did", r"(S\NP)/(S\NP)", r"\P:E -> T. P"),
    ("than_simp", "than", "S/S", r"\p:T. p"),
    ("than_deg", "than", "D/D", r"\d:D. d"),
    ("than_sub", "than", r"(S\D)/(S\D)", r"\K:D -> T. K"),
    ("is_sub", "is", r"((S\D)\NP)/AP", rf"\A:{_ADJ}. \x:E. \d:D. A(d)(x)"),
    ("as_cl", "as", "S/S", r"\p:T. p"),
    ("than_gq", "than", r"((S\NP)\((S\NP)/NP^))/NP^",
     rf"\Q:{_NP_UP}. \W:({_NP_UP}) -> E -> T. \x:E. Q(\y:E. W(\P:E -> T. P(y))(x))"),
    ("pos", "", r"(S\NP)/AP", rf"\A:{_ADJ}. \x:E. A(theta(A))(x)"),
    ("pos_attr", "", r"(N/N)/AP",
     rf"\A:{_ADJ}. \N:E -> T. \x:E. A(theta_cls(A, N))(x) & N(x)"),
    ("er_simp", "-er", r"((S\NP)/NP^)\AP",
     rf"\A:{_ADJ}. \Q:{_NP_UP}. \x:E. exists d:D. A(d)(x) & ~Q(A(d))"),
    ("er_less", "less", r"((S\NP)/NP^)/AP",
     rf"\A:{_ADJ}. \Q:{_NP_UP}. \x:E. exists d:D. ~A(d)(x) & Q(A(d))"),
    ("er_sub", "-er", r"((S\NP)/(S\D))\AP",
     rf"\A:{_ADJ}. \K:D -> T. \x:E. exists d:D. A(d)(x) & ~K(d)"),
    ("er_mea", "-er", r"((S\NP)/D)\AP",
     rf"\A:{_ADJ}. \e:D. \x:E. exists d:D. A(d)(x) & d > e"),
    ("er_mea_neg", "-er", r"((S\NP)/D)\AP",
     rf"\A:{_ADJ}. \e:D. \x:E. exists d:D. A(d)(x) & d < e"),
    ("er_diff", "-er", r"(((S\NP)/NP^)\D)\AP",
     rf"\A:{_ADJ}. \e:D. \Q:{_NP_UP}. \x:E. forall d:D. Q(A(d)) -> A(d + e)(x)"),
    ("as_simp", "as", r"((S\NP)/NP^)/AP",
     rf"\A:{_ADJ}. \Q:{_NP_UP}. \x:E. forall d:D. Q(A(d)) -> A(d)(x)"),
    ("more_num", "more", r"(((S\NP)/NP^)\((S\NP)/NP))/N",
     rf"\N:E -> T. \G:{_TV}. \Q:{_NP_UP}. \z:E. exists d:D. "
     rf"(exists x:E. N(x) & G(x)(z) & many(x, d)) & ~(exists y:E. N(y) & Q(G(y)) & many(y, d))"),
    ("more_is", "more", r"((((S\NP)/NP^)\((S\NP)/NP))/N)/AP",
     rf"\A:{_ADJ}. \N:E -> T. \G:{_TV}. \Q:{_NP_UP}. \z:E. exists d:D. "
     rf"(exists x:E. N(x) & G(x)(z) & A(d)(x)) & ~Q(\y:E. N(y) & A(d)(y))"),
    ("more_has", "more", r"((((S\NP)/NP^)\((S\NP)/NP))/N)/AP",
     rf"\A:{_ADJ}. \N:E -> T. \G:{_TV}. \Q:{_NP_UP}. \z:E. exists d:D. "
     rf"(exists x:E. N(x) & G(x)(z) & A(d)(x)) & ~(exists y:E. N(y) & Q(G(y)) & A(d)(y))"),
    ("a_attr", "a", r"(((S\NP)/NP^)\((S\NP)/NP))/(((S\NP)/NP^)\((S\NP)/NP))",
     rf"\X:({_TV}) -> ({_NP_UP}) -> E -> T. X"),
    ("a_pred", "a", r"(S\NP)/N", r"\N:E -> T. \x:E. N(x)"),
    ("a_obj", "a", r"((S\NP)\((S\NP)/NP))/N",
     rf"\N:E -> T. \V:{_TV}. \x:E. exists y:E. N(y) & V(y)(x)"),
    ("some_obj", "some", r"((S\NP)\((S\NP)/NP))/N",
     rf"\N:E -> T. \V:{_TV}. \x:E. exists y:E. N(y) & V(y)(x)"),
    ("every_obj", "every", r"((S\NP)\((S\NP)/NP))/N",
     rf"\N:E -> T. \V:{_TV}. \x:E. forall y:E. N(y) -> V(y)(x)"),
    ("many_obj", "many", r"((S\NP)\((S\NP)/NP))/N",
     rf"\N:E -> T. \V:{_TV}. \z:E. exists d:D. exists x:E. "
     rf"N(x) & V(x)(z) & many(x, d) & theta_cls(\e:D. \y:E. many(y, e), N) < d"),
    ("a_subj", "a", r"NP^/N", r"\N:E -> T. \P:E -> T. exists x:E. N(x) & P(x)"),
    ("some", "some", r"NP^/N", r"\N:E -> T. \P:E -> T. exists x:E. N(x) & P(x)"),
    ("every", "every", r"NP^/N", r"\N:E -> T. \P:E -> T. forall x:E. N(x) -> P(x)"),
    ("everyone", "everyone", "NP^", r"\P:E -> T. forall y:E. person(y) -> P(y)"),
    ("someone", "someone", "NP^", r"\P:E -> T. exists y:E. person(y) & P(y)"),
    ("and_np", "and", r"(NP^\NP^)/NP^",
     rf"\R:{_NP_UP}. \Q:{_NP_UP}. \P:E -> T. Q(P) & R(P)"),
    ("or_np", "or", r"(NP^\NP^)/NP^",
     rf"\R:{_NP_UP}. \Q:{_NP_UP}. \P:E -> T. Q(P) | R(P)"),
    ("the", "the", "NP/N", r"\N:E -> T. the(N)"),
    ("former", "former", "N/N", r"\N:E -> T. \x:E. former(N)(x)"),
]

# proper names and nouns available without an explicit np_/n_ key
_NAMES = {"mary": "m", "harry": "h", "bob": "b", "ann": "ann", "john": "j",
          "mickey": "m", "itel": "i", "apcom": "a", "pc6082": "pc6082", "itelxz": "itelxz"}
_NOUNS = ("person", "animal", "order", "customer", "bed", "contract",
          "university_student", "apcom_contract", "computer")
_VERBS = ("won", "has", "owns")

_BUILTIN_GRADABLES = [
    # positive, negative, dimension, base unit, integral
    ("tall", "short", "length", "inch", False),
    ("long", None, "length", "inch", False),
    ("fast", "slow", "speed", None, False),
    ("large", "small", "size", None, False),
    ("expensive", "cheap", "price", None, False),
    ("important", None, "importance", None, False),
    ("many", None, "count", "unit", True),
]


def _cat(src: str) -> Category:
    return parse_category(src)


class Lexicon:
    """Immutable lexicon; register_gradable returns a new instance."""

    def __init__(self, entries: Mapping[str, LexEntry], gradables: Mapping[str, GradableRecord]):
        self._entries = MappingProxyType(dict(entries))
        self._gradables = MappingProxyType(dict(gradables))

    @property
    def entries(self) -> Mapping[str, LexEntry]:
        return self._entries

    @property
    def gradables(self) -> Mapping[str, GradableRecord]:
        return self._gradables

    def gradable(self, name: str) -> Optional[GradableRecord]:
        return self._gradables.get(name)

    def constant_types(self) -> dict:
        """Types of the logical constants this lexicon knows, for parsing formulas."""
        out = dict(_BASE_CONSTS)
        for name in self._gradables:
            out[name] = fun(E, D, T)
        for noun in _NOUNS:
            out[noun] = Fun(E, T)
        for verb in _VERBS:
            out[verb] = fun(E, E, T)
        for const in _NAMES.values():
            out[const] = E
        return out

    def lookup(self, token: str, entry_key: str) -> LexEntry:
        entry = self._entries.get(entry_key) or self._generated(entry_key)
        if entry is None:
            raise LexiconError(f"unknown entry key {entry_key!r} (token {token!r})")
        if token and entry.surface and token != entry.surface:
            log.debug("surface %r differs from entry %s (%r)", token, entry_key, entry.surface)
        return entry

    def _generated(self, key: str) -> Optional[LexEntry]:
        consts = self.constant_types()
        if key in _NAMES:
            return LexEntry(key, key, ccg.NP, Const(_NAMES[key], E))
        if key in _NOUNS:
            return LexEntry(key, key, ccg.N, Const(key, Fun(E, T)))
        if key.startswith("np_"):
            return LexEntry(key[3:], key, ccg.NP, Const(key[3:], E))
        if key.startswith("n_"):
            return LexEntry(key[2:], key, ccg.N, Const(key[2:], Fun(E, T)))
        if key.startswith("tv_"):
            verb = key[3:]
            return LexEntry(verb, key, _cat(r"(S\NP)/NP"),
                            parse_formula(rf"\y:E. \x:E. {verb}(x, y)", {verb: fun(E, E, T)}))
        if key.startswith("iv_"):
            verb = key[3:]
            return LexEntry(verb, key, ccg.VP, Const(verb, Fun(E, T)))
        m = re.fullmatch(r"num_(\d+)", key)
        if m:
            return LexEntry(m.group(1), key, _cat("N/N"), parse_formula(
                rf"\N:E -> T. \x:E. N(x) & many(x, lit({m.group(1)}, count))", consts))
        m = re.fullmatch(r"numobj_(\d+)", key)
        if m:
            return LexEntry(m.group(1), key, _cat(r"((S\NP)\((S\NP)/NP))/N"), parse_formula(
                rf"\N:E -> T. \V:{_TV}. \x:E. exists y:E. N(y) & V(y)(x) & many(y, lit({m.group(1)}, count))",
                consts))
        m = re.fullmatch(r"numgt_(\d+)", key)
        if m:
            # "more than n N": some N the subject V-s exceeds n
            return LexEntry(m.group(1), key, _cat(r"((S\NP)\((S\NP)/NP))/N"), parse_formula(
                rf"\N:E -> T. \V:{_TV}. \x:E. exists y:E. N(y) & V(y)(x) & "
                rf"(exists d:D. many(y, d) & d > lit({m.group(1)}, count))", consts))
        m = re.fullmatch(r"deg_(\d+(?:/\d+)?)([a-z]*)", key)
        if m:
            unit = m.group(2) or "unit"
            try:
                value = normalize_measure(Fraction(m.group(1)), unit)
            except UnknownUnit:
                return None
            return LexEntry(key, key, ccg.DEG, DegLit(value, unit_dimension(unit)))
        return None

    def register_gradable(self, pos: str, neg: Optional[str], dimension: str,
                          base_unit: Optional[str] = None, integral: bool = False) -> "Lexicon":
        new = {pos: GradableRecord(pos, "positive", dimension, neg, base_unit, integral)}
        if neg:
            new[neg] = GradableRecord(neg, "negative", dimension, pos, base_unit, integral)
        for name, rec in new.items():
            prior = self._gradables.get(name)
            if prior is not None and prior != rec:
                raise LexiconError(f"{name} already registered as {prior}")
            if name in self._entries and name not in self._gradables:
                raise LexiconError(f"{name} is already a non-gradable entry")
        if integral and dimension != "count":
            raise LexiconError("only the count dimension is integral")
        entries = dict(self._entries)
        for name in new:
            entries[name] = LexEntry(name, name, ccg.AP, parse_formula(
                rf"\d:D. \x:E. {name}(x, d)", {name: fun(E, D, T)}))
        return Lexicon(entries, {**self._gradables, **new})

    def with_extension_file(self, text: str) -> "Lexicon":
        """Apply lines of the form `gradable <pos> <neg|-> <dimension> <unit|-> <integral>`."""
        lex = self
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "gradable" or len(parts) != 6:
                raise LexiconError(f"line {n}: expected 'gradable <pos> <neg|-> <dim> <unit|-> <integral>'")
            _, pos, neg, dim, unit, integral = parts
            lex = lex.register_gradable(pos, None if neg == "-" else neg, dim,
                                        None if unit == "-" else unit,
                                        integral.lower() in ("true", "yes", "1"))
        return lex


def builtin_lexicon() -> Lexicon:
    consts = dict(_BASE_CONSTS)
    entries = {}
    for key, surface, cat, template in _FIXED:
        entries[key] = LexEntry(surface, key, _cat(cat), parse_formula(template, consts))
    lex = Lexicon(entries, {})
    for pos, neg, dim, unit, integral in _BUILTIN_GRADABLES:
        lex = lex.register_gradable(pos, neg, dim, unit, integral)
    return lex


def check_entry(entry: LexEntry) -> None:
    """Raise unless the template inhabits the category's semantic type."""
    got = type_of(entry.template)
    want = cat_to_semtype(entry.cat)
    if got != want:
        raise TypeError(f"{entry.entry_key}: template has type {got}, category {entry.cat} needs {want}")
