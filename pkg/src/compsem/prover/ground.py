"""Grounding over a finite entity domain, in the measure reading.

Entity quantifiers become finite conjunctions/disjunctions; gradable atoms
become comparisons with measure atoms such as ``mu_tall(e0)``; degree
quantifiers are kept for qe.eliminate.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..axioms import ADJ_TYPE, CHOICE, binder_dimensions, choice_name
from ..degree import INTEGRAL_DIMENSIONS
from ..terms import (D, E, And, App, Cmp, Const, DegAdd, DegLit, Exists, Forall, Implies, Not, Or,
                     Term, Threshold, Var, head_and_args)
from ..textual import show
from . import qe


class GroundingError(ValueError):
    pass


def threshold_key(t: Threshold) -> str:
    return f"th({t.adjective})" if t.cls is None else f"th({t.adjective},{t.cls})"


def measure_key(scale: str, elem: str) -> str:
    return f"mu_{scale}({elem})"


@dataclass
class Grounder:
    domain: tuple                              # element names
    consts: Mapping[str, str]                  # constant name -> element
    gradables: Mapping                         # lexeme -> GradableRecord
    dims: dict = field(default_factory=dict)   # degree key -> dimension
    integral_vars: set = field(default_factory=set)
    _n: itertools.count = field(default_factory=itertools.count)
    _bdims: dict = field(default_factory=dict)

    def ground(self, f: Term) -> tuple:
        table = {}
        for g in self.gradables.values():
            table[g.lexeme] = g.dimension
            table[f"mu_{g.scale}"] = g.dimension
        self._bdims = binder_dimensions(f, table)
        return self._f(f, {})

    # entities
    def _ent(self, t: Term, env: dict) -> str:
        if isinstance(t, Var):
            return env[t.name][1]
        if isinstance(t, Const):
            try:
                return self.consts[t.name]
            except KeyError:
                raise GroundingError(f"constant {t.name} has no element") from None
        if isinstance(t, App) and isinstance(t.fun, Const) and t.fun.name == CHOICE \
                and isinstance(t.arg, Const):
            return self.consts[choice_name(t.arg.name)]
        raise GroundingError(f"not an entity term: {show(t)}")

    # degrees: (key | None, offset), with the key's dimension recorded
    def _deg(self, t: Term, env: dict, dim_hint=None):
        if isinstance(t, DegLit):
            return (None, t.value), t.dimension
        if isinstance(t, Var):
            kind, key, dim = env[t.name]
            return (key, Fraction(0)), dim
        if isinstance(t, Threshold):
            rec = self.gradables[t.adjective]
            key = threshold_key(t)
            self.dims[key] = rec.dimension
            return (key, Fraction(0)), rec.dimension
        if isinstance(t, DegAdd):
            (k1, a), d1 = self._deg(t.left, env)
            (k2, b), d2 = self._deg(t.right, env)
            if k1 is not None and k2 is not None:
                raise GroundingError(f"sum of two degree atoms is outside difference logic: {show(t)}")
            return (k1 if k1 is not None else k2, a + b), d1 if k1 is not None else d2
        if isinstance(t, App) and isinstance(t.fun, Const) and t.fun.name.startswith("mu_"):
            scale = t.fun.name[3:]
            dim = next((g.dimension for g in self.gradables.values() if g.scale == scale), "degree")
            key = measure_key(scale, self._ent(t.arg, env))
            self.dims[key] = dim
            return (key, Fraction(0)), dim
        raise GroundingError(f"not a degree term: {show(t)}")

    def _mu(self, rec, x: str) -> tuple:
        key = measure_key(rec.scale, x)
        self.dims[key] = rec.dimension
        return (key, Fraction(0))

    def _f(self, f: Term, env: dict) -> tuple:
        if isinstance(f, Not):
            return qe.negate(self._f(f.body, env))
        if isinstance(f, And):
            return qe.mk_and([self._f(f.left, env), self._f(f.right, env)])
        if isinstance(f, Or):
            return qe.mk_or([self._f(f.left, env), self._f(f.right, env)])
        if isinstance(f, Implies):
            return qe.mk_or([qe.negate(self._f(f.left, env)), self._f(f.right, env)])
        if isinstance(f, (Forall, Exists)):
            if f.var.type == E:
                parts = [self._f(f.body, {**env, f.var.name: ("e", x, None)}) for x in self.domain]
                return qe.mk_and(parts) if isinstance(f, Forall) else qe.mk_or(parts)
            if f.var.type == D:
                key = f"?{f.var.name}{next(self._n)}"
                dim = self._binder_dim(f)
                if dim in INTEGRAL_DIMENSIONS:
                    self.integral_vars.add(key)
                body = self._f(f.body, {**env, f.var.name: ("d", key, dim)})
                return ("all" if isinstance(f, Forall) else "ex", key, body)
            raise GroundingError(f"cannot ground a quantifier over {f.var.type}")
        if isinstance(f, Cmp):
            l, dl = self._deg(f.left, env)
            r, dr = self._deg(f.right, env)
            return qe.cmp(f.op, l, r)
        head, args = head_and_args(f)
        if isinstance(head, Const):
            rec = self.gradables.get(head.name) if head.type == ADJ_TYPE else None
            if rec is not None:
                mu = self._mu(rec, self._ent(args[0], env))
                d, _ = self._deg(args[1], env)
                return qe.cmp(">=" if rec.polarity == "positive" else "<=", mu, d)
            return ("atom", (head.name,) + tuple(self._ent(a, env) for a in args))
        raise GroundingError(f"cannot ground {show(f)}")

    def _binder_dim(self, f: Term) -> str:
        return self._bdims.get(id(f), "degree")


def ground_eliminated(f: Term, g: Grounder) -> tuple:
    """Ground f and eliminate its degree quantifiers."""
    return qe.eliminate(g.ground(f), frozenset(g.integral_vars))
