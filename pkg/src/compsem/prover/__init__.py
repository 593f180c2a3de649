"""Refutation prover and countermodel search over COMP."""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ..axioms import Axiom, Signature, signature_of
from ..lexicon import Lexicon, builtin_lexicon
from ..terms import Not, T, Term, type_of
from .fol import Converter, Skolemizer, clausify, dims_table
from .models import Model, NoModelWithinBounds, OutOfBudget, find_countermodel
from .resolution import Budget, GaveUp, Proved, prove_clauses, replay

__all__ = ["Budget", "GaveUp", "Proved", "prove", "replay", "input_clauses", "Model",
           "NoModelWithinBounds", "OutOfBudget", "find_countermodel"]


def _named(axioms: Iterable) -> list:
    out = []
    for k, a in enumerate(axioms, 1):
        out.append(a if isinstance(a, Axiom) else Axiom(f"axiom {k}", a))
    return out


def input_clauses(axioms: Sequence, premises: Sequence[Term], goal: Optional[Term],
                  lexicon: Optional[Lexicon] = None, sig: Optional[Signature] = None) -> list:
    """Labelled clauses for axioms, premises and the negated goal.

    sig overrides the signature read off the formulas; the measure engine
    passes the signature of the uncompiled problem so that measure symbols
    keep their dimensions.
    """
    lex = lexicon or builtin_lexicon()
    axioms = _named(axioms)
    formulas = [a.formula for a in axioms] + list(premises) + ([goal] if goal is not None else [])
    for f in formulas:
        if type_of(f) != T:
            raise TypeError(f"not a closed formula of type T: {f}")
    if sig is None:
        sig = signature_of(formulas, lex)
    conv = Converter(dims_table(sig.gradables))
    sk = Skolemizer()
    out = []
    for a in axioms:
        out += [(a.name, c) for c in clausify(a.formula, conv, sk)]
    for k, p in enumerate(premises, 1):
        out += [(f"premise {k}", c) for c in clausify(p, conv, sk)]
    if goal is not None:
        out += [("negated goal", c) for c in clausify(Not(goal), conv, sk)]
    return out


def prove(axioms: Sequence, premises: Sequence[Term], goal: Term, b: Budget = Budget(),
          lexicon: Optional[Lexicon] = None, sig: Optional[Signature] = None):
    """Proved(trace) if axioms and premises entail goal, else GaveUp(reason)."""
    return prove_clauses(input_clauses(axioms, premises, goal, lexicon, sig), b)
