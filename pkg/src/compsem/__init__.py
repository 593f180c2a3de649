"""Degree semantics for gradable adjectives and comparatives, with entailment decisions.

CCG derivations are composed into typed lambda terms, closed formulas are
checked against the COMP axioms with a resolution prover that understands
degree comparisons, and bounded countermodels witness non-entailment.
"""
__version__ = "0.1.0"
