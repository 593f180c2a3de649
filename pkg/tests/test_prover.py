import time
from dataclasses import replace

import pytest

from compsem.axioms import instantiate_axioms, signature_of
from compsem.pipeline import load_problem, problem_files, semantics, Verdict
from compsem.prover import Budget, GaveUp, Proved, input_clauses, prove, replay
from compsem.prover.resolution import ReplayError
from compsem.terms import Not

from _support import CORPUS, formula, sr


def _prove(lex, premises, goal, b=Budget()):
    ps = [formula(p, lex) if isinstance(p, str) else p for p in premises]
    g = formula(goal, lex) if isinstance(goal, str) else goal
    axs = instantiate_axioms(signature_of(ps + [g], lex))
    return prove(axs, ps, g, b)


def test_threshold_monotonicity_proof(lex):
    t0 = time.perf_counter()
    r = _prove(lex, [sr("fig1_taller", lex), sr("fig2_tall", lex)], "tall(m, th(tall))")
    assert time.perf_counter() - t0 < 1.0
    assert isinstance(r, Proved)
    assert replay(r.trace)
    cited = r.cited()
    assert "Ax2[tall]" in cited
    assert {"premise 1", "premise 2", "negated goal"} <= set(cited)
    assert r.trace[-1].lits == ()


def test_measure_phrase_inference(lex):
    t0 = time.perf_counter()
    r = _prove(lex, [sr("taller_4ft", lex), sr("harry_shorter_4ft", lex)], sr("fig1_taller", lex))
    assert time.perf_counter() - t0 < 2.0
    assert r and replay(r.trace)
    assert "Ax3[short,tall]" in r.cited()


def test_antonym_transfer(lex):
    r = _prove(lex, ["forall d:D. fast(i, d) -> fast(p, d)"], "~(exists d:D. slow(p, d) & ~slow(i, d))")
    assert r and replay(r.trace)
    assert any(c.startswith("Ax5'") for c in r.cited())


def test_no_premises_no_proof(lex):
    r = _prove(lex, [], "tall(m, th(tall))")
    assert isinstance(r, GaveUp) and r.reason == "saturation-without-proof"


def test_budget_exhaustion(lex):
    r = _prove(lex, [sr("taller_4ft", lex), sr("harry_shorter_4ft", lex)], sr("fig1_taller", lex),
               Budget(max_clauses=3))
    assert isinstance(r, GaveUp) and r.reason == "budget"


@pytest.mark.parametrize("field", ["time_limit", "max_clauses", "max_entities", "max_degree_points",
                                   "max_depth", "max_literals"])
def test_budget_validation(field):
    with pytest.raises(ValueError, match=field):
        Budget(**{field: 0})


def test_goal_must_be_a_formula(lex):
    with pytest.raises(TypeError):
        prove([], [], formula("m", lex))


def test_input_clauses_are_labelled(lex):
    cl = input_clauses([], [sr("fig1_taller", lex)], formula("tall(m, th(tall))", lex))
    labels = [l for l, _ in cl]
    assert labels.count("premise 1") == 2 and labels[-1] == "negated goal"


def test_replay_rejects_tampering(lex):
    r = _prove(lex, [sr("fig1_taller", lex), sr("fig2_tall", lex)], "tall(m, th(tall))")
    steps = list(r.trace)
    k = next(i for i, s in enumerate(steps) if s.rule == "resolve")
    other = next(s for s in steps if s.rule == "input" and s.lits != steps[k].lits)
    steps[k] = replace(steps[k], lits=other.lits)
    with pytest.raises(ReplayError):
        replay(steps)
    with pytest.raises(ReplayError):
        replay(r.trace[:-1])


def test_integer_arithmetic_235(lex):
    """More than ten, plus the lower-bound reading of numerals, gives at least eleven."""
    prem = [sr("f235_ten_orders", lex), sr("f235_more_orders", lex)]
    r = _prove(lex, prem, sr("f235_eleven_orders", lex))
    assert r and replay(r.trace)


def _problem_formulas(path, lex):
    p = load_problem(path)
    prem = [semantics(s, lex, p.base) for s in p.premises]
    hyp = semantics(p.hypothesis, lex, p.base)
    return p, prem, hyp, instantiate_axioms(signature_of(prem + [hyp], lex))


@pytest.mark.parametrize("path", problem_files(CORPUS), ids=lambda p: p.stem)
def test_proofs_match_targets_and_never_both(path, lex):
    """Without model pruning: Yes proves H, No proves not-H, Unknown proves neither."""
    p, prem, hyp, axs = _problem_formulas(path, lex)
    short = Budget(time_limit=1.0)
    want = p.target
    pos = prove(axs, prem, hyp, Budget(time_limit=5.0) if want is Verdict.YES else short)
    neg = prove(axs, prem, Not(hyp), Budget(time_limit=5.0) if want is Verdict.NO else short)
    assert not (pos and neg)
    assert bool(pos) == (want is Verdict.YES)
    assert bool(neg) == (want is Verdict.NO)
    for r in (pos, neg):
        if r:
            assert replay(r.trace)


# --- spot-check: proved goals hold in random measure models of the premises ---------

_EXTENSIONS = ("won", "has", "owns")


def _random_model(rng, lex, sig, fs):
    from fractions import Fraction

    from compsem.axioms import Interpretation
    from compsem.terms import DegLit, subterms

    dom = tuple(f"e{i}" for i in range(rng.randint(1, 3)))
    consts = {c: rng.choice(dom) for c in sig.entities}
    grads = {g.lexeme: g for g in sig.gradables}
    for g in list(grads.values()):
        if g.antonym:
            grads[g.antonym] = lex.gradable(g.antonym)
    lits = sorted({s.value for f in fs for s in subterms(f) if isinstance(s, DegLit)}) or [Fraction(0)]
    pts = sorted({v + o for v in lits for o in (-2, -1, 0, 1, 2)} | {v + Fraction(1, 2) for v in lits})
    measures = {(g.scale, e): rng.choice(pts) for g in grads.values() for e in dom}
    thresholds = {}
    for g in grads.values():
        if g.polarity != "positive":
            continue
        for cls in {t.cls for t in sig.thresholds} | {None}:
            lo, hi = sorted(rng.sample(pts, 2))
            thresholds[(g.lexeme, cls)] = hi
            if g.antonym:
                thresholds[(g.antonym, cls)] = lo
    unary = set(sig.classes) | {"person", "former_university_student", "university_student"}
    preds = {p: {(e,) for e in dom if rng.random() < 0.5} for p in unary}
    for p in _EXTENSIONS:
        preds[p] = {(a, b) for a in dom for b in dom if rng.random() < 0.4}
    return Interpretation(dom, consts, preds, measures, thresholds, grads)


@pytest.mark.parametrize("path", [f for f in problem_files(CORPUS)
                                  if load_problem(f).target in (Verdict.YES, Verdict.NO)],
                         ids=lambda p: p.stem)
def test_soundness_spot_check(path, lex):
    import random

    from compsem.axioms import comp_axiom, holds

    p, prem, hyp, axs = _problem_formulas(path, lex)
    goal = hyp if p.target is Verdict.YES else Not(hyp)
    sig = signature_of(prem + [hyp], lex)
    postulates = [a.formula for a in axs if not comp_axiom(a)]
    rng = random.Random(0)
    models = tries = 0
    while models < 100 and tries < 10_000:
        tries += 1
        it = _random_model(rng, lex, sig, prem + [hyp])
        if all(holds(f, it) for f in prem + postulates):
            models += 1
            assert holds(goal, it)
    assert models >= 10
