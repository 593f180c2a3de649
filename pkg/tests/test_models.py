from fractions import Fraction

from compsem.axioms import holds, instantiate_axioms, signature_of
from compsem.pipeline import load_problem, semantics
from compsem.prover import Budget, Model, NoModelWithinBounds, OutOfBudget, find_countermodel
from compsem.prover.models import _assignments, _Bounds
from compsem.terms import Not

from _support import CORPUS, formula, sr


def test_contradiction_has_no_model(lex):
    p = formula("person(m)", lex)
    assert isinstance(find_countermodel([p, Not(p)]), NoModelWithinBounds)


def test_positive_form(lex):
    f = formula("tall(m, th(tall))", lex)
    m = find_countermodel([f])
    assert isinstance(m, Model)
    assert len(m.entities) == 1
    assert m.degree_points == 1            # mu_tall(e0) = th(tall)
    assert holds(f, m.interpretation)


def test_taller_needs_two_entities(lex):
    m = find_countermodel([sr("fig1_taller", lex)])
    assert len(m.entities) == 2
    assert m.measures[("tall", m.consts["m"])] > m.measures[("tall", m.consts["h"])]


def test_countermodel_for_231(lex):
    p = load_problem(CORPUS / "fracas-231.problem")
    prem = [semantics(s, lex, p.base) for s in p.premises]
    hyp = semantics(p.hypothesis, lex, p.base)
    axs = [a.formula for a in instantiate_axioms(signature_of(prem + [hyp], lex))]
    fs = axs + prem + [Not(hyp)]
    m = find_countermodel(fs)
    assert isinstance(m, Model)
    assert all(holds(f, m.interpretation) for f in fs)
    assert "order" in m.preds
    text = m.render()
    assert "mu_many" in text and "entities:" in text
    assert set(m.as_dict()) == {"entities", "constants", "predicates", "measures", "thresholds"}


def test_entity_bound(lex):
    # three pairwise distinct heights need three elements
    fs = [sr("harry_taller_mary", lex), sr("mary_taller_bob", lex)]
    assert isinstance(find_countermodel(fs, Budget(max_entities=2)), NoModelWithinBounds)
    assert isinstance(find_countermodel(fs, Budget(max_entities=3)), Model)


def test_degree_point_bound(lex):
    fs = [sr("harry_taller_mary", lex), sr("mary_taller_bob", lex), formula("tall(b, th(tall))", lex)]
    assert isinstance(find_countermodel(fs, Budget(max_degree_points=2)), NoModelWithinBounds)
    assert isinstance(find_countermodel(fs, Budget(max_degree_points=3)), Model)


def test_time_budget(lex):
    p = load_problem(CORPUS / "fracas-235.problem")
    prem = [semantics(s, lex, p.base) for s in p.premises]
    hyp = semantics(p.hypothesis, lex, p.base)
    axs = [a.formula for a in instantiate_axioms(signature_of(prem + [hyp], lex))]
    out = find_countermodel(axs + prem + [Not(hyp)], Budget(time_limit=1e-6))
    assert isinstance(out, OutOfBudget) and not out


def test_integral_counts(lex):
    m = find_countermodel([formula("exists d:D. many(m, d) & d > lit(10, count) & d < lit(12, count)", lex)])
    assert m.measures[("many", m.consts["m"])] == Fraction(11)


def test_assignments_are_canonical():
    assert list(_assignments(3, 1)) == [(0, 0, 0)]
    assert len(list(_assignments(3, 2))) == 4
    assert len(list(_assignments(3, 3))) == 5            # Bell number B3
    assert all(a[0] == 0 for a in _assignments(4, 3))


def test_bounds_matrix():
    b = _Bounds(frozenset({"count"}))
    lt = ("cmp", "<", ("x", Fraction(0)), ("y", Fraction(0)))
    gt = ("cmp", ">", ("x", Fraction(0)), ("y", Fraction(0)))
    assert b.add(b.edges(lt, "length"))
    assert b.entails(b.edges(("cmp", "<=", ("x", Fraction(0)), ("y", Fraction(0))), "length"))
    assert not b.allows(b.edges(gt, "length"))
    c = _Bounds(frozenset({"count"}))
    c.add(c.edges(lt, "count"))
    assert c.entails(c.edges(("cmp", "<=", ("x", Fraction(1)), ("y", Fraction(0))), "count"))
