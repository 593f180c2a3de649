import random
from fractions import Fraction

import pytest

from compsem.axioms import (Interpretation, SignatureError, comp_axiom, compile_to_measures, holds,
                            instantiate_axioms, signature_of)
from compsem.prover import qe
from compsem.prover.ground import Grounder, measure_key, threshold_key
from compsem.terms import Threshold, alpha_equal, subterms
from compsem.textual import show

from _support import formula, sr


def _sig(lex, *srcs):
    return signature_of([formula(s, lex) for s in srcs], lex)


def test_signature_trivial(lex):
    sig = _sig(lex, "tall(m, th(tall))")
    assert sig.gradable_names == ("tall",)
    assert sig.thresholds == (Threshold("tall"),)
    assert sig.entities == ("m",)


def test_signature_measure_phrases(lex):
    sig = signature_of([sr("taller_4ft", lex), sr("harry_shorter_4ft", lex), sr("fig1_taller", lex)], lex)
    assert set(sig.gradable_names) == {"tall", "short"}
    assert set(sig.entities) == {"m", "h"}


def test_signature_fracas235(lex):
    fs = [sr(n, lex) for n in ("f235_ten_orders", "f235_more_orders", "f235_eleven_orders")]
    sig = signature_of(fs, lex)
    assert sig.gradable_names == ("many",)
    assert set(sig.entities) == {"i", "a"}
    assert "order" in sig.classes


def test_signature_choice_and_privative(lex):
    sig = signature_of([sr("subdeletion", lex), sr("f198_former_student", lex)], lex)
    assert sig.choice_terms == ("bed",)
    assert sig.privatives == (("former", "university_student"),)


def test_unregistered_gradable(lex):
    from compsem.terms import App, Const, D, E, T, fun
    f = App(App(Const("heavy", fun(E, D, T)), Const("m", E)), Threshold("heavy"))
    with pytest.raises(SignatureError, match="heavy"):
        signature_of([f], lex)


def _names(axs):
    return [a.name.split("[")[0] for a in axs]


def test_tall_short_instances(lex):
    axs = instantiate_axioms(_sig(lex, "exists d:D. tall(m, d) & ~short(h, d)"))
    names = _names(axs)
    assert names.count("CP") == 2
    assert names.count("Ax1") == 1 and names.count("Ax2") == 1
    for k in ("Ax3", "Ax4", "Ax5", "Ax6", "TH"):
        assert names.count(k) == 1
    assert "Ax1[short]" in [a.name for a in axs] and "Ax2[tall]" in [a.name for a in axs]


def test_many_has_no_antonym_axioms(lex):
    axs = instantiate_axioms(_sig(lex, "exists d:D. many(i, d) & order(i)"))
    assert [a.name for a in axs] == ["CP[many]", "Ax2[many]"]


def test_empty_signature(lex):
    assert instantiate_axioms(signature_of([], lex)) == []


def test_unpaired_gradable_gets_no_bridges(lex):
    axs = instantiate_axioms(_sig(lex, "tall(m, th(tall))"))
    assert _names(axs) == ["CP", "Ax2"]


def test_threshold_per_class(lex):
    axs = instantiate_axioms(_sig(lex, "small(m, th(small, animal)) & large(m, th(large))"))
    ths = [show(a.formula) for a in axs if a.name.startswith("TH")]
    assert sorted(ths) == ["th(small) < th(large)", "th(small, animal) < th(large, animal)"]


def test_meaning_postulates(lex):
    sig = signature_of([sr("subdeletion", lex), sr("f198_former_student", lex)], lex)
    axs = {a.name: a for a in instantiate_axioms(sig)}
    assert show(axs["Choice[bed]"].formula) == "bed(the(bed))"
    assert "Privative[former,university_student]" in axs
    assert not comp_axiom(axs["Choice[bed]"]) and comp_axiom(axs["CP[tall]"])


def test_compile_examples(lex):
    sig = _sig(lex, "exists d:D. tall(m, d) & ~short(h, d)")
    assert show(compile_to_measures(formula("tall(m, th(tall))", lex), sig)) == "mu_tall(m) >= th(tall)"
    assert show(compile_to_measures(formula("short(h, lit(3, length))", lex), sig)) == \
        "mu_tall(h) <= lit(3, length)"
    got = compile_to_measures(sr("fig1_taller", lex), sig)
    consts = {**lex.constant_types(), "mu_tall": formula("mu_tall", lex).type}
    from compsem.textual import parse_formula
    from compsem.terms import D, E, Fun
    consts["mu_tall"] = Fun(E, D)
    assert alpha_equal(got, parse_formula("exists e:D. mu_tall(m) >= e & ~(mu_tall(h) >= e)", consts))
    assert not any(s == "tall" for s in map(str, subterms(got)))


def test_compile_unknown(lex):
    sig = _sig(lex, "tall(m, th(tall))")
    with pytest.raises(SignatureError):
        compile_to_measures(formula("fast(m, th(fast))", lex), sig)


# --- soundness of the axioms under the measure reading -------------------------

# one antonym pair with a comparison class, an integral scale and an unpaired one;
# other adjectives instantiate the same schemata
SOUNDNESS_SIG = [
    "exists d:D. tall(m, d) & ~short(h, d)",
    "short(h, th(short, person)) & tall(m, th(tall, person))",
    "exists d:D. many(m, d) & d > lit(3, count)",
    "exists d:D. long(the(bed), d) & ~tall(h, d)",
]


def _soundness_setup(lex):
    fs = [formula(s, lex) for s in SOUNDNESS_SIG]
    sig = signature_of(fs, lex)
    axs = [a for a in instantiate_axioms(sig) if comp_axiom(a)]
    th_axioms = [a for a in axs if a.name.startswith("TH")]
    valid = [a for a in axs if not a.name.startswith("TH")]
    domain = ("e0", "e1")
    consts = {c: domain[k % 2] for k, c in enumerate(sig.entities)}
    gradables = {g.lexeme: g for g in sig.gradables}
    return sig, valid, th_axioms, domain, consts, gradables


def _sample(rng, sig, domain, gradables):
    measures, thresholds = {}, {}
    for g in gradables.values():
        for e in domain:
            if g.integral:
                v = Fraction(rng.randint(-1, 6))
            else:
                v = Fraction(rng.randint(-6, 30), rng.randint(1, 4))
            measures[(g.scale, e)] = v
    for g in gradables.values():
        if g.polarity != "positive":
            continue
        for cls in {t.cls for t in sig.thresholds} | {None}:
            lo = Fraction(rng.randint(-6, 20), rng.randint(1, 3))
            hi = lo + Fraction(rng.randint(1, 12), rng.randint(1, 3))
            thresholds[(g.lexeme, cls)] = hi
            if g.antonym:
                thresholds[(g.antonym, cls)] = lo      # TH holds by construction
    return measures, thresholds


def test_axiom_soundness_randomized(lex):
    sig, valid, th_axioms, domain, consts, gradables = _soundness_setup(lex)
    assert len(valid) == 14
    grounded = {}
    for a in valid:
        g = Grounder(domain, consts, gradables)
        grounded[a.name] = qe.eliminate(g.ground(compile_to_measures(a.formula, sig)),
                                        frozenset(g.integral_vars))
    violations, checks = _run(grounded, sig, domain, gradables, 10_000)
    assert checks >= 10_000 * len(valid)
    assert violations == []


def _run(grounded, sig, domain, gradables, n):
    rng = random.Random(1234)
    violations, checks = [], 0
    for _ in range(n):
        measures, thresholds = _sample(rng, sig, domain, gradables)
        values = {measure_key(s, e): v for (s, e), v in measures.items()}
        values.update({threshold_key(Threshold(a, c)): v for (a, c), v in thresholds.items()})
        for name, f in grounded.items():
            checks += 1
            if not qe.evaluate(f, {}, values):
                violations.append((name, values))
    return violations, checks


def test_sampler_detects_an_unsound_bridge(lex):
    """Ax3 weakened to a non-strict premise fails at the shared boundary degree."""
    sig, _, _, domain, consts, gradables = _soundness_setup(lex)
    bad = formula("forall d1:D. forall d2:D. d1 >= d2 -> (forall x:E. short(x, d2) -> ~tall(x, d1))", lex)
    g = Grounder(domain, consts, gradables)
    q = qe.eliminate(g.ground(compile_to_measures(bad, sig)))
    violations, _ = _run({"bad": q}, sig, domain, gradables, 200)
    assert violations


def test_axiom_soundness_direct_evaluation(lex):
    """Same property through the independent model evaluator, on fewer samples."""
    sig, valid, th_axioms, domain, consts, gradables = _soundness_setup(lex)
    rng = random.Random(77)
    for _ in range(40):
        measures, thresholds = _sample(rng, sig, domain, gradables)
        it = Interpretation(domain, dict(consts), {}, measures, thresholds, gradables)
        for a in valid + th_axioms:
            assert holds(a.formula, it), a.name


def test_measure_reading_of_comparative():
    """exists d (mu(m) >= d & ~mu(h) >= d) is mu(m) > mu(h), over dense degrees."""
    from compsem.lexicon import builtin_lexicon
    lex = builtin_lexicon()
    sig = _sig(lex, "tall(m, th(tall))", "tall(h, th(tall))")
    f = compile_to_measures(sr("fig1_taller", lex), sig)
    gradables = {g.lexeme: g for g in sig.gradables}
    g = Grounder(("e0", "e1"), {"m": "e0", "h": "e1"}, gradables)
    q = qe.eliminate(g.ground(f))
    for a in range(-2, 3):
        for b in range(-2, 3):
            vals = {measure_key("tall", "e0"): Fraction(a), measure_key("tall", "e1"): Fraction(b)}
            assert qe.evaluate(q, {}, vals) == (a > b)
