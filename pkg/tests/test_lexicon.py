import pytest

from compsem.ccg import DEG, parse_category
from compsem.lexicon import Lexicon, LexiconError, check_entry
from compsem.terms import DegLit, alpha_equal
from compsem.textual import parse_formula


def test_er_simp(lex):
    e = lex.lookup("-er", "er_simp")
    assert e.cat == parse_category(r"(S\NP)/(S/(S\NP))\(S\NP\D)")
    want = parse_formula(r"\A:D -> E -> T. \Q:(E -> T) -> T. \x:E. exists d:D. A(d)(x) & ~Q(A(d))")
    assert alpha_equal(e.template, want)


def test_taller_surface_is_accepted(lex):
    assert lex.lookup("taller", "er_simp") is lex.lookup("-er", "er_simp")


@pytest.mark.parametrize("key", ["is", "as_cl", "than_simp"])
def test_identities(lex, key):
    e = lex.lookup("", key)
    assert alpha_equal(e.template, parse_formula(r"\P:E -> T. P")) or \
        alpha_equal(e.template, parse_formula(r"\p:T. p"))


def test_as_cl_category(lex):
    assert lex.lookup("as", "as_cl").cat == parse_category("S/S")


def test_measure_phrases(lex):
    e = lex.lookup("4 feet", "deg_4ft")
    assert e.cat == DEG and e.template == DegLit(48, "length")
    assert lex.lookup("2 inches", "deg_2inch").template == DegLit(2, "length")


def test_unknown_key(lex):
    with pytest.raises(LexiconError, match="zzz"):
        lex.lookup("nonsense", "zzz")


def test_every_template_type_checks(lex):
    for e in lex.entries.values():
        check_entry(e)
    for key in ["mary", "n_bed", "tv_won", "iv_runs", "num_10", "numobj_10", "numgt_1", "deg_4ft",
                "np_ann"]:
        check_entry(lex.lookup("", key))


def test_antonyms(lex):
    tall, short = lex.gradable("tall"), lex.gradable("short")
    assert (tall.polarity, short.polarity) == ("positive", "negative")
    assert tall.antonym == "short" and short.antonym == "tall"
    assert tall.scale == short.scale == "tall"
    for g in lex.gradables.values():
        if g.antonym:
            assert lex.gradable(lex.gradable(g.antonym).antonym) == g
            assert lex.gradable(g.antonym).polarity != g.polarity


def test_only_count_is_integral(lex):
    assert lex.gradable("many").integral
    assert all(not g.integral for g in lex.gradables.values() if g.dimension != "count")
    with pytest.raises(LexiconError):
        Lexicon({}, {}).register_gradable("heavy", None, "weight", None, True)


def test_register_pair():
    lex = Lexicon({}, {}).register_gradable("tall", "short", "length", "inch", False)
    assert lex.gradable("short").antonym == "tall"
    assert lex.lookup("tall", "tall").cat == parse_category("AP")
    lex = lex.register_gradable("fast", "slow", "speed")
    assert lex.gradable("slow").polarity == "negative"
    assert Lexicon({}, {}).gradable("tall") is None        # immutable


def test_register_conflict(lex):
    with pytest.raises(LexiconError, match="tall"):
        lex.register_gradable("short", "tall", "length")
    same = lex.register_gradable("tall", "short", "length", "inch", False)
    assert same.gradable("tall") == lex.gradable("tall")


def test_extension_file(lex):
    ext = lex.with_extension_file("# weights\ngradable heavy light weight - false\n")
    assert ext.gradable("light").antonym == "heavy"
    assert lex.gradable("heavy") is None
    with pytest.raises(LexiconError, match="line 1"):
        lex.with_extension_file("gradable heavy\n")
