import re
import shutil
import subprocess

import pytest

from compsem.pipeline import Verdict, decide, load_problem, problem_files
from compsem.prover.tptp import numeral, to_tptp
from compsem.terms import Not
from fractions import Fraction

from _support import CORPUS, formula

FOF = re.compile(r"^fof\(([a-z][a-z0-9_]*), (axiom|negated_conjecture), (.*)\)\.$")


def _export(pid, tmp_path, engine="comp"):
    out = tmp_path / f"{pid}.p"
    d = decide(load_problem(CORPUS / f"{pid}.problem"), engine=engine, emit_tptp=str(out))
    return d, out.read_text()


def _statements(text):
    rows = [l for l in text.splitlines() if l and not l.startswith("%")]
    got = []
    for l in rows:
        m = FOF.match(l)
        assert m, l
        body = m.group(3)
        depth = 0
        for ch in body:
            depth += {"(": 1, ")": -1}.get(ch, 0)
            assert depth >= 0, l
        assert depth == 0, l
        got.append(m.groups())
    return got


def test_numeral_names():
    assert numeral(Fraction(48), "length") == "n_length_48"
    assert numeral(Fraction(-3, 2), "length") == "n_length_m3_2"


def test_order_axioms_and_single_conjecture(tmp_path):
    _, text = _export("fracas-229", tmp_path)
    st = _statements(text)
    names = [n for n, _, _ in st]
    assert len(names) == len(set(names))
    assert {"leq_refl", "leq_trans", "leq_total", "less_def"} <= set(names)
    assert [r for _, r, _ in st].count("negated_conjecture") == 1


def test_no_problem_exports_the_negation(tmp_path):
    d, text = _export("fracas-229", tmp_path)
    assert d.verdict is Verdict.NO
    conj = [b for _, r, b in _statements(text) if r == "negated_conjecture"][0]
    assert conj.startswith("~ (~ (")


def test_count_numerals_are_ordered_and_discrete(tmp_path):
    _, text = _export("fracas-235", tmp_path)
    assert "less(n_count_10, n_count_11)" in text
    assert "![X]: (less(n_count_10, X) => leq(n_count_11, X))" in text


def test_shift_axioms(tmp_path):
    _, text = _export("c03-differential", tmp_path)
    assert "plus(" in text
    assert re.search(r"fof\(shift_n_length_\d+_up, axiom", text)
    assert re.search(r"fof\(sum_n_length_\d+_n_length_\d+, axiom", text)


def test_measure_engine_export(tmp_path):
    _, text = _export("fracas-198", tmp_path, engine="measure")
    _statements(text)
    _, text = _export("c14-measure-phrases", tmp_path, engine="measure")
    assert "mu_tall(" in text and "leq(" in text


def test_direct_export(lex):
    text = to_tptp([], [formula("tall(m, th(tall))", lex)], Not(formula("tall(m, th(tall))", lex)))
    assert "fof(premise_1, axiom, tall(m, th_tall))." in text


def _external():
    for name, cmd in (("eprover", ["eprover", "--auto", "-s", "--cpu-limit=30"]),
                      ("vampire", ["vampire", "--mode", "casc", "-t", "30"])):
        if shutil.which(name):
            return cmd
    return None


@pytest.mark.skipif(_external() is None, reason="no external first-order prover on PATH")
def test_external_prover_refutes_yes_no(tmp_path):
    cmd = _external()
    for path in problem_files(CORPUS):
        out = tmp_path / (path.stem + ".p")
        d = decide(load_problem(path), emit_tptp=str(out))
        if d.verdict not in (Verdict.YES, Verdict.NO):
            continue
        res = subprocess.run(cmd + [str(out)], capture_output=True, text=True, timeout=120)
        assert re.search(r"SZS status (Unsatisfiable|Theorem)|Proof found", res.stdout), path.name
