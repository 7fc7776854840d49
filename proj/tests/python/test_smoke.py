"""Smoke tests for the ptmkit extension module."""

import pytest

import ptmkit


def test_corpus_round_trip():
    ids = ptmkit.corpus_ids()
    assert ids == ["1a", "1b", "2a", "2b", "3a", "3b"]
    for pid in ids:
        program = ptmkit.corpus_program(pid)
        assert ptmkit.typecheck(program) == []
        again = ptmkit.parse(ptmkit.pretty_print(program))
        assert again == program


def test_parse_and_dialects():
    program = ptmkit.parse("line = L1.insert(d[i])", dialect="v1")
    assert program.dialect == "v1"
    with pytest.raises(ptmkit.DslError):
        ptmkit.parse("line = L1.insert(d[i])", dialect="v2")


def test_predict_formula():
    program = ptmkit.corpus_program("2b")
    formula = ptmkit.predict(program)
    assert str(formula) == "2*L^-1*T_insert*n + L^-1*T_load*n + L^-1*T_rep*n + L^-1*T_store*n"
    assert formula.factored() == "n/L * (2*T_insert + T_load + T_rep + T_store)"
    numeric = ptmkit.predict(program, keep_symbolic=False)
    assert numeric.eval({"n": 1024}) == 2944


def test_predict_matches_interpreter():
    costs = ptmkit.default_costs()
    assert costs["T_insert"] == 20 and costs["L"] == 16
    for pid in ptmkit.corpus_ids():
        program = ptmkit.corpus_program(pid)
        params = {"n": 256, "S": 3, "m": 4}
        result = ptmkit.run(program, params)
        numeric = ptmkit.predict(program, keep_symbolic=False)
        assert numeric.eval(params | {"L": 16}) == result["cycles"]


def test_footprint():
    report = ptmkit.footprint(ptmkit.corpus_program("1b"))
    assert report["inserts"] == "2*L^-1*n"


def test_run_counts_and_trace():
    result = ptmkit.run(ptmkit.corpus_program("1b"), {"n": 64}, trace=True)
    assert result["cycles"] == 552
    assert result["op_counts"]["insert"] == 8
    assert len(result["trace"]) > 0
    with pytest.raises(ptmkit.InterpreterError):
        ptmkit.run(ptmkit.corpus_program("1b"), {"n": 100})


def test_check_reuse():
    report = ptmkit.check(ptmkit.corpus_program("3a"), {"n": 1024, "m": 2})
    assert report["redundant_inserts"] == 64
    assert report["reinsert_factor"]["v"] == 2.0
    report = ptmkit.check(ptmkit.corpus_program("3b"), {"n": 5120, "m": 5})
    assert report["redundant_inserts"] == 0
    assert report["reinsert_factor"]["v"] == 1.0


def test_mdape():
    assert ptmkit.mdape([100], 100) == 0.0
    assert ptmkit.mdape([100, 200, 300], 200) == pytest.approx(1 / 3)
    with pytest.raises(ptmkit.HarnessError):
        ptmkit.mdape([], 5)


def test_sweep():
    rows = ptmkit.sweep(["1a"])
    assert len(rows) == 16 * 5
    anchor = [r for r in rows if r["struct_size"] == 4 and r["n"] == 1024]
    assert anchor[0]["prediction"] == 13184
