import csv
import subprocess
import sys

import pytest

from nrasat.bench import CSV_FIELDS, FAMILIES, gen_family, parse_config
from nrasat.cli import main

SAT = "(set-logic QF_NRA)(declare-fun x () Real)(assert (= (* x x) 2))(assert (< x 0))(check-sat)(get-model)\n"
UNSAT = "(declare-fun x () Real)(assert (< (* x x) 0))(check-sat)\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in (("sat", SAT), ("unsat", UNSAT), ("bad", "(assert (> q 0))")):
        p = tmp_path / (name + ".smt2")
        p.write_text(text)
        out[name] = str(p)
    return out


def test_sat_prints_verdict_then_model(files, capsys):
    assert main([files["sat"]]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "sat"
    assert lines[1] == "(model"
    assert "root(x^2 - 2, 1) ≈ -1.41421" in lines[2]


def test_unsat_with_stats_and_trace(files, capsys):
    assert main([files["unsat"], "--stats", "--trace-lemmas"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "unsat"
    assert "(:stats" in out and any(l.strip().startswith(":conflicts") for l in out)


def test_trace_lemmas_are_smtlib(capsys, tmp_path):
    p = tmp_path / "b.smt2"
    p.write_text(gen_family("block_case", 3))
    assert main([str(p), "--mode", "vsids", "--trace-lemmas"]) == 0
    lemmas = [l for l in capsys.readouterr().out.splitlines() if l.startswith("(lemma ")]
    assert lemmas and all(l.count("(") == l.count(")") for l in lemmas)


def test_unknown_exit_code(tmp_path, capsys):
    p = tmp_path / "c.smt2"
    p.write_text(gen_family("fixed_chain", 8))
    assert main([str(p), "--mode", "vsids", "--conflict-budget", "0"]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "unknown"


def test_usage_and_parse_errors(files, capsys):
    assert main([files["bad"]]) == 2
    assert "sort error" in capsys.readouterr().err
    assert main([files["sat"], "--mode", "nope"]) == 2
    assert main(["/nonexistent.smt2"]) == 2
    assert main([]) == 2


def test_gen_and_bench(tmp_path, capsys):
    d = tmp_path / "inst"
    assert main(["gen", "--family", "path_case", "--from", "2", "--n", "3", "--out", str(d)]) == 0
    assert sorted(p.name for p in d.iterdir()) == ["path_case_002.smt2", "path_case_003.smt2"]
    out = tmp_path / "r.csv"
    assert main(["bench", "--dir", str(d), "--out", str(out),
                 "--configs", "prop-vsids:look-ahead,nlsat-static:lower-degree"]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4 and list(rows[0]) == CSV_FIELDS
    assert {r["verdict"] for r in rows} == {"sat"}
    assert main(["bench", "--dir", str(d), "--out", str(out), "--configs", "warp:look-ahead"]) == 2
    assert main(["gen", "--family", "path_case", "--from", "3", "--n", "2", "--out", str(d)]) == 2


def test_parse_config():
    assert parse_config("prop-vsids:lower-degree") == ("prop_vsids", "lower_degree")
    assert parse_config("vsids") == ("vsids", "look_ahead")


@pytest.mark.parametrize("fam", FAMILIES)
def test_family_generators_parse(fam):
    from nrasat import load
    for n in (1, 2, 5):
        _, f = load(gen_family(fam, n))
        assert f.clauses
    with pytest.raises(ValueError):
        gen_family(fam, 0)


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "nrasat", files["unsat"]], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.splitlines()[0] == "unsat"
