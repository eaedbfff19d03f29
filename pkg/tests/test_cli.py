import io
import json

import pytest

from pcfgames.cli import run_cli

from helpers import CORPUS, SAMPLES


def run(*argv, env=None):
    buf = io.StringIO()
    code = run_cli(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_run_case_sample():
    assert run("run", str(SAMPLES / "case.pcf")) == (0, "5\n")


def test_run_divergent_is_exit_2():
    code, _ = run("run", str(CORPUS / "loop_identity.pcf"), "--fuel", "1000")
    assert code == 2


def test_missing_file_is_exit_1():
    assert run("run", "no/such/file.pcf")[0] == 1


def test_bad_flag_is_exit_1():
    assert run("run")[0] == 1


def test_compare_reflexive():
    path = str(SAMPLES / "id.pcf")
    code, out = run("compare", path, path, "--norm-bound", "4")
    assert code == 0 and out.splitlines()[0] == "related-up-to-bounds"


def test_compare_witness_replays(tmp_path):
    from pcfgames.fullabs import observe
    from pcfgames.denotation import denote
    from pcfgames.strategy import loads
    from pcfgames.syntax import read_pcf_file
    w = tmp_path / "w.strategy"
    code, out = run("compare", str(SAMPLES / "const0.pcf"), str(SAMPLES / "const1.pcf"),
                    "--norm-bound", "3", "--window", "3", "--witness", str(w))
    assert code == 0 and out.startswith("separated")
    alpha = loads(w.read_text())
    f = denote(read_pcf_file(SAMPLES / "const0.pcf"), window=3)
    g = denote(read_pcf_file(SAMPLES / "const1.pcf"), window=3)
    assert observe(alpha, f) == 0 and observe(alpha, g) != 0


def test_axioms_report_is_deterministic():
    a = run("axioms", "--suite", "A3", "--cases", "20", "--seed", "7", "--window", "3",
            "--report", "json-lines")
    b = run("axioms", "--suite", "A3", "--cases", "20", "--seed", "7", "--window", "3",
            "--report", "json-lines")
    assert a == b and a[0] == 0
    rec = json.loads(a[1].splitlines()[0])
    assert rec["seed"] == 7 and rec["verdict"] == "pass"


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("PCF_SEED", "3")
    _, out = run("axioms", "--suite", "A1", "--cases", "5", "--seed", "9", "--report", "json-lines")
    assert json.loads(out)["seed"] == 3


def test_denote_extract_round_trip(tmp_path):
    s = tmp_path / "f.strategy"
    assert run("denote", str(SAMPLES / "branch.pcf"), "--window", "2", "--emit", str(s))[0] == 0
    code, out = run("extract", str(s))
    assert code == 0
    from pcfgames.denotation import denote
    from pcfgames.strategy import loads
    from pcfgames.syntax import parse_term
    assert denote(parse_term(out), window=2) == loads(s.read_text())


def test_tree_and_decompose():
    code, out = run("tree", str(SAMPLES / "branch.pcf"), "--window", "2")
    assert code == 0 and out.startswith("(node")
    code, out = run("decompose", str(SAMPLES / "branch.pcf"), "--window", "2")
    assert code == 0 and out.startswith("total head 1")


def test_approx():
    code, out = run("approx", str(SAMPLES / "branch.pcf"), "-k", "2", "--window", "3")
    assert code == 0 and "p_2" in out


def test_stlc_check():
    code, out = run("stlc", "check", "--type", "iota->iota->iota", "--size", "4")
    assert code == 0 and "2 normal forms" in out
    assert run("stlc", "check", "--type", "nat->nat")[0] == 1


def test_corpus_command():
    code, out = run("corpus", "--dir", str(CORPUS))
    assert code == 0 and out.splitlines()[-1].endswith("programs agree")
