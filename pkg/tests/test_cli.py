import json

from click.testing import CliRunner

from forestskein.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_check_cleary_text():
    res = run("check", "cleary", "--lc", "--ore")
    assert res.exit_code == 0
    assert "lc: yes" in res.output
    assert "ore: yes" in res.output


def test_json_determinism():
    outs = []
    for _ in range(2):
        res = run("check", "cleary", "--json")
        assert res.exit_code == 0
        doc = json.loads(res.output)
        doc.pop("wall_time_ms")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]
    doc = json.loads(run("check", "cleary", "--json").output)
    assert doc["schema_version"] == "1"
    assert doc["presentation"]["name"] == "cleary"
    assert all("bounds" in v for v in doc["verdicts"])


def test_exit_code_bad_input(tmp_path):
    bad = tmp_path / "bad.fsk"
    bad.write_text("colors: a\nrel: a1 = a1 a1\n")
    res = run("check", str(bad))
    assert res.exit_code == 2
    res = run("check", "no-such-example")
    assert res.exit_code == 2


def test_exit_code_expectation():
    res = run("check", "notlc", "--lc", "--expect", "lc=yes")
    assert res.exit_code == 3
    res = run("check", "notlc", "--lc", "--expect", "lc=no")
    assert res.exit_code == 0


def test_spine_command():
    res = run("spine", "cleary", "--json")
    doc = json.loads(res.output)
    assert doc["stabilized"] is True
    assert doc["spine_size"] == 3
    res = run("spine", "rebel", "--json")
    doc = json.loads(res.output)
    assert doc["stabilized"] is False
    assert all(v["verdict"] != "proved" for v in doc["verdicts"]
               if v["property"] == "f_infinity")


def test_present_counts_and_abelian():
    res = run("present", "cleary", "--finite", "--abelian", "--json")
    doc = json.loads(res.output)
    assert doc["generator_count"] == 6
    assert doc["relator_count"] == 30
    assert doc["abelianization"] == {"free_rank": 2, "torsion": [2]}
    res = run("present", "gn3", "--finite", "--abelian", "--json")
    doc = json.loads(res.output)
    assert doc["abelianization"] == {"free_rank": 2, "torsion": [3]}


def test_spine_json_determinism():
    docs = []
    for _ in range(2):
        doc = json.loads(run("spine", "cleary", "--json").output)
        doc.pop("wall_time_ms")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_eval_hatted_tokens():
    res = run("eval", "cleary", "bh1 bh2", "eq", "a1")
    assert "equal: equal" in res.output


def test_present_cas_format():
    res = run("present", "free1", "--monoid", "--max-index", "3", "--format", "cas")
    assert res.exit_code == 0
    assert "FreeGroup" in res.output


def test_eval():
    res = run("eval", "cleary", "a1 a1", "eq", "b1 b2")
    assert "equal: equal" in res.output
    res = run("eval", "cleary", "b1^-1 b1")
    assert "identity: True" in res.output
    res = run("eval", "free1", "[a(I,I) ; a(I,I)]")
    assert "identity: True" in res.output


def test_qspace_compare_and_act():
    res = run("qspace", "free1", "compare", "a(I,I):1", "a(I,I):2")
    assert "LT" in res.output
    res = run("qspace", "free1", "act",
              "[a(a(I,I),I) ; cyc3 ; a(a(I,I),I)]", "a(a(I,I),I):1")
    assert "a(a(I,I),I):2" in res.output


def test_qspace_transitivity():
    res = run("qspace", "cleary", "transitivity", "--k", "2", "--samples", "3")
    assert res.exit_code == 0
    assert "3 found and verified, 0 unresolved" in res.output


def test_qspace_stabilizer():
    res = run("qspace", "free1", "stabilizer", "a(a(I,I),I)", "--samples", "4")
    assert res.exit_code == 0
    assert "fixers verified: 4/4" in res.output


def test_examples_emit(tmp_path):
    res = run("examples", "emit", "dv2", "--dir", str(tmp_path))
    assert res.exit_code == 0
    body = (tmp_path / "dv2.fsk").read_text()
    assert "rel: a1 b1 b3 = b1 a1 a3" in body
    res = run("examples", "emit", "nope", "--dir", str(tmp_path))
    assert res.exit_code == 2


def test_examples_list():
    res = run("examples", "list")
    for name in ("cleary", "rebel", "notlc", "dv2"):
        assert name in res.output


def test_examples_f_tau(tmp_path):
    res = run("examples", "f-tau", "--colours", "a,b", "--words", "1 1;1 2",
              "--name", "tau-cleary", "--dir", str(tmp_path))
    assert res.exit_code == 0
    assert "F-infinity: proved" in res.output
    body = (tmp_path / "tau-cleary.fsk").read_text()
    assert "rel: a1 a1 = b1 b2" in body
