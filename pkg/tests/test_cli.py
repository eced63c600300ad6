import json

import pytest

from sfab import cli


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_nlambda_exact_output(capsys):
    code, out, _ = run(capsys, "nlambda", "--type", "C", "--rank", "2", "--q", "2", "--lambda", "1,1")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"N"} and out == json.dumps(rep, sort_keys=True) + "\n"
    code, out, _ = run(capsys, "nlambda", "--type", "A1", "--q", "4", "--lambda", "3")
    assert out == '{"N": "80"}\n'


def test_nlambda_detail(capsys):
    _, out, _ = run(capsys, "nlambda", "--type", "A1", "--q", "4", "--lambda", "3", "--detail")
    rep = json.loads(out)
    assert rep["N"] == "80" and rep["dual_formulas_agree"] is True and rep["lambda"] == [3]


def test_exit_codes(capsys):
    assert run(capsys, "info", "--type", "G", "--rank", "2")[0] == 0
    code, _, err = run(capsys, "nlambda", "--type", "A", "--rank", "2", "--lambda", "1")
    assert code == 2 and json.loads(err)["exit"] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "info", "--type", "BC", "--rank", "1", "--q", "0=3,1=3")[0] == 2
    code, out, err = run(capsys, "plancherel", "--type", "BC", "--rank", "1", "--q", "0=4,1=2",
                         "--mode", "standard", "--max-height", "2", "--grid", "129")
    assert code == 1 and json.loads(out)["failures"] and json.loads(err)["exit"] == 1


def test_plancherel_passes(capsys):
    code, out, _ = run(capsys, "plancherel", "--type", "BC", "--rank", "1", "--q", "0=4,1=2",
                       "--max-height", "2", "--grid", "129")
    assert code == 0


def test_config_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "structure", "--type", "C", "--rank", "2", "--q", "0=2,1=3,2=2",
                       "--lambda", "1,0", "--mu", "0,1", "--dump-config")
    assert code == 0
    d = json.loads(out)
    assert d["system"]["rank"] == "2" and d["task"]["lambda"] == ["1", "0"]
    p = tmp_path / "cfg.json"
    p.write_text(out)
    assert cli.RunConfig.from_dict(d).to_dict() == d
    code, again, _ = run(capsys, "structure", "--config", str(p), "--dump-config")
    assert again == out
    code, a, _ = run(capsys, "structure", "--config", str(p))
    code2, b, _ = run(capsys, "structure", "--config", str(p))
    assert code == code2 == 0 and a == b


def test_unknown_keys_rejected(tmp_path, capsys):
    for bad in ({"task": {"command": "info", "colour": "red"}},
                {"task": {"command": "info"}, "extra": {}},
                {"task": {"command": "info"}, "output": {"format": "xml"}},
                {"task": {"command": "nope"}}):
        with pytest.raises(cli.ConfigError):
            cli.RunConfig.from_dict(bad)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"task": {"command": "info"}, "stray": 1}))
    assert run(capsys, "info", "--config", str(p))[0] == 2


def test_structure_rows(capsys):
    _, out, _ = run(capsys, "structure", "--type", "A1", "--q", "4", "--lambda", "1", "--mu", "1")
    rows = json.loads(out)
    assert {tuple(r["nu"]) for r in rows} == {(0,), (2,)}
    for r in rows:
        assert set(r) >= {"lambda", "mu", "nu", "a", "a_numeric", "a_laurent"}
    a = {r["nu"][0]: r["a"] for r in rows}
    assert a == {0: "1/5", 2: "4/5"}


def test_emit_report_forms(tmp_path):
    assert cli.emit_report([]) == "[]\n"
    assert cli.emit_report({"b": 1, "a": [1, 2]}) == '{"a": [1, 2], "b": 1}\n'
    csv_text = cli.emit_report([{"x": 1, "v": [1, 2]}], "csv")
    assert csv_text.splitlines() == ["v,x", '"[1, 2]",1']
    p = tmp_path / "r.json"
    cli.emit_report({"k": 1}, path=str(p))
    assert json.loads(p.read_text()) == {"k": 1}


def test_tree_and_selftest(capsys):
    code, out, _ = run(capsys, "tree", "--q0", "3", "--q1", "3", "--depth", "8", "--verify", "counts")
    assert code == 0 and json.loads(out)
    code, _, err = run(capsys, "selftest", "--suite", "quick", "--only", "1,4")
    assert code == 0 and "PASS" in err
