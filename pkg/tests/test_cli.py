import json

from uqcag.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_smallest(capsys):
    code, out, _ = _run(capsys, "verify", "--n", "0", "--m", "1", "--suite", "theorem_fwd")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema_version"] == 1
    assert rep["status"] == "ProvedZero"
    assert rep["summary"]["total"] == rep["summary"]["ProvedZero"] == 9


def test_injected_contradiction(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 1, "m": 1, "suites": ["theorem_fwd"], "inject_relations": ["e_1 f_1 - f_1 e_1"]}))
    code, out, _ = _run(capsys, "verify", "--config", str(cfg))
    assert code == 1
    assert json.loads(out)["status"] == "Failed"


def test_cartan_only(capsys):
    code, out, _ = _run(capsys, "verify", "--n", "2", "--m", "5", "--no-deformed", "--suite", "cartan_only")
    assert code == 0
    A = json.loads(out)["suites"][0]["info"]["cartan_matrix"]
    assert len(A) == 7 and A[2] == [0, -1, 0, 1, 0, 0, 0]


def test_fock_report(capsys):
    code, out, _ = _run(capsys, "fock", "--n", "1", "--m", "1", "--order-p", "1", "--cutoff", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["module"]["basis"] == [[0, 0], [1, 0], [0, 1]]
    assert all(c["status"] == "ProvedZero" for c in rep["checks"])


def test_fock_zero_energy(capsys):
    code, out, _ = _run(capsys, "fock", "--n", "1", "--m", "1", "--epsilons", "0,0")
    assert code == 0


def test_fock_constraint(capsys):
    code, _, err = _run(capsys, "fock", "--n", "1", "--m", "1", "--epsilons", "1,2")
    assert code == 65
    assert "[48]" in err


def test_usage_errors(tmp_path, capsys):
    assert _run(capsys, "verify", "--n", "-1")[0] == 64
    assert _run(capsys, "verify", "--no-deformed", "--suite", "prop2")[0] == 64
    assert _run(capsys, "verify", "--suite", "bogus")[0] == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(capsys, "verify", "--config", str(bad))[0] == 64
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"colour": "red"}))
    assert _run(capsys, "verify", "--config", str(extra))[0] == 64
    inj = tmp_path / "inj.json"
    inj.write_text(json.dumps({"inject_relations": ["e_1 +* f_1"]}))
    assert _run(capsys, "verify", "--config", str(inj))[0] == 64


def test_atomic_out_and_determinism(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert _run(capsys, "verify", "--n", "1", "--m", "1", "--no-timing", "--out", str(p))[0] == 0
    a, b = (json.loads(p.read_text()) for p in paths)
    a["config"].pop("out"), b["config"].pop("out")
    assert a == b
    assert sorted(x.name for x in tmp_path.iterdir()) == ["a.json", "b.json"]
    assert "wall_time" not in paths[0].read_text()


def test_text_format(capsys):
    code, out, _ = _run(capsys, "verify", "--n", "0", "--m", "1", "--suite", "eq51", "--format", "text")
    assert code == 0
    assert out.splitlines()[-1] == "status: ProvedZero"


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 3, "m": 0, "suites": ["eq51"]}))
    code, out, _ = _run(capsys, "verify", "--config", str(cfg), "--n", "0", "--m", "1")
    assert code == 0
    assert json.loads(out)["config"]["n"] == 0
