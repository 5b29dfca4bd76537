import json
from pathlib import Path

import pytest

from epiworks.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
MODELS = SAMPLES / "models"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_check(capsys):
    code, out = run(capsys, "check", str(MODELS / "P.tbl"), "x y = x x y")
    assert (code, out.strip()) == (0, "holds")
    code, out = run(capsys, "check", str(MODELS / "P.tbl"), "x1 x2 = (x1 x2)''")
    assert code == 1
    assert out.splitlines() == ["fails", "witness: x1=e x2=a", "lhs=a rhs=0"]


def test_check_system_file(capsys):
    code, out = run(capsys, "check", str(MODELS / "C.tbl"), str(SAMPLES / "comm.eqs"))
    assert (code, out.strip()) == (0, "holds")


def test_pinv(capsys):
    code, out = run(capsys, "pinv", str(MODELS / "C.tbl"))
    assert code == 0
    assert "a: omega=0 pinv=0 index=2 period=1" in out.splitlines()


def test_pinv_reports_T_mismatch(capsys):
    _, out = run(capsys, "pinv", str(MODELS / "T.tbl"))
    assert out.splitlines()[-1] == "declared unary differs from pseudoinversion at: e"


def test_profile(capsys):
    _, out = run(capsys, "profile", str(MODELS / "P.tbl"))
    assert "group elements: e 0" in out
    assert "Gr S right ideal: no (witness e a)" in out


def test_degree(capsys):
    code, out = run(capsys, "degree", str(MODELS / "P.tbl"), "--max", "3")
    assert (code, out.strip()) == (0, "n=2 i=1 j=1")
    code, out = run(capsys, "degree", str(MODELS / "F3_2.tbl"), "--max", "2")
    assert (code, out.strip()) == (1, "none")


def test_normalize(capsys):
    code, out = run(capsys, "normalize", "x''")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x^2 x'^1"
    assert lines[-1] == "x''  --[bar-lt]-->  x x x'"
    code, _ = run(capsys, "normalize", "x y")
    assert code == 2


def test_factor(capsys):
    _, out = run(capsys, "factor", "x (y z)'")
    assert out.splitlines()[:2] == ["u* = x (y z y z)' y", "z = z"]


def test_classify(capsys):
    _, out = run(capsys, "classify", "x = x x")
    assert "variety: yes; equals varE: no" in out.splitlines()


def test_transform(capsys):
    _, out = run(capsys, "transform", str(SAMPLES / "comm.eqs"), "-m", "0", "-n", "1")
    assert out.strip() == "x y z1 = y x z1"


def test_deduce(capsys):
    code, out = run(capsys, "deduce", str(SAMPLES / "idem4.prf"))
    assert code == 0 and out.splitlines()[0] == "valid"
    code, out = run(capsys, "deduce", str(SAMPLES / "idem4-broken.prf"))
    assert code == 1 and out.startswith("invalid at step 2: no rule matches")
    code, out = run(capsys, "deduce", str(SAMPLES / "basis.prf"), "--check-models", str(MODELS))
    assert code == 0
    assert out.splitlines()[-1] == "conclusion holds in all 7 models"


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "missing.tbl"), "x = x")[0] == 2
    bad = tmp_path / "bad.tbl"
    bad.write_text("2\na b\nb a\na a\n")
    code, out = run(capsys, "pinv", str(bad))
    assert code == 2 and out.startswith("error:")
    assert run(capsys, "normalize", "x (")[0] == 2


def test_resource_guard(capsys):
    code, _ = run(capsys, "check", str(MODELS / "N3.tbl"), "x y z w = w z y x", "--bound", "10")
    assert code == 3


def test_json_twin(capsys):
    code, out = run(capsys, "check", str(MODELS / "P.tbl"), "x1 x2 = (x1 x2)''", "--json")
    r = json.loads(out)
    assert code == 1 and r["schema"] == 1 and r["holds"] is False
    assert r["failure"]["witness"] == {"x1": "e", "x2": "a"}
    _, out = run(capsys, "normalize", "x''", "--json")
    r = json.loads(out)
    assert (r["p"], r["q"]) == (2, 1)
    assert r["trace"] == [{"before": "x''", "rule": "bar-lt", "after": "x x x'"}]


def test_json_round_trips_to_text(capsys):
    from epiworks.cli import render_text
    for argv in (["pinv", str(MODELS / "C.tbl")], ["classify", "x y = y x"],
                 ["deduce", str(SAMPLES / "idem4.prf")]):
        _, text = run(capsys, *argv)
        _, js = run(capsys, *argv, "--json")
        assert render_text(json.loads(js)) == text.rstrip("\n")


def test_catalog_writes(capsys, tmp_path):
    code, _ = run(capsys, "catalog", "P", "cyclic(2,3)", "--write-dir", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["P.tbl", "cyclic2_3.tbl"]
    assert (tmp_path / "P.tbl").read_text() == (MODELS / "P.tbl").read_text()
    code, out = run(capsys, "catalog", "--enumerate", "2", "--iso", "--json")
    assert len(json.loads(out)["tables"]) == 5
    assert run(capsys, "catalog", "nope")[0] == 2


@pytest.mark.parametrize("argv", [["frobnicate"], []])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
