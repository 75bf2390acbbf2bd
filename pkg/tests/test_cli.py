import json

import pytest

from fcorr.cli import main
from fcorr.liepair import bundled_scene_paths

from conftest import fixture_path


def scene_path(name):
    return [p for p in bundled_scene_paths() if p.endswith("/%s.json" % name)][0]


def test_validate_corpus(capsys):
    assert main(["validate"]) == 0
    assert "tilt3" in capsys.readouterr().out


@pytest.mark.parametrize("name,code", [("bad_structure.json", 3), ("bad_det.json", 3),
                                       ("bad_bracket.json", 3), ("malformed.json", 2)])
def test_validate_exit_codes(name, code, capsys):
    assert main(["validate", fixture_path(name)]) == code
    err = capsys.readouterr().err
    assert name in err


def test_validate_names_pair(capsys):
    main(["validate", fixture_path("bad_structure.json")])
    assert "NotIntegrable" in capsys.readouterr().err
    main(["validate", fixture_path("bad_structure.json")])
    assert "[V1, V2]" in capsys.readouterr().err


def test_suite_rejects_invalid_scene():
    assert main(["suite", fixture_path("bad_det.json")]) == 3
    assert main(["suite", fixture_path("malformed.json")]) == 2


def test_only_filter(tmp_path):
    out = tmp_path / "r.json"
    assert main(["suite", scene_path("tilt3"), "--only", "lemonF", "--rand-count", "5",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    names = {c["name"] for b in rep["scenes"] for c in b["checks"]}
    assert names == {"lemonF", "lemonF_random"}


def test_classes_report(tmp_path):
    out = tmp_path / "c.json"
    assert main(["classes", scene_path("tilt3"), "--out", str(out)]) == 0
    cls = json.loads(out.read_text())["scenes"][0]["classes"]
    assert cls["atiyah_pair"] == "(x)*xi[1]⊗zeta[1]⊗zeta[1]⊗Z[1] + (-z)*xi[1]⊗zeta[1]⊗zeta[1]⊗Z[2]"


def test_transfer_report(tmp_path):
    out = tmp_path / "t.json"
    assert main(["transfer", scene_path("contact3"), "--k-max", "4", "--out", str(out)]) == 0
    blk = json.loads(out.read_text())["scenes"][0]
    assert blk["lambda3"]["Z1,Z2,xi1"] == "(1)"
    assert blk["lambda2"]["Z1,x"] == "(1)"


def test_markdown_and_homotopy(tmp_path):
    out = tmp_path / "h.md"
    assert main(["homotopy", scene_path("shear2"), "--format", "markdown", "--out", str(out)]) == 0
    assert "| ds1 |" in out.read_text() or "ds1" in out.read_text()


def test_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["suite", scene_path("contact3"), scene_path("shear2"), "--seed", "7", "--rand-count", "20"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
