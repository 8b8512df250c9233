from __future__ import annotations

import json

import pytest

from pingpong.cli import main


@pytest.fixture
def golden_files(tmp_path):
    g = tmp_path / "gammas.json"
    g.write_text(json.dumps([[[1, 0], [0, 1]], [[1, 1], [1, 2]]]))
    return tmp_path, g


def test_certify_verify_recheck(golden_files, capsys):
    d, g = golden_files
    out = d / "cert.json"
    assert main(["certify", "--group", "SL2", "--gammas", str(g), "--exponents=-1,1",
                 "--max-len", "4", "--out", str(out)]) == 0
    cert = json.loads(out.read_text())
    assert cert["z"] == ["1", "3"]
    assert cert["verification"]["words"] == 160
    assert main(["recheck", str(out)]) == 0
    assert main(["verify", str(out), "--max-len", "5"]) == 0
    summary = json.loads(capsys.readouterr().out.split("recheck: ok\n")[-1])
    assert summary["words"] == 484 and summary["all_succeeded"]
    cert["pairings"][0]["value"] = "9"
    out.write_text(json.dumps(cert))
    assert main(["recheck", str(out)]) == 3
    assert main(["verify", str(out)]) == 3


def test_certify_violation_exit_code(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps([[[1, 0], [0, 1]], [[2, 0], [0, "1/2"]]]))
    assert main(["certify", "--group", "SL2", "--gammas", str(g), "--out", str(tmp_path / "o.json")]) == 2
    assert "violation" in json.loads((tmp_path / "o.json").read_text())


def test_input_errors(tmp_path, capsys):
    assert main(["certify", "--group", "SL2", "--gammas", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["certify", "--group", "SL2", "--gammas", str(bad)]) == 1
    assert main(["certify", "--group", "SP4", "--gammas", "torus:2"]) == 1
    assert main(["certify", "--group", "SL2", "--gammas", "torus:2", "--exponents=1,-1"]) == 1
    assert main(["nonsense"]) == 1
    assert main(["word", "--group", "SL2", "--word", "x1 ("]) == 1
    assert "position 4" in capsys.readouterr().err


def test_search_h_so5(tmp_path):
    out = tmp_path / "so5.json"
    assert main(["search-h", "--group", "SO5", "--gammas", "torus:3", "--max-len", "3",
                 "--out", str(out)]) == 0
    assert main(["recheck", str(out)]) == 0


def test_word_command(tmp_path, capsys):
    consts = tmp_path / "c.json"
    consts.write_text(json.dumps({"g": [[1, 1], [0, 1]]}))
    assign = tmp_path / "a.json"
    assign.write_text(json.dumps({"x1": [[2, 1], [1, 1]]}))
    assert main(["word", "--group", "SL2", "--word", "x1 g x1^-1", "--constants", str(consts),
                 "--assign", str(assign)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["reduced"] == "x1 g x1^-1"
    assert out["normalized"] == "g^-1 x1 g x1^-1"
    assert [b["sign"] for b in out["basic_words"]] == ["+", "-"]
    assert "evaluation" in out


def test_rank_command(capsys):
    assert main(["rank", "--group", "SL2"]) == 0
    assert json.loads(capsys.readouterr().out)["achieved_rank"] == 4
    assert main(["rank", "--group", "SL3", "--samples", "2"]) == 2
