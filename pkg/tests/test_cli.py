import glob
import json
import os

import pytest

from cli.main import build_parser, main

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def test_limit_writes_sorted_json(tmp_path, capsys):
    out = tmp_path / "out.json"
    code = main(["limit", os.path.join(CORPUS, "zeuthen_type2.json"), "--json", str(out)])
    assert code == 0
    text = out.read_text(encoding="utf-8")
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["zeuthen"]["entries"][0]["type"] == 2
    assert "tipo de X2: 2" in capsys.readouterr().out


def test_subcommand_overrides_job_command(tmp_path):
    out = tmp_path / "dual.json"
    assert main(["dual-limit", os.path.join(CORPUS, "zeuthen_type2.json"), "--json", str(out)]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["command"] == "dual-limit"


def test_hypothesis_violation_exit_code():
    assert main(["limit", os.path.join(CORPUS, "quasi_bad_multiple.json")]) == 2


def test_engine_flag():
    assert main(["limit", os.path.join(CORPUS, "cubic_double_line.json"), "--engine", "quasi"]) == 0


def test_bad_json_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{ nope", encoding="utf-8")
    assert main(["limit", str(path)]) == 1
    assert "erro de entrada" in capsys.readouterr().out


def test_schema_error(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"family": ["X0"], "system": {}}), encoding="utf-8")
    assert main(["limit", str(path)]) == 1


def test_equiv_check_from_flags(tmp_path):
    out = tmp_path / "eq.json"
    code = main(
        ["equiv-check", "--d1", "0", " -2*X2", " -X0", "--d2", "X0", "X1", "X2", "--curve", "X0*X1 - X2^2",
         "--json", str(out)]
    )
    assert code == 0
    assert json.loads(out.read_text(encoding="utf-8"))["equivalent"] is False


def test_equiv_check_needs_all_flags():
    assert main(["equiv-check", "--d1", "X0", "X1", "X2"]) == 1


def test_corpus_command(tmp_path):
    out = tmp_path / "corpus.json"
    code = main(["corpus", CORPUS, "--json", str(out)])
    rows = json.loads(out.read_text(encoding="utf-8"))["jobs"]
    assert code == 0
    assert all(r["ok"] for r in rows)


def test_parser_lists_commands():
    parser = build_parser()
    for cmd in ("ramification", "limit", "dual-limit", "equiv-check", "corpus"):
        assert parser.parse_args([cmd] + (["x.json"] if cmd not in ("equiv-check", "corpus") else [])).command == cmd


@pytest.mark.parametrize("curve", ["1", "X0-X0"])
def test_ramification_of_empty_curve_writes_report(tmp_path, curve):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"name": "vazia", "command": "ramification", "family": [curve],
                               "system": {"pencil": "random"}}), encoding="utf-8")
    out = tmp_path / "out.json"
    assert main(["ramification", str(job), "--json", str(out)]) == 1
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["exit_code"] == 1
    assert report["error"]["kind"] == "JobInputError"


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(CORPUS, "*.json"))), ids=os.path.basename)
def test_same_job_gives_identical_json(tmp_path, path):
    with open(path, encoding="utf-8") as f:
        command = json.load(f).get("command", "limit")
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    code_a = main([command, path, "--json", str(first)])
    code_b = main([command, path, "--json", str(second)])
    assert code_a == code_b
    assert first.read_bytes() == second.read_bytes()
