from __future__ import annotations

import json

import pytest

import cli
from cli import load_config, main, parse_args
from errors import EXIT_BAD_CONFIG, EXIT_CAP_EXCEEDED, EXIT_INTERNAL, EXIT_OK, EXIT_VERIFICATION_FAILED, ConfigError
from models import CheckResult
from report import analyze_pair


def test_pairs_listing(capsys):
    assert main(["pairs"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "gl-torus(1,1)" in out
    assert "gl-orthogonal" in out


def test_run_writes_json(tmp_path):
    out = tmp_path / "torus.json"
    assert main(["-q", "run", "--pair", "gl-torus(1,1)", "--q", "3", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["schema_version"] == 1
    report = data["reports"][0]
    assert (report["Z_count"], report["Z_sigma_count"]) == (7, 5)
    assert report["mult_one_fraction"] == "3/4"


def test_run_to_stdout(capsys):
    assert main(["-q", "run", "--pair", "gl-orthogonal", "--q", "3"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["reports"][0]["pair_id"] == "gl-orthogonal"


def test_run_csv(tmp_path):
    out = tmp_path / "torus.csv"
    assert main(["-q", "run", "--q", "3", "--format", "csv", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("pair_id,")
    assert len(lines) == 2


@pytest.mark.parametrize("argv,code", [
    (["run", "--q", "3", "--cap-group", "10"], EXIT_CAP_EXCEEDED),
    (["run", "--pair", "sl-torus", "--q", "3"], EXIT_BAD_CONFIG),
    (["run", "--q", "4"], EXIT_BAD_CONFIG),
    (["run", "--q", "6"], EXIT_BAD_CONFIG),
    (["run", "--q", "3", "--workers", "0"], EXIT_BAD_CONFIG),
    (["algebra", "--n", "1"], EXIT_BAD_CONFIG),
])
def test_exit_codes(argv, code):
    assert main(["-q", *argv]) == code


def test_partial_results_are_flushed(tmp_path):
    out = tmp_path / "partial.json"
    code = main(["-q", "run", "--pair", "gl-torus(1,1)", "--pair", "sl-torus", "--q", "3", "--out", str(out)])
    assert code == EXIT_BAD_CONFIG
    data = json.loads(out.read_text(encoding="utf-8"))
    assert [r["pair_id"] for r in data["reports"]] == ["gl-torus(1,1)"]


def test_config_precedence(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"pairs": ["gl-orthogonal"], "q": [5], "cap_cosets": 50}), encoding="utf-8")
    cfg = load_config(parse_args(["run", "--config", str(path), "--q", "3,7"]))
    assert cfg.pairs == ["gl-orthogonal"]
    assert cfg.q == [3, 7]
    assert cfg.cap_cosets == 50
    assert cfg.cap_group == 20_000


def test_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"pairz": ["gl-orthogonal"]}), encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(parse_args(["run", "--config", str(path)]))
    assert main(["-q", "run", "--config", str(path)]) == EXIT_BAD_CONFIG


@pytest.mark.parametrize("bad", [
    {"cap_group": "10"},
    {"q": [3, "5"]},
    {"q": [True]},
    {"pairs": "gl-orthogonal"},
    {"timings": "yes"},
    {"workers": 1.5},
    {"seed": None},
])
def test_config_rejects_wrong_types(tmp_path, bad):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(bad), encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(parse_args(["run", "--config", str(path)]))
    assert main(["-q", "run", "--config", str(path)]) == EXIT_BAD_CONFIG


def test_run_progress_goes_through_logging(tmp_path, capsys):
    out = tmp_path / "torus.json"
    assert main(["run", "--q", "3", "--out", str(out)]) == EXIT_OK
    err = capsys.readouterr().err
    assert "[INFO] pairs: gl-torus(1,1) / q: 3" in err
    assert f"[INFO] 1 report(s) written to {out}" in err

    assert main(["-q", "run", "--q", "3", "--out", str(out)]) == EXIT_OK
    assert "[INFO]" not in capsys.readouterr().err


def test_algebra_verb(tmp_path, capsys):
    out = tmp_path / "algebra.json"
    assert main(["algebra", "--n", "3", "--trials", "4", "--seed", "2", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert len(data["trials"]) == 4
    assert all(t["fixed_dim"] <= 6 for t in data["trials"])
    assert "[DONE]" in capsys.readouterr().out


def test_verify_exit_codes(monkeypatch, tmp_path):
    passing = [CheckResult(1, "torus counts q=3", "|Z|=7", "|Z|=7", True)]
    reports = [analyze_pair("gl-torus(1,1)", 3)]
    monkeypatch.setattr(cli, "run_suite", lambda workers, seed: (passing, reports))
    out = tmp_path / "checks.json"
    assert main(["verify", "--out", str(out), "--seed", "4"]) == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["checks"][0]["passed"] is True
    assert data["seed"] == 4
    assert [(r["pair_id"], r["q"], r["Z_count"]) for r in data["reports"]] == [("gl-torus(1,1)", 3, 7)]

    failing = passing + [CheckResult(3, "torus not Gelfand q=3", "False", "True", False)]
    monkeypatch.setattr(cli, "run_suite", lambda workers, seed: (failing, reports))
    assert main(["verify"]) == EXIT_VERIFICATION_FAILED


def test_unexpected_errors_map_to_internal(monkeypatch):
    def boom():
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "cmd_pairs_list", boom)
    assert main(["pairs"]) == EXIT_INTERNAL


@pytest.mark.slow
def test_verify_suite_passes(tmp_path):
    assert main(["-q", "verify", "--out", str(tmp_path / "checks.json")]) == EXIT_OK
