import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pandas as pd
import pytest

import gaussian_maps.utils.quadrics
from gaussian_maps.cli import main
from gaussian_maps.scripts.sweep import CSV_COLUMNS
from gaussian_maps.utils.report import load_schema

GOLDEN = Path(__file__).parent / "golden"
SRC = Path(__file__).parents[1] / "src"


def run_json(capsys, *argv) -> dict:
    main([*argv, "--json"])
    return json.loads(capsys.readouterr().out)


def run_failing(capsys, code: int, *argv) -> dict:
    with pytest.raises(SystemExit) as excinfo:
        main([*argv, "--json"])
    assert excinfo.value.code == code
    return json.loads(capsys.readouterr().out)


def run_subprocess(tmp_path, *argv) -> subprocess.CompletedProcess:
    """Run the CLI in a fresh interpreter with `tmp_path` as the working directory."""
    env = {**os.environ, "PYTHONPATH": os.pathsep.join(filter(None, [str(SRC), os.environ.get("PYTHONPATH")]))}
    return subprocess.run([sys.executable, "-m", "gaussian_maps.cli", *argv], cwd=tmp_path, env=env, capture_output=True, text=True, check=False)


def test_analyze_hyperelliptic(capsys):
    report = run_json(capsys, "analyze", "--n", "2", "--f", "x^8 - 1", "--label", "g=3")
    jsonschema.validate(report, load_schema("rank_report.v1.json"))

    assert report["curve"] == {"n": 2, "f": "x^8 - 1", "label": "g=3", "genus": 3, "m": 8, "d": 2}
    assert report["hyperelliptic"] is True
    assert (report["dim_i2"], report["dim_i2_expected"], report["rank_mu2"]) == (1, 1, 1)
    assert (report["rank_mu1K"], report["corank_mu1K"], report["rank_mu1L"]) == (3, 7, 1)
    assert (report["psi_rank"], report["factorization_checks"], report["factorization_checks_passed"]) == (1, 1, 1)
    assert report["base_locus"]["is_free"] is False
    assert "timings" not in report


def test_analyze_json_is_reproducible(capsys):
    first = run_json(capsys, "analyze", "--n", "3", "--f", "x^6 - 1")
    second = run_json(capsys, "analyze", "--n", "3", "--f", "x^6 - 1")
    assert first == second
    assert first["dim_i2"] == 1


def test_analyze_timings(capsys):
    report = run_json(capsys, "analyze", "--n", "2", "--f", "x^7 + 1", "--timings")
    jsonschema.validate(report, load_schema("rank_report.v1.json"))
    assert set(report["timings"]) == {"canonical_basis", "mu2", "mu1", "psi", "base_locus"}


def test_analyze_help_mentions_timings(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["analyze", "--help"])
    assert excinfo.value.code == 0
    out = " ".join(capsys.readouterr().out.split())
    assert "--timings" in out
    assert "Reports omit it by default" in out


def test_analyze_config(capsys, tmp_path):
    path = tmp_path / "curves.json"
    path.write_text(json.dumps({"curves": [{"n": 2, "f": "x^8 - 1"}, {"n": 3, "f": "x^6 - 1", "label": "g=4"}]}), encoding="utf-8")

    result = run_json(capsys, "analyze", "--config", str(path), "--n-jobs", "1")
    schema = load_schema("rank_report.v1.json")
    for report in result["reports"]:
        jsonschema.validate(report, schema)
    assert [r["curve"]["genus"] for r in result["reports"]] == [3, 4]


def test_analyze_general_model(capsys):
    report = run_json(capsys, "analyze", "--general", "--equation", "y^4 - x^5 + 1", "--basis", "1", "x", "y", "x^2", "x*y", "y^2")
    assert report["genus"] == 6
    assert report["dim_i2"] == 6
    assert report["rank_mu2"] == 6
    assert "holomorphy" in report["caveat"]


def test_syntax_error_diagnostic(capsys):
    diagnostic = run_failing(capsys, 2, "analyze", "--n", "2", "--f", "x^8 -")
    assert diagnostic["error"]["type"] == "PolySyntaxError"
    assert diagnostic["error"]["offset"] == 5


def test_ramified_fiber_diagnostic(capsys):
    diagnostic = run_failing(capsys, 2, "analyze", "--n", "2", "--f", "x^8 - x")
    assert diagnostic["error"]["type"] == "FiberRamifiedError"
    assert diagnostic["error"]["shift"] == 2


def test_error_in_text_mode(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["analyze", "--n", "6", "--f", "x^4 - 1"])
    assert excinfo.value.code == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith("error: ")


def test_missing_arguments(capsys):
    diagnostic = run_failing(capsys, 2, "analyze")
    assert diagnostic["error"]["type"] == "GaussianMapsError"


def test_numerology(capsys):
    result = run_json(capsys, "numerology", "--g", "18", "--product", "2,1,9,7")
    assert result["surjectivity_threshold"] == 18
    assert result["genus"] == {
        "g": 18,
        "k": 4,
        "h0_kK": 119,
        "dim_i2_expected": 120,
        "dim_i2_expected_hyperelliptic": 136,
        "surj_possible": True,
    }
    assert result["product"] == {"g1": 2, "g2": 1, "d1": 9, "d2": 7, "genus": 71, "hypotheses": True}


def test_numerology_bel_criterion(capsys):
    result = run_json(capsys, "numerology", "--g", "3", "--l", "15")
    assert result["genus"]["bel_criterion"] is True


@pytest.mark.parametrize("argv", [["--l", "5"], ["--product", "1,2,3"], ["--product", "a,b,c,d"]])
def test_numerology_errors(capsys, argv):
    run_failing(capsys, 2, "numerology", *argv)


def test_baselocus_canonical(capsys):
    result = run_json(capsys, "baselocus", "--n", "2", "--f", "x^7 + 1", "--source", "canonical")
    assert result["source"] == "canonical"
    assert result["is_free"] is True
    assert result["ram"] == [{"place": "x^7 + 1", "min_order": 0}]
    assert result["infinity"] == [{"place": "inf", "min_order": 0}]
    assert result["affine_unram"] == []


def test_baselocus_moduli(capsys):
    result = run_json(capsys, "baselocus", "--n", "2", "--f", "x^8 - 1", "--moduli", "x - 1", "x + 1", "x^2 + 1", "x^4 + 1")
    assert not result["is_free"]
    assert {p["place"] for p in result["ram"]} == {"x - 1", "x + 1", "x^2 + 1", "x^4 + 1"}
    assert all(p["min_order"] >= 1 for p in result["ram"])


def test_baselocus_bad_modulus(capsys):
    diagnostic = run_failing(capsys, 2, "baselocus", "--n", "2", "--f", "x^8 - 1", "--moduli", "x - 2")
    assert diagnostic["error"]["type"] == "PlaceClassError"


def test_sweep_with_csv(capsys, tmp_path):
    path = tmp_path / "ranks.csv"
    result = run_json(capsys, "sweep", "--family", "hyperelliptic", "--lo", "3", "--hi", "4", "--csv", str(path))
    assert [r["rank_mu2"] for r in result["reports"]] == [1, 3]

    df = pd.read_csv(path)
    assert list(df.columns) == CSV_COLUMNS
    assert df["curve.genus"].tolist() == [3, 4]


def test_sweep_empty_family(capsys):
    run_failing(capsys, 2, "sweep", "--family", "cyclic", "--n", "2", "--lo", "3", "--hi", "5")


def test_verify_supplementary_rows_match_golden(capsys):
    main(["verify", "--rows", "S1,S3,S4", "--json"])
    out = capsys.readouterr().out
    assert out == (GOLDEN / "verify_report_supplementary.json").read_text(encoding="utf-8")
    jsonschema.validate(json.loads(out), load_schema("verify_report.v1.json"))


def test_verify_detects_broken_closed_form(capsys, monkeypatch):
    original = gaussian_maps.utils.quadrics.ff_from_poly
    monkeypatch.setattr(gaussian_maps.utils.quadrics, "ff_from_poly", lambda curve, p, den=None: original(curve, p.scale(2), den))

    report = run_failing(capsys, 1, "verify", "--rows", "S1")
    assert report["ok"] is False
    assert report["rows"][0]["passed"] is False


def test_verify_unknown_row(capsys):
    diagnostic = run_failing(capsys, 2, "verify", "--rows", "11")
    assert "unknown rows" in diagnostic["error"]["message"]


def test_verify_csv(capsys, tmp_path):
    path = tmp_path / "rows.csv"
    main(["verify", "--rows", "9,S4", "--csv", str(path)])
    capsys.readouterr()
    df = pd.read_csv(path)
    assert df["row"].astype(str).tolist() == ["9", "S4"]
    assert df["passed"].tolist() == [True, True]


def test_analyze_missing_config(capsys, tmp_path):
    path = tmp_path / "missing.json"
    diagnostic = run_failing(capsys, 2, "analyze", "--config", str(path))
    assert diagnostic["error"]["type"] == "ConfigFileError"
    assert diagnostic["error"]["path"] == str(path)


def test_parallel_analyze_keeps_stdout_clean(tmp_path):
    path = tmp_path / "curves.json"
    path.write_text(json.dumps({"curves": [{"n": 2, "f": "x^8 - 1"}, {"n": 3, "f": "x^6 - 1"}]}), encoding="utf-8")

    proc = run_subprocess(tmp_path, "analyze", "--config", str(path), "--n-jobs", "2", "--json")
    assert proc.returncode == 0, proc.stderr

    result = json.loads(proc.stdout)
    assert [r["curve"]["genus"] for r in result["reports"]] == [3, 4]


@pytest.mark.slow
def test_verify_all_rows_match_golden(tmp_path):
    proc = run_subprocess(tmp_path, "verify", "--n-jobs", "2", "--json")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout == (GOLDEN / "verify_report.json").read_text(encoding="utf-8")
    jsonschema.validate(json.loads(proc.stdout), load_schema("verify_report.v1.json"))
