"""CLI (python -m src.main) 종단 테스트: 종료 코드, 산출물, 재현성."""

import json
import math
from pathlib import Path

import pytest

from src.common.output import read_csv
from src.main import main

RUNS_DIR = Path(__file__).resolve().parents[2] / "config" / "runs"
LOG2 = math.log(2.0)


def _report(out: Path, subcommand: str) -> dict:
    return json.loads((out / f"{subcommand}.json").read_text(encoding="utf-8"))


def test_lyapunov_tent(tmp_path):
    code = main([
        "lyapunov", "--n", "1000", "--seed", "1", "--out", str(tmp_path),
        "--set", "x0=0.3141", "--set", "burn_in=0",
    ])
    assert code == 0
    report = _report(tmp_path, "lyapunov")
    assert report["chi"] == pytest.approx(LOG2, rel=1e-12)
    assert report["subcommand"] == "lyapunov"
    frame = read_csv(tmp_path / "lyapunov.csv")
    assert list(frame.columns) == ["step", "running_chi"]


def test_classify_divergent_row(tmp_path):
    code = main([
        "classify", "--family", "g_alpha", "--alpha", "1.5", "--weight", "exact", "--out", str(tmp_path),
    ])
    assert code == 0
    frame = read_csv(tmp_path / "classify.csv")
    assert frame.loc[0, "verdict"] == "divergent"
    assert frame.loc[0, "weight"] == "exact"


def test_series_divergent(tmp_path):
    assert main(["series", "--alpha", "0.4", "--out", str(tmp_path)]) == 0
    report = _report(tmp_path, "series")
    assert report["verdict"] == "divergent"
    assert report["ratio"] == pytest.approx(1.25)
    assert report["lower_limit"] == "inf"


def test_csv_header_carries_config_hash(tmp_path):
    assert main(["series", "--alpha", "0.7", "--out", str(tmp_path)]) == 0
    first = (tmp_path / "series.csv").read_text(encoding="utf-8").splitlines()[0]
    assert first == f"# config_hash={_report(tmp_path, 'series')['config_hash']}"


def test_reruns_are_byte_identical(tmp_path):
    args = ["density", "--family", "g_alpha", "--alpha", "0.5", "--n", "20000", "--bins", "20", "--seed", "9"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("density.csv", "density.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_config_error_exit_code(tmp_path, capsys):
    code = main(["classify", "--family", "g_alpha", "--out", str(tmp_path)])
    assert code == 2
    lines = capsys.readouterr().err.strip().splitlines()
    assert len(lines) == 1
    payload = json.loads(lines[0])
    assert payload["error"] == "ConfigError"
    assert payload["exit_code"] == 2
    assert not (tmp_path / "classify.csv").exists()


def test_numerical_error_exit_code(tmp_path, capsys):
    code = main(["lyapunov", "--n", "100", "--out", str(tmp_path), "--set", "x0=0.5"])
    assert code == 3
    payload = json.loads(capsys.readouterr().err.strip())
    assert payload["error"] == "OrbitBreakError"
    assert payload["index"] == 0


def test_precondition_error_exit_code(tmp_path, capsys):
    code = main(["induce", "--out", str(tmp_path), "--set", "u_lo=0.3", "--set", "u_hi=0.7"])
    assert code == 4
    assert json.loads(capsys.readouterr().err.strip())["error"] == "NotRegularlyReturningError"


def test_yaml_config(tmp_path):
    code = main(["classify", "--config", str(RUNS_DIR / "classify_g_alpha.yaml"), "--out", str(tmp_path)])
    assert code == 0
    assert _report(tmp_path, "classify")["verdict"] == "convergent"


def test_flag_overrides_yaml(tmp_path):
    code = main([
        "classify", "--config", str(RUNS_DIR / "classify_g_alpha.yaml"), "--alpha", "1.5", "--out", str(tmp_path),
    ])
    assert code == 0
    report = _report(tmp_path, "classify")
    assert report["config"]["alpha"] == 1.5
    assert report["verdict"] == "divergent"


def test_sweep_continues_after_failures(tmp_path):
    code = main([
        "sweep", "--family", "g_alpha", "--out", str(tmp_path),
        "--set", "task=series", "--set", "alphas=[0.9, 0.4, 1.5]",
    ])
    assert code == 0
    frame = read_csv(tmp_path / "sweep.csv")
    assert list(frame["alpha"]) == [0.4, 0.9, 1.5]
    assert list(frame["status"]) == ["ok", "ok", "failed"]
    assert frame.loc[0, "verdict"] == "divergent"
    assert frame.loc[1, "verdict"] == "convergent"
    assert frame.loc[2, "error"] == "ConfigError"
    assert _report(tmp_path, "sweep")["failed"] == 1


def test_unknown_subcommand_rejected_by_parser():
    with pytest.raises(SystemExit):
        main(["plot"])
