import json
import subprocess
import sys
from pathlib import Path

import pytest

from subnodal.runner import (
    Report,
    SCENARIOS,
    default_config,
    emit_report,
    load_config_text,
    run_scenario,
    table_to_csv,
    validate_summary,
)


def test_default_grushin_scaling_config():
    cfg = default_config("grushin-scaling")
    assert cfg["alpha_list"] == [1]
    assert cfg["k_list"][0] == 8 and cfg["k_list"][-1] == 64
    assert cfg["n"] == 2048
    assert cfg.params["seed"] == 0


def test_unknown_key_rejected_with_line():
    text = "scenario = grushin-scaling\nalpha_max = 3\n"
    with pytest.raises(ValueError, match="line 2.*alpha_max"):
        load_config_text(text)


def test_unknown_scenario_rejected():
    with pytest.raises(ValueError, match="unknown scenario"):
        default_config("eigen-party")


def test_range_and_list_values():
    cfg = load_config_text("scenario = grushin-scaling\nk_list = 8..12\n")
    assert cfg["k_list"] == [8, 9, 10, 11, 12]
    cfg2 = load_config_text("scenario = ballbox\neps_list = 0.1,0.2\n")
    assert cfg2["eps_list"] == [0.1, 0.2]


def test_config_roundtrip_through_echo():
    cfg = default_config("heisenberg-yau")
    cfg.params["m_list"] = [1, 2]
    text = cfg.to_text()
    cfg2 = load_config_text(text)
    assert cfg2.params == cfg.params
    assert cfg2.scenario == cfg.scenario


def test_scenario_mismatch_rejected():
    with pytest.raises(ValueError, match="declares scenario"):
        load_config_text("scenario = ballbox\n", scenario="density")


def test_grid_budget_guard():
    with pytest.raises(ValueError, match="desk-scale budget"):
        load_config_text("scenario = boxcount\ngrid = 400,400,400\n")


def test_report_emit_and_schema(tmp_path):
    cfg = default_config("flag-report")
    report = run_scenario(cfg)
    files = emit_report(report, tmp_path)
    names = {f.name for f in files}
    assert "flag-report_summary.json" in names
    assert "flag-report_records.csv" in names
    doc = json.loads((tmp_path / "flag-report_summary.json").read_text())
    validate_summary(doc)
    assert doc["schema_version"] == 1
    # shipped schema file matches the built-in one
    shipped = json.loads(
        (Path(__file__).parent.parent / "src/subnodal/runner/schema/report_v1.json").read_text()
    )
    validate_summary(doc, shipped)


def test_schema_rejects_bad_documents():
    with pytest.raises(ValueError, match="missing required"):
        validate_summary({"schema_version": 1})
    with pytest.raises(ValueError, match="expected integer"):
        validate_summary(
            {
                "schema_version": "x",
                "scenario": "s",
                "config": "",
                "verdicts": [],
                "timings_seconds": {},
                "tables": [],
            }
        )


def test_rerun_same_seed_byte_identical(tmp_path):
    csvs = []
    for run in ("a", "b"):
        cfg = load_config_text("scenario = grushin-scaling\nk_list = 8,16\nn = 256\n")
        report = run_scenario(cfg)
        out = tmp_path / run
        emit_report(report, out)
        csvs.append((out / "grushin-scaling_records.csv").read_bytes())
    assert csvs[0] == csvs[1]


def test_table_to_csv_layout():
    rows = [{"a": 1, "b": 2.5, "c": True}, {"a": 2, "b": 1.0, "c": False}]
    text = table_to_csv(rows)
    assert text.splitlines()[0] == "a,b,c"
    assert text.splitlines()[1] == "1,2.5,true"


def test_all_scenarios_registered():
    for name in SCENARIOS:
        cfg = default_config(name)
        assert cfg.scenario == name


@pytest.mark.slow
def test_cli_exit_codes(tmp_path):
    env_script = [sys.executable, "-m", "subnodal.runner.cli"]
    ok = subprocess.run(
        env_script + ["flag-report", "--out", str(tmp_path / "ok")],
        capture_output=True,
        text=True,
    )
    assert ok.returncode == 0
    assert "PASS" in ok.stdout

    bad = subprocess.run(
        env_script + ["density", "--config", str(tmp_path / "missing.cfg")],
        capture_output=True,
        text=True,
    )
    assert bad.returncode == 1


def test_echoed_config_reruns_identically():
    cfg = load_config_text("scenario = grushin-scaling\nk_list = 8,16\nn = 256\n")
    r1 = run_scenario(cfg)
    cfg2 = load_config_text(r1.config_echo)
    r2 = run_scenario(cfg2)
    assert [v.passed for v in r1.verdicts] == [v.passed for v in r2.verdicts]
    assert r1.tables["records"] == r2.tables["records"]
