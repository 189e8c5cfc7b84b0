"""Scenario runner: configs, reports, CLI."""

from .config import ScenarioConfig, SCENARIOS, SCENARIO_SPECS, default_config, load_config, load_config_text
from .report import Report, Verdict, emit_report, table_to_csv, validate_summary, SUMMARY_SCHEMA
from .scenarios import run_scenario

__all__ = [
    "ScenarioConfig",
    "SCENARIOS",
    "SCENARIO_SPECS",
    "default_config",
    "load_config",
    "load_config_text",
    "Report",
    "Verdict",
    "emit_report",
    "table_to_csv",
    "validate_summary",
    "SUMMARY_SCHEMA",
    "run_scenario",
]
