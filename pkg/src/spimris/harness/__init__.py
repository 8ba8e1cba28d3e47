"""Scenario harness: configs, built-in figure sweeps, trial runner, CLI."""

from .config import ScenarioConfig, parse_scenario_file
from .runner import run_scenario
from .scenarios import SCENARIOS, get_scenario, list_scenarios
from .summarize import summarize_csv, summarize_rows
from .trial import CSV_HEADER, ResultRow, run_trial
