"""Application layer: oracle dispatch, comparison and scenario orchestration."""

from .scenarios import SCENARIOS, Scenario, Table, get_scenario, run_scenario
from .survival import METHOD_REGIMES, compare_oracles, method_applies, resolve_options, survival_amplitude

__all__ = [
    "METHOD_REGIMES",
    "SCENARIOS",
    "Scenario",
    "Table",
    "compare_oracles",
    "get_scenario",
    "method_applies",
    "resolve_options",
    "run_scenario",
    "survival_amplitude",
]
