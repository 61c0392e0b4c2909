"""Decay of a two-level system into a Dirac-dispersion bath."""

__version__ = "0.1.0"

from .simulator import (  # noqa: E402
    INFINITE,
    ModelParams,
    Regime,
    TimeGrid,
    classify_regime,
    compare_oracles,
    run_scenario,
    survival_amplitude,
)

__all__ = [
    "INFINITE",
    "ModelParams",
    "Regime",
    "TimeGrid",
    "__version__",
    "classify_regime",
    "compare_oracles",
    "run_scenario",
    "survival_amplitude",
]
