"""Compatibility facade for the simulator package.

Keeps the public operations importable from one module while the layered
modules stay the place to read and change them.
"""

from .adapters.cli import main
from .adapters.config import load_config_file, params_from_config
from .adapters.csv_output import write_csv
from .application.scenarios import SCENARIOS, Scenario, run_scenario
from .application.survival import compare_oracles, resolve_options, survival_amplitude
from .domain.branch_cut import asymptotic_phi, branchcut_phi
from .domain.kernel import KernelForm, KernelSpec, kernel_double_integral, kernel_eval
from .domain.markovianity import gksl_reference_survival, semigroup_deviation, zeno_protocol
from .domain.model import (
    INFINITE,
    ComplexSeries,
    ModelParams,
    Regime,
    TimeGrid,
    classify_regime,
    to_dimensionless,
)
from .domain.poles import (
    crossover_map,
    cutoff_poles,
    pole_contribution_cut,
    quartic_roots,
    residue_phi_z0,
    spectral_phi,
)
from .domain.resolvent import PRINCIPAL, ResolventFn, bromwich_invert, resolvent_eval
from .domain.short_time import survival_series, zeno_time
from .domain.ssh import SshChain, build_hamiltonian, fit_power_law, survival_vs_depth
from .domain.volterra import VolterraConfig, propagate_discretized, solve_volterra
from .domain.wavefunction import psi_bound, psi_massless, psi_numeric

__all__ = [
    "INFINITE",
    "PRINCIPAL",
    "SCENARIOS",
    "ComplexSeries",
    "KernelForm",
    "KernelSpec",
    "ModelParams",
    "Regime",
    "ResolventFn",
    "Scenario",
    "SshChain",
    "TimeGrid",
    "VolterraConfig",
    "asymptotic_phi",
    "branchcut_phi",
    "bromwich_invert",
    "build_hamiltonian",
    "classify_regime",
    "compare_oracles",
    "crossover_map",
    "cutoff_poles",
    "fit_power_law",
    "gksl_reference_survival",
    "kernel_double_integral",
    "kernel_eval",
    "load_config_file",
    "main",
    "params_from_config",
    "pole_contribution_cut",
    "propagate_discretized",
    "psi_bound",
    "psi_massless",
    "psi_numeric",
    "quartic_roots",
    "residue_phi_z0",
    "resolve_options",
    "resolvent_eval",
    "run_scenario",
    "semigroup_deviation",
    "solve_volterra",
    "spectral_phi",
    "survival_amplitude",
    "survival_series",
    "survival_vs_depth",
    "to_dimensionless",
    "write_csv",
    "zeno_protocol",
    "zeno_time",
]
