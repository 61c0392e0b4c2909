"""Domain layer: model definitions and the numerical routes to Phi(t)."""

from .branch_cut import JumpFn, asymptotic_phi, branchcut_phi, jump_function
from .kernel import KernelForm, KernelSpec, kernel_double_integral, kernel_eval, kernel_grid
from .markovianity import (
    GkslRates,
    SemigroupReport,
    gksl_reference_survival,
    semigroup_deviation,
    zeno_protocol,
)
from .model import (
    INFINITE,
    ComplexSeries,
    ModelParams,
    Picture,
    Regime,
    Scaling,
    TimeGrid,
    classify_regime,
    markovian_phi,
    to_dimensionless,
    to_physical,
)
from .poles import (
    Pole,
    PoleLabel,
    PoleSet,
    crossover_map,
    cutoff_poles,
    find_poles,
    pole_contribution_cut,
    quartic_roots,
    residue_phi_z0,
    spectral_phi,
)
from .resolvent import PRINCIPAL, ResolventFn, SheetId, bromwich_invert, resolvent_eval
from .short_time import ShortTimeSeries, survival_series, zeno_time
from .ssh import SshChain, build_hamiltonian, fit_power_law, survival_vs_depth
from .volterra import DiscretizedField, Scheme, VolterraConfig, propagate_discretized, solve_volterra
from .wavefunction import WaveField, psi_bound, psi_massless, psi_numeric

__all__ = [
    "INFINITE",
    "PRINCIPAL",
    "ComplexSeries",
    "DiscretizedField",
    "GkslRates",
    "JumpFn",
    "KernelForm",
    "KernelSpec",
    "ModelParams",
    "Picture",
    "Pole",
    "PoleLabel",
    "PoleSet",
    "Regime",
    "ResolventFn",
    "Scaling",
    "Scheme",
    "SemigroupReport",
    "SheetId",
    "ShortTimeSeries",
    "SshChain",
    "TimeGrid",
    "VolterraConfig",
    "WaveField",
    "asymptotic_phi",
    "branchcut_phi",
    "bromwich_invert",
    "build_hamiltonian",
    "classify_regime",
    "crossover_map",
    "cutoff_poles",
    "find_poles",
    "fit_power_law",
    "gksl_reference_survival",
    "jump_function",
    "kernel_double_integral",
    "kernel_eval",
    "kernel_grid",
    "markovian_phi",
    "pole_contribution_cut",
    "propagate_discretized",
    "psi_bound",
    "psi_massless",
    "psi_numeric",
    "quartic_roots",
    "residue_phi_z0",
    "resolvent_eval",
    "semigroup_deviation",
    "solve_volterra",
    "spectral_phi",
    "survival_series",
    "survival_vs_depth",
    "to_dimensionless",
    "to_physical",
    "zeno_protocol",
    "zeno_time",
]
