"""Deterministic reproduction scenarios, one per published result set.

Mental model refresher:
- A `Scenario` pins a deterministic parameter set and the methods it uses.
- Its builder returns `Table`s; `run_scenario` hands each table to the
  injected writer, so this layer never touches the filesystem itself.
- Failures become a result dictionary with an exit code instead of an
  exception, the same shape the CLI prints as `[RESULT] ...`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .. import __version__
from ..domain.branch_cut import BRANCH_CUT_TOLERANCE, asymptotic_phi, branchcut_phi
from ..domain.markovianity import window_slopes, zeno_protocol
from ..domain.model import INFINITE, ModelParams, Regime, TimeGrid, classify_regime
from ..domain.poles import PoleLabel, crossover_map, quartic_roots, residue_phi_z0
from ..domain.short_time import exact_survival_series, quadratic_approximation, survival_series, zeno_time
from ..domain.ssh import SshChain, continuum_decay_rate, fit_exponential, fit_power_law, gap_sweep
from ..domain.wavefunction import bound_decay_constant, default_x_grid, psi_bound, psi_numeric
from ..errors import ConfigError, SimulationError
from ..types import HeaderDict, RunResult, WriteTableFn
from .survival import resolve_options, survival_amplitude


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: list[list[Any]]
    header: HeaderDict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    params: ModelParams | SshChain
    methods: tuple[str, ...]
    build: Callable[[Scenario], list[Table]]

    def header(self) -> HeaderDict:
        header: HeaderDict = {"scenario": self.name, "description": self.description}
        header.update(self.params.as_header())
        header["methods"] = ",".join(self.methods)
        header["code_version"] = __version__
        return header


def _columns_to_rows(*columns: Sequence[Any]) -> list[list[Any]]:
    return [list(row) for row in zip(*columns)]


def _survival_probability(
    params: ModelParams, t: np.ndarray, settings: HeaderDict | None = None, label: str = ""
) -> np.ndarray:
    """Volterra P(t); the resolved dt and scheme go into `settings` under `label`."""
    grid = TimeGrid(t)
    options = resolve_options(params, grid, "volterra")
    if settings is not None:
        settings.update({f"volterra_{key}{label}": value for key, value in options.items()})
    return survival_amplitude(params, grid, "volterra", **options).probability


def _label(value: float) -> str:
    return f"{value:g}".replace(".", "p")


def _branch_cut_table(params: ModelParams, t: np.ndarray) -> Table:
    bc = np.array([branchcut_phi(params, float(ti)) for ti in t])
    first = np.array([asymptotic_phi(params, float(ti), order=1) for ti in t])
    second = np.array([asymptotic_phi(params, float(ti), order=2) for ti in t])
    tau = t * params.g2 / params.hbar
    return Table(
        name="",
        columns=("t", "tau", "re_phi_bc", "im_phi_bc", "p_bc", "p_asym1", "p_asym2"),
        rows=_columns_to_rows(
            t, tau, bc.real, bc.imag, np.abs(bc) ** 2, np.abs(first) ** 2, np.abs(second) ** 2
        ),
        header={
            "branch_cut_tolerance": BRANCH_CUT_TOLERANCE,
            "max_abs_dev_asym1": float(np.max(np.abs(first - bc))),
            "max_abs_dev_asym2": float(np.max(np.abs(second - bc))),
        },
    )


def _build_fig4(scenario: Scenario) -> list[Table]:
    return [_branch_cut_table(scenario.params, np.linspace(5.0, 60.0, 221))]


def _build_fig5(scenario: Scenario) -> list[Table]:
    base = scenario.params
    ratios = (1.0, 2.0, 3.0)
    t = np.linspace(0.0, 3.0, 301)
    x = np.linspace(-2.0, 2.0, 401)
    survival_columns = []
    profile_columns = []
    header: HeaderDict = {}
    for a in ratios:
        params = base.with_overrides(omega0=a * base.g2)
        poles = quartic_roots(params)
        survival_columns.append(_survival_probability(params, t, header, f"_a{_label(a)}"))
        profile_columns.append(np.abs(psi_bound(params, poles, 0.0, x)) ** 2)
        header[f"plateau_a{_label(a)}"] = abs(residue_phi_z0(params, poles, 0.0)) ** 2
        header[f"bound_z0_a{_label(a)}"] = poles.by_label(PoleLabel.BOUND_Z0).z.imag
        header[f"decay_constant_a{_label(a)}"] = bound_decay_constant(params, poles)
    names = tuple(f"a{_label(a)}" for a in ratios)
    return [
        Table("survival", ("t",) + tuple(f"p_{n}" for n in names), _columns_to_rows(t, *survival_columns), header),
        Table("bound_profile", ("x",) + tuple(f"psi2_{n}" for n in names), _columns_to_rows(x, *profile_columns)),
    ]


def _wavefunction_sweep(
    base: ModelParams, t: float, key: str, values: Sequence[float]
) -> Table:
    x = default_x_grid(t)
    reference = psi_numeric(base.with_overrides(m=0.0, lam=INFINITE), t, x)
    columns = [reference.density]
    header: HeaderDict = {"t": t, "norm_reference": reference.norm()}
    for value in values:
        field_ = psi_numeric(base.with_overrides(**{key: value}), t, x)
        columns.append(field_.density)
        header[f"l2_to_massless_{key}{_label(value)}"] = field_.l2_distance(reference)
        header[f"norm_{key}{_label(value)}"] = field_.norm()
    names = ("psi2_massless",) + tuple(f"psi2_{key}{_label(v)}" for v in values)
    return Table("", ("x",) + names, _columns_to_rows(x, *columns), header)


def _build_fig7(scenario: Scenario) -> list[Table]:
    return [_wavefunction_sweep(scenario.params, 1.0, "m", (1.08, 0.9, 0.09))]


def _build_fig8(scenario: Scenario) -> list[Table]:
    base = scenario.params
    a_grid = np.linspace(0.25, 10.0, 40)
    lam_grid = np.linspace(1.0, 20.0, 39)
    values = crossover_map(a_grid, lam_grid)
    map_rows = [
        [float(a), float(lam), float(values[i, j])]
        for i, a in enumerate(a_grid)
        for j, lam in enumerate(lam_grid)
    ]
    t = np.linspace(0.0, 50.0, 501)
    bright = base.with_overrides(omega0=1.0 * base.g2)
    dark = base.with_overrides(omega0=10.0 * base.g2)
    single = crossover_map([1.0, 10.0], [float(base.cutoff_ratio)])
    settings: HeaderDict = {"map_bright_a1": float(single[0, 0]), "map_dark_a10": float(single[1, 0])}
    p_bright = _survival_probability(bright, t, settings, "_bright_a1")
    p_dark = _survival_probability(dark, t, settings, "_dark_a10")
    return [
        Table("map", ("omega0_over_g2", "lambda_over_g2", "map_value"), map_rows),
        Table(
            "survival",
            ("t", "p_bright_a1", "p_dark_a10"),
            _columns_to_rows(t, p_bright, p_dark),
            settings,
        ),
    ]


def _build_fig9(scenario: Scenario) -> list[Table]:
    return [_branch_cut_table(scenario.params, np.linspace(1.0, 105.0, 1041))]


def _build_fig10(scenario: Scenario) -> list[Table]:
    params = scenario.params
    t_zeno = zeno_time(params)
    t = np.linspace(0.0, 0.5, 101)
    settings: HeaderDict = {"t_zeno": t_zeno, "series_order": 4}
    exact = exact_survival_series(params, order=4)
    printed = survival_series(params)
    short = Table(
        "short_time",
        ("t", "p_volterra", "p_quadratic", "p_series_exact4", "p_series_printed4"),
        _columns_to_rows(
            t,
            _survival_probability(params, t, settings),
            quadratic_approximation(params, t),
            exact.evaluate(t, params),
            printed.evaluate(t, params),
        ),
        settings,
    )
    counts = [2**k for k in range(11)]
    zeno = Table(
        "zeno",
        ("n_measurements", "survival"),
        [[n, zeno_protocol(params, 1.0, n)] for n in counts],
        {"t_total": 1.0},
    )
    return [short, zeno]


def _build_fig11(scenario: Scenario) -> list[Table]:
    return [_wavefunction_sweep(scenario.params, 1.0, "lam", (10.0, 30.0, 50.0))]


def _build_fig12(scenario: Scenario) -> list[Table]:
    base = scenario.params
    t = np.linspace(0.0, 20.0, 401)
    cases = (
        ("m1_lam10", base),
        ("m1_laminf", base.with_overrides(lam=INFINITE)),
        ("m0p5_lam10", base.with_overrides(m=0.5)),
        ("m2_lam10", base.with_overrides(m=2.0)),
    )
    settings: HeaderDict = {}
    columns = [_survival_probability(params, t, settings, f"_{name}") for name, params in cases]
    header: HeaderDict = {
        f"plateau_{name}": float(np.mean(column[t >= 15.0])) for (name, _), column in zip(cases, columns)
    }
    header["plateau_window_start"] = 15.0
    header |= settings
    return [Table("", ("t",) + tuple(f"p_{name}" for name, _ in cases), _columns_to_rows(t, *columns), header)]


def _build_fig13(scenario: Scenario) -> list[Table]:
    chain = scenario.params
    gaps = (0.0, 0.001, 0.0025)
    l_grid = np.linspace(0.0, 120.0, 481)
    sweep = gap_sweep(chain, gaps, l_grid)
    gapless = sweep[0.0]
    rate, r_squared = fit_exponential(gapless, 5.0, 40.0)
    exponent, stderr = fit_power_law(sweep[0.001], 30.0, 80.0)
    header: HeaderDict = {
        "gapless_rate": rate,
        "gapless_r_squared": r_squared,
        "golden_rule_rate": continuum_decay_rate(chain),
        "gap0p001_exponent": exponent,
        "gap0p001_stderr": stderr,
    }
    for gap, series in sweep.items():
        header[f"late_plateau_gap{_label(gap)}"] = float(np.mean(series.probability[l_grid > 100.0]))
    columns = [sweep[gap].probability for gap in gaps]
    return [Table("", ("l",) + tuple(f"p_gap{_label(g)}" for g in gaps), _columns_to_rows(l_grid, *columns), header)]


_TABLE1_CASES = (
    (ModelParams(omega0=1.0, g=1.0), "exponential", "exponential decay to zero"),
    (ModelParams(omega0=3.0 / 11.0, g=math.sqrt(1.0 / 11.0), m=1.0), "exponential", "t^-3/2 decay to bound state"),
    (ModelParams(omega0=1.0, g=1.0, lam=5.0), "quadratic", "t^-1 decay to bound state"),
    (ModelParams(omega0=1.0, g=0.5, m=1.0, lam=10.0), "quadratic", "power-law decay to bound state"),
)


def _short_time_exponent(params: ModelParams) -> float:
    scale = params.hbar / params.g2
    t = np.linspace(0.0, 1e-2 * scale, 201)
    deficit = 1.0 - _survival_probability(params, t)
    return window_slopes(t, deficit, [(1e-3 * scale, 1e-2 * scale)])[0]


def _long_time_fit(params: ModelParams) -> tuple[float, float]:
    """(amplitude envelope exponent of Phi_BC, exponential rate of P); NaN where absent."""
    regime = classify_regime(params)
    scale = params.hbar / params.g2
    if regime is Regime.MASSLESS_NOCUT:
        t = np.linspace(0.5 * scale, 2.0 * scale, 61)
        p = _survival_probability(params, t)
        return math.nan, float(-np.polyfit(t, np.log(p), 1)[0])
    if regime in (Regime.MASSIVE_NOCUT, Regime.MASSLESS_CUT):
        t = np.linspace(20.0 * scale, 80.0 * scale, 1201)
        amplitude = np.abs([branchcut_phi(params, float(ti)) for ti in t])
        exponent, _ = fit_power_law((t, amplitude), t[0], t[-1])
        return exponent, math.nan
    return math.nan, math.nan


def _build_table1(scenario: Scenario) -> list[Table]:
    rows = []
    for params, short_profile, long_profile in _TABLE1_CASES:
        regime = classify_regime(params)
        exponent, rate = _long_time_fit(params)
        rows.append(
            [
                regime.value,
                params.m,
                "inf" if params.infinite_cutoff else params.cutoff_value,
                short_profile,
                _short_time_exponent(params),
                long_profile,
                exponent,
                rate,
            ]
        )
    columns = (
        "regime",
        "m",
        "lambda",
        "short_time_profile",
        "short_time_exponent",
        "long_time_profile",
        "bc_amplitude_exponent",
        "exponential_rate",
    )
    return [Table("", columns, rows)]


SCENARIOS: dict[str, Scenario] = {
    scenario.name: scenario
    for scenario in (
        Scenario(
            "fig4",
            "massive branch cut against its long-time expansions",
            ModelParams(omega0=3.0 / 11.0, g=math.sqrt(1.0 / 11.0), m=1.0),
            ("branch-cut", "asymptotic"),
            _build_fig4,
        ),
        Scenario(
            "fig5",
            "massive survival and bound-state profiles for a in {1, 2, 3}, mu = 11",
            ModelParams(omega0=1.0, g=1.0, m=11.0),
            ("volterra", "poles"),
            _build_fig5,
        ),
        Scenario(
            "fig7",
            "massive wave functions approaching the massless resonant state",
            ModelParams(omega0=0.09, g=0.3, m=0.09),
            ("wavefunction",),
            _build_fig7,
        ),
        Scenario(
            "fig8",
            "cutoff pole crossover map and bright/dark survival",
            ModelParams(omega0=1.0, g=1.0, lam=5.0),
            ("poles", "volterra"),
            _build_fig8,
        ),
        Scenario(
            "fig9",
            "cutoff branch cut against its long-time expansions",
            ModelParams(omega0=1.0, g=1.0, lam=5.0),
            ("branch-cut", "asymptotic"),
            _build_fig9,
        ),
        Scenario(
            "fig10",
            "quadratic short-time decay, Zeno time and measurement protocol",
            ModelParams(omega0=1.0, g=1.0, lam=5.0),
            ("volterra", "series"),
            _build_fig10,
        ),
        Scenario(
            "fig11",
            "cutoff wave functions approaching the massless resonant state",
            ModelParams(omega0=1.0, g=0.3, lam=10.0),
            ("wavefunction",),
            _build_fig11,
        ),
        Scenario(
            "fig12",
            "general regime survival trends in m and lambda",
            ModelParams(omega0=1.0, g=0.5, m=1.0, lam=10.0),
            ("volterra",),
            _build_fig12,
        ),
        Scenario(
            "fig13",
            "SSH waveguide survival for |t1 - t2| in {0, 0.001, 0.0025}",
            SshChain(n_cells=2000, t1=0.18, t2=0.18, g=0.136, omega0=0.01),
            ("ssh",),
            _build_fig13,
        ),
        Scenario(
            "table1",
            "short- and long-time decay profiles in the four regimes",
            ModelParams(omega0=1.0, g=1.0),
            ("volterra", "branch-cut"),
            _build_table1,
        ),
    )
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ConfigError(
            f"unknown scenario {name!r}; expected one of {sorted(SCENARIOS)}", code="UNKNOWN_SCENARIO"
        ) from None


def run_scenario(scenario: Scenario | str, out_dir: Path, write_table: WriteTableFn) -> RunResult:
    """Build every table of the scenario and write each one through `write_table`."""
    name = scenario if isinstance(scenario, str) else scenario.name
    try:
        resolved = get_scenario(scenario) if isinstance(scenario, str) else scenario
        tables = resolved.build(resolved)
    except SimulationError as exc:
        return {
            "scenario": name,
            "status": "error",
            "artifacts": [],
            "error": str(exc),
            "code": exc.code,
            "exit_code": exc.exit_code,
        }

    artifacts = []
    for table in tables:
        stem = f"{resolved.name}_{table.name}" if table.name else resolved.name
        header = resolved.header() | table.header
        artifacts.append(write_table(Path(out_dir) / f"{stem}.csv", header, table.columns, table.rows))
    return {
        "scenario": resolved.name,
        "status": "ok",
        "artifacts": artifacts,
        "error": None,
        "code": None,
        "exit_code": 0,
    }
