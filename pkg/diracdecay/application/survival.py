"""Application orchestration for survival-amplitude oracles.

Mental model refresher:
- Each method name maps to one independent route to Phi(t): a time-domain
  solver, a matrix model, a Laplace inversion, a spectral sum, a Taylor
  series or the Markovian closed form.
- `survival_amplitude` runs a single method on a caller grid.
- `compare_oracles` runs several, keeps going when one fails, and reports
  every pairwise deviation in one result dictionary.
"""

from __future__ import annotations

from itertools import combinations
import math
from typing import Any, Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from ..domain.model import ComplexSeries, ModelParams, Picture, Regime, TimeGrid, classify_regime, markovian_phi
from ..domain.poles import spectral_phi
from ..domain.resolvent import BROMWICH_TOLERANCE, PRINCIPAL, ResolventFn, bromwich_invert, default_sigma
from ..domain.short_time import series_phi
from ..domain.volterra import Scheme, VolterraConfig, propagate_discretized, solve_volterra
from ..errors import ConfigError, SimulationError
from ..types import ComparisonResult, RealArray

COMPARE_TOLERANCE = 1e-3
DEFAULT_MODES = 400
DEFAULT_SERIES_ORDER = 6
_PHASE_PER_STEP = 0.05
_MIN_STEPS = 64

ALL_REGIMES = frozenset(Regime)
METHOD_REGIMES: dict[str, frozenset[Regime]] = {
    "volterra": ALL_REGIMES,
    "discretized": ALL_REGIMES,
    "bromwich": ALL_REGIMES,
    "spectral": frozenset({Regime.MASSIVE_NOCUT, Regime.MASSLESS_CUT}),
    "series": ALL_REGIMES,
    "closed-form": frozenset({Regime.MASSLESS_NOCUT}),
}


def method_applies(method: str, regime: Regime) -> bool:
    if method not in METHOD_REGIMES:
        raise ConfigError(
            f"unknown method {method!r}; expected one of {sorted(METHOD_REGIMES)}",
            code="INVALID_ARGUMENT",
        )
    return regime in METHOD_REGIMES[method]


def default_step(params: ModelParams, t_max: float) -> float:
    """Largest dt with an even step count that keeps the phase per step small."""
    fastest = max(params.omega0, params.m, params.g2)
    if not params.infinite_cutoff:
        fastest = max(fastest, params.cutoff_value)
    n_steps = max(_MIN_STEPS, math.ceil(fastest * t_max / (_PHASE_PER_STEP * params.hbar)))
    n_steps += n_steps % 2
    return t_max / n_steps


def _onto_grid(series: ComplexSeries, t_grid: TimeGrid, params: ModelParams) -> ComplexSeries:
    target = t_grid.physical(params)
    source = series.grid.physical(params)
    if source.shape == target.shape and np.allclose(source, target, rtol=0.0, atol=1e-14):
        values = series.values
    else:
        values = CubicSpline(source, series.values)(target)
    return ComplexSeries(
        grid=t_grid,
        values=values,
        picture=series.picture,
        error=series.error,
        method=series.method,
    )


def _scheme(raw: Any) -> Scheme:
    if raw is None:
        return Scheme.SIMPSON
    if isinstance(raw, Scheme):
        return raw
    try:
        return Scheme(str(raw).upper())
    except ValueError:
        raise ConfigError(f"unknown scheme {raw!r}", code="INVALID_ARGUMENT") from None


def resolve_options(
    params: ModelParams,
    t_grid: TimeGrid | RealArray | Sequence[float],
    method: str,
    **options: Any,
) -> dict[str, Any]:
    """Settings `method` actually runs with on `t_grid`, defaults filled in.

    Every key is echoed into CSV headers, so feeding the returned values
    back as options reproduces the run.
    """
    grid = t_grid if isinstance(t_grid, TimeGrid) else TimeGrid(np.asarray(t_grid, dtype=float))
    if method == "volterra":
        t_max = float(grid.physical(params)[-1])
        dt = options.get("dt") or (default_step(params, t_max) if t_max > 0 else 0.0)
        return {"dt": float(dt), "scheme": _scheme(options.get("scheme")).value.lower()}
    if method == "discretized":
        return {"n_modes": int(options.get("n_modes") or DEFAULT_MODES)}
    if method == "bromwich":
        sigma = options.get("sigma")
        if sigma is None:
            sigma = default_sigma(float(grid.dimensionless(params)[-1]))
        tolerance = options.get("tail_tolerance") or BROMWICH_TOLERANCE
        return {"sigma": float(sigma), "tail_tolerance": float(tolerance)}
    if method == "series":
        return {"order": int(options.get("order") or DEFAULT_SERIES_ORDER)}
    return {}


def _run_volterra(params: ModelParams, t_grid: TimeGrid, options: dict[str, Any]) -> ComplexSeries:
    t_max = float(t_grid.physical(params)[-1])
    if t_max == 0:
        return ComplexSeries(t_grid, np.ones(len(t_grid)), Picture.INTERACTION, method="volterra-simpson")
    cfg = VolterraConfig(dt=options["dt"], t_max=t_max, scheme=_scheme(options["scheme"]))
    return _onto_grid(solve_volterra(params, cfg), t_grid, params)


def _run_discretized(params: ModelParams, t_grid: TimeGrid, options: dict[str, Any]) -> ComplexSeries:
    series, _ = propagate_discretized(params, options["n_modes"], times=t_grid.physical(params))
    return ComplexSeries(t_grid, series.values, series.picture, series.error, series.method)


def _run_bromwich(params: ModelParams, t_grid: TimeGrid, options: dict[str, Any]) -> ComplexSeries:
    return bromwich_invert(
        ResolventFn(params, PRINCIPAL), t_grid, sigma=options["sigma"], tolerance=options["tail_tolerance"]
    )


def _run_spectral(params: ModelParams, t_grid: TimeGrid, options: dict[str, Any]) -> ComplexSeries:
    return spectral_phi(params, t_grid)


def _run_series(params: ModelParams, t_grid: TimeGrid, options: dict[str, Any]) -> ComplexSeries:
    order = options["order"]
    values = [series_phi(params, float(t), order=order) for t in t_grid.physical(params)]
    return ComplexSeries(t_grid, values, Picture.INTERACTION, method=f"series-{order}")


def _run_closed_form(params: ModelParams, t_grid: TimeGrid, options: dict[str, Any]) -> ComplexSeries:
    values = markovian_phi(params, t_grid.physical(params))
    return ComplexSeries(t_grid, values, Picture.INTERACTION, method="closed-form")


_RUNNERS: dict[str, Callable[[ModelParams, TimeGrid, dict[str, Any]], ComplexSeries]] = {
    "volterra": _run_volterra,
    "discretized": _run_discretized,
    "bromwich": _run_bromwich,
    "spectral": _run_spectral,
    "series": _run_series,
    "closed-form": _run_closed_form,
}


def survival_amplitude(
    params: ModelParams,
    t_grid: TimeGrid | RealArray | Sequence[float],
    method: str = "volterra",
    **options: Any,
) -> ComplexSeries:
    """Interaction-picture Phi(t) on `t_grid` from the named method."""
    grid = t_grid if isinstance(t_grid, TimeGrid) else TimeGrid(np.asarray(t_grid, dtype=float))
    regime = classify_regime(params)
    if not method_applies(method, regime):
        raise ConfigError(
            f"method {method!r} does not apply to regime {regime.value}", code="REGIME_MISMATCH"
        )
    return _RUNNERS[method](params, grid, resolve_options(params, grid, method, **options))


def _relative_deviation(first: ComplexSeries, second: ComplexSeries) -> float:
    scale = np.maximum(np.maximum(first.abs, second.abs), 1e-12)
    return float(np.max(np.abs(first.values - second.values) / scale))


def compare_oracles(
    params: ModelParams,
    t_grid: TimeGrid | RealArray | Sequence[float],
    methods: Sequence[str],
    tolerance: float = COMPARE_TOLERANCE,
    **options: Any,
) -> ComparisonResult:
    """Run every method, then the pairwise max relative deviation of |.|-scaled amplitudes."""
    unique = list(dict.fromkeys(methods))
    if len(unique) < 2:
        raise ConfigError("compare needs at least 2 distinct methods", code="METHOD_COUNT")
    regime = classify_regime(params)
    # unknown names fail before any method runs
    applicable = {method: method_applies(method, regime) for method in unique}

    grid = t_grid if isinstance(t_grid, TimeGrid) else TimeGrid(np.asarray(t_grid, dtype=float))
    method_results: list[dict[str, Any]] = []
    series: dict[str, ComplexSeries] = {}
    for method in unique:
        if not applicable[method]:
            method_results.append(
                {
                    "method": method,
                    "status": "skipped",
                    "error": f"method does not apply to regime {regime.value}",
                }
            )
            continue
        try:
            used = resolve_options(params, grid, method, **options)
            series[method] = survival_amplitude(params, grid, method, **used)
            method_results.append({"method": method, "status": "ok", "error": None, "options": used})
        except SimulationError as exc:
            method_results.append(
                {"method": method, "status": "error", "error": str(exc), "code": exc.code}
            )

    pairs = []
    for method_a, method_b in combinations(series, 2):
        deviation = _relative_deviation(series[method_a], series[method_b])
        pairs.append(
            {
                "method_a": method_a,
                "method_b": method_b,
                "max_rel_dev": deviation,
                "flagged": deviation > tolerance,
            }
        )

    return {
        "regime": regime.value,
        "grid": grid,
        "series": series,
        "method_results": method_results,
        "pairs": pairs,
        "tolerance": tolerance,
        "all_within_tolerance": len(series) >= 2 and not any(item["flagged"] for item in pairs),
    }
