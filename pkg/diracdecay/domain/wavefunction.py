"""Environment wave functions psi(t, x) in the Schrodinger picture.

Mental model refresher:
- Everything is computed in hbar = 1 units and rescaled on the way out:
  psi_hbar(t, x) = psi_1(t / hbar, x / hbar) / sqrt(hbar).
- The field is the system amplitude phi pushed through a retarded kernel:
  massless no-cutoff is the pure light-cone copy N phi(t - |x|); a mass adds
  a Bessel tail inside the cone; a cutoff smears the cone with sinc kernels.
- N = -i sqrt(2 pi g^2) is fixed by the norm identity |phi|^2 + int |psi|^2 = 1.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicSpline

from ..errors import ConfigError, ExceptionalPointError, ToleranceError
from ..types import ComplexArray, RealArray
from .model import ModelParams, Picture, Regime, classify_regime
from .poles import PoleLabel, PoleSet, quartic_roots
from .quadrature import gauss_legendre_panels, panels_for_phase, quad_complex, trapezoid_weights
from .volterra import Scheme, VolterraConfig, solve_volterra

DEFAULT_POINTS = 2048
WAVEFUNCTION_TOLERANCE = 1e-6
_LIGHT_CONE_REACH = 40.0


@dataclass(frozen=True, eq=False)
class WaveField:
    x_grid: RealArray
    values: ComplexArray
    t: float
    params: ModelParams
    integrated_prob: float

    @property
    def density(self) -> RealArray:
        return np.abs(self.values) ** 2

    def norm(self, rule: str = "trapezoid") -> float:
        if rule == "trapezoid":
            return self.integrated_prob
        if rule == "simpson":
            return float(integrate.simpson(self.density, x=self.x_grid))
        raise ConfigError(f"unknown integration rule {rule!r}", code="INVALID_ARGUMENT")

    def l2_distance(self, other: WaveField) -> float:
        if self.x_grid.shape != other.x_grid.shape or not np.allclose(self.x_grid, other.x_grid):
            raise ConfigError("wave fields live on different grids", code="INVALID_ARGUMENT")
        diff = np.abs(self.values - other.values) ** 2
        return math.sqrt(float(trapezoid_weights(self.x_grid) @ diff))


def default_x_grid(t: float, n_points: int = DEFAULT_POINTS) -> RealArray:
    return np.linspace(-2.0 * t, 2.0 * t, n_points)


def _normalization(params: ModelParams) -> complex:
    return -1j * math.sqrt(2.0 * math.pi * params.g2)


def _unit_hbar(params: ModelParams) -> ModelParams:
    return params if params.hbar == 1.0 else params.with_overrides(hbar=1.0)


def _make_field(params: ModelParams, t: float, x: RealArray, values: ComplexArray) -> WaveField:
    values = np.asarray(values, dtype=complex)
    prob = float(trapezoid_weights(x) @ (np.abs(values) ** 2))
    return WaveField(x_grid=x, values=values, t=t, params=params, integrated_prob=prob)


def psi_massless(params: ModelParams, t: float, x: float | RealArray) -> complex | ComplexArray:
    if classify_regime(params) is not Regime.MASSLESS_NOCUT:
        raise ConfigError("closed-form profile exists only for MASSLESS_NOCUT", code="REGIME_MISMATCH")
    hbar = params.hbar
    unit = _unit_hbar(params)
    lag = t / hbar - np.abs(np.asarray(x, dtype=float)) / hbar
    inside = lag >= 0
    rate = 1j * unit.omega0 + 2.0 * math.pi * unit.g2
    values = np.where(inside, _normalization(unit) * np.exp(-rate * np.where(inside, lag, 0.0)), 0.0)
    values = values / math.sqrt(hbar)
    return complex(values) if np.ndim(values) == 0 else values


def _bound_parts(params: ModelParams, poles: PoleSet) -> tuple[complex, float, complex]:
    """(z0, S0, N z0 / D'(z0)) in physical units with hbar = 1."""
    z0 = params.g2 * poles.by_label(PoleLabel.BOUND_Z0).z
    m = params.m
    s0 = math.sqrt(m * m - (z0.imag) ** 2)
    derivative = (z0 / s0) * (z0 + 1j * params.omega0) + s0 + 2.0 * math.pi * params.g2
    return z0, s0, _normalization(params) * z0 / derivative


def psi_bound(
    params: ModelParams, poles: PoleSet | None, t: float, x: float | RealArray
) -> complex | ComplexArray:
    """Bound-pole part of psi; |psi| is time independent and decays as exp(-S0 |x|)."""
    if classify_regime(params) is not Regime.MASSIVE_NOCUT:
        raise ConfigError("bound state exists only for MASSIVE_NOCUT", code="REGIME_MISMATCH")
    poles = poles or quartic_roots(params)
    if poles.exceptional:
        raise ExceptionalPointError("bound-state residue undefined at an exceptional point")
    hbar = params.hbar
    unit = _unit_hbar(params)
    z0, s0, weight = _bound_parts(unit, poles)
    xs = np.abs(np.asarray(x, dtype=float)) / hbar
    values = weight * np.exp(z0 * (t / hbar) - s0 * xs) / math.sqrt(hbar)
    return complex(values) if np.ndim(values) == 0 else values


def bound_decay_constant(params: ModelParams, poles: PoleSet | None = None) -> float:
    """K = sqrt(z0^2 + m^2) in units of 1/length (hbar = 1 convention)."""
    poles = poles or quartic_roots(params)
    _, s0, _ = _bound_parts(_unit_hbar(params), poles)
    return s0 / params.hbar


def psi_branchcut(
    params: ModelParams, poles: PoleSet | None, t: float, x: float | RealArray
) -> complex | ComplexArray:
    """Branch-cut part of the massive profile inside the light cone |x| < t."""
    if classify_regime(params) is not Regime.MASSIVE_NOCUT:
        raise ConfigError("massive branch cut needs MASSIVE_NOCUT", code="REGIME_MISMATCH")
    hbar = params.hbar
    unit = _unit_hbar(params)
    t1 = t / hbar
    xs = np.abs(np.atleast_1d(np.asarray(x, dtype=float))) / hbar
    if np.any(xs >= t1):
        raise ConfigError("branch-cut profile is evaluated inside |x| < t only", code="INVALID_ARGUMENT")

    m = unit.m
    norm = _normalization(unit)
    omega0 = unit.omega0
    kappa = 2.0 * math.pi * unit.g2

    def resolvent(z: complex, s: complex, dist: float) -> complex:
        return norm * z * cmath.exp(-s * dist) / (s * (z + 1j * omega0) + kappa * z)

    out = np.empty(xs.shape, dtype=complex)
    for i, dist in enumerate(xs):

        def upper(u: float, dist: float = dist) -> complex:
            z = 1j * m - u
            s = cmath.sqrt(z * z + m * m)
            return math.exp(-u * t1) * (resolvent(z, s, dist) - resolvent(z, -s, dist))

        def lower(u: float, dist: float = dist) -> complex:
            z = -1j * m - u
            s = cmath.sqrt(z * z + m * m)
            return math.exp(-u * t1) * (resolvent(z, -s, dist) - resolvent(z, s, dist))

        reach = _LIGHT_CONE_REACH / (t1 - dist)
        split = min(1.0, 0.5 * reach)
        options = {"epsabs": 1e-12, "epsrel": 1e-10, "limit": 500}
        total = 0j
        error = 0.0
        for func, phase in ((upper, cmath.exp(1j * m * t1)), (lower, cmath.exp(-1j * m * t1))):
            near, near_err = quad_complex(func, 0.0, split, **options)
            far, far_err = quad_complex(func, split, reach, **options)
            total += phase * (near + far)
            error += near_err + far_err
        if error > WAVEFUNCTION_TOLERANCE:
            raise ToleranceError(
                f"branch-cut profile quadrature error {error:.3e} at x={dist * hbar!r}",
                code="QUADRATURE_TOLERANCE",
            )
        out[i] = total / (2j * math.pi)
    out /= math.sqrt(hbar)
    return complex(out[0]) if np.ndim(x) == 0 else out


def _schrodinger_spline(params: ModelParams, t: float) -> CubicSpline:
    fastest = max(params.omega0, params.m, 0.0 if params.infinite_cutoff else params.cutoff_value)
    n_steps = max(128, math.ceil(20.0 * fastest * t))
    n_steps += n_steps % 2
    cfg = VolterraConfig(dt=t / n_steps, t_max=t, scheme=Scheme.SIMPSON)
    series = solve_volterra(params, cfg).to_picture(Picture.SCHRODINGER, params)
    if series.error > WAVEFUNCTION_TOLERANCE:
        raise ToleranceError(
            f"system amplitude error {series.error:.3e} too large for the field profile",
            code="QUADRATURE_TOLERANCE",
        )
    return CubicSpline(series.grid.points, series.values)


def psi_retarded(params: ModelParams, phi: CubicSpline, t: float, x: RealArray) -> ComplexArray:
    """Retarded-kernel profile (hbar = 1) for a given Schrodinger amplitude phi(s)."""
    regime = classify_regime(params)
    norm = _normalization(params)
    x = np.asarray(x, dtype=float)
    dist = np.abs(x)

    if regime is Regime.MASSLESS_NOCUT:
        inside = dist <= t
        return np.where(inside, norm * phi(np.clip(t - dist, 0.0, t)), 0.0)

    if regime is Regime.MASSIVE_NOCUT:
        m = params.m
        n_panels = panels_for_phase((m + params.omega0) * t, max_phase=1.0, minimum=4)
        s, w = gauss_legendre_panels(0.0, 1.0, n_panels, order=16)
        inside = dist <= t
        span = np.where(inside, t - dist, 0.0)
        u = dist[:, None] + span[:, None] * s[None, :]
        r = np.sqrt(np.maximum(u * u - dist[:, None] ** 2, 0.0))
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(r > 0, special.j1(m * r) / np.where(r > 0, r, 1.0), 0.5 * m)
        tail = (phi(t - u) * u * ratio) @ w * span
        head = phi(np.clip(t - dist, 0.0, t))
        return np.where(inside, norm * (head - m * tail), 0.0)

    if regime is Regime.MASSLESS_CUT:
        lam = params.cutoff_value
        n_panels = panels_for_phase((lam + params.omega0) * t, max_phase=1.0, minimum=4)
        u, w = gauss_legendre_panels(0.0, t, n_panels, order=16)
        weighted = phi(t - u) * w
        plus = lam * np.sinc(lam * (x[:, None] + u[None, :]) / math.pi)
        minus = lam * np.sinc(lam * (x[:, None] - u[None, :]) / math.pi)
        return (norm / math.pi) * ((plus + minus) @ weighted)

    raise ConfigError("no wave function for the GENERAL regime", code="REGIME_MISMATCH")


def psi_numeric(params: ModelParams, t: float, x_grid: RealArray | None = None) -> WaveField:
    if t <= 0:
        raise ConfigError(f"psi_numeric needs t > 0, got {t!r}", code="INVALID_ARGUMENT")
    x = default_x_grid(t) if x_grid is None else np.asarray(x_grid, dtype=float)
    regime = classify_regime(params)
    if regime is Regime.GENERAL:
        raise ConfigError("no wave function for the GENERAL regime", code="REGIME_MISMATCH")
    if regime is Regime.MASSLESS_NOCUT:
        return _make_field(params, t, x, psi_massless(params, t, x))

    hbar = params.hbar
    unit = _unit_hbar(params)
    t1 = t / hbar
    phi = _schrodinger_spline(unit, t1)
    values = psi_retarded(unit, phi, t1, x / hbar) / math.sqrt(hbar)
    return _make_field(params, t, x, values)
