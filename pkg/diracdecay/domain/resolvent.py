"""Laplace-domain resolvent F(z) and direct Bromwich inversion.

Mental model refresher:
- z is dimensionless (units of g^2); F is the transform of the Schrodinger
  amplitude in tau, so Phi(t) = exp(i a tau) * inverse(F)(tau) with
  a = omega0/g^2.
- Square roots sqrt(z^2 + c^2) are always the product
  sqrt(z - ic) * sqrt(z + ic) so that the cuts run leftward from +-ic.
- Inversion subtracts 1/(z + c) analytically; only the O(z^-3) remainder is
  integrated along Re z = sigma.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
import math

import numpy as np

from ..errors import BranchCutProximityError, ConfigError, PoleProximityError, ToleranceError
from ..types import ComplexArray, RealArray
from .model import ComplexSeries, ModelParams, Picture, Regime, TimeGrid, classify_regime
from .quadrature import fourier_tail, gauss_legendre_panels

POLE_PROXIMITY_LIMIT = 1e12
CUT_PROXIMITY_LIMIT = 1e-12
BROMWICH_TOLERANCE = 1e-6
_LINE_ORDER = 16
_TAU_CHUNK = 64


@dataclass(frozen=True)
class SheetId:
    """0 is the principal sheet; +1/-1 pick R+/R- on the square-root surface."""

    branch: int = 0


PRINCIPAL = SheetId(0)


@dataclass(frozen=True)
class ResolventFn:
    params: ModelParams
    sheet: SheetId = PRINCIPAL

    def __post_init__(self) -> None:
        regime = self.regime
        branch = self.sheet.branch
        if regime is Regime.GENERAL and branch != 0:
            raise ConfigError("GENERAL regime is evaluated on the principal sheet only", code="REGIME_MISMATCH")
        if regime in (Regime.MASSLESS_NOCUT, Regime.MASSIVE_NOCUT) and branch not in (-1, 0, 1):
            raise ConfigError(f"square-root surface has no sheet {branch}", code="REGIME_MISMATCH")

    @property
    def regime(self) -> Regime:
        return classify_regime(self.params)

    @property
    def sign(self) -> float:
        """+1 on R+ (and the principal sheet), -1 on R-."""
        return -1.0 if self.sheet.branch < 0 else 1.0

    def inverse(self, z: complex | ComplexArray) -> complex | ComplexArray:
        """1/F(z) without proximity checks (root finders work on this)."""
        params = self.params
        z = np.asarray(z, dtype=complex)
        a = params.omega0_ratio
        regime = self.regime
        if regime is Regime.MASSLESS_NOCUT:
            out = z + 1j * a + self.sign * 2.0 * math.pi
        elif regime is Regime.MASSIVE_NOCUT:
            s = sqrt_pair(z, params.mass_ratio)
            out = z + 1j * a + self.sign * 2.0 * math.pi * z / s
        elif regime is Regime.MASSLESS_CUT:
            lam = params.cutoff_ratio
            out = z + 1j * a + 4.0 * (arctan_left(lam, z) + self.sheet.branch * math.pi)
        else:
            lam = params.cutoff_ratio
            s = sqrt_pair(z, params.mass_ratio)
            out = z + 1j * a + 4.0 * z * arctan_left(lam, s) / s
        return out[()] if out.ndim == 0 else out

    def __call__(self, z: complex | ComplexArray) -> complex | ComplexArray:
        distance = np.min(self.cut_distance(z))
        if distance < CUT_PROXIMITY_LIMIT:
            raise BranchCutProximityError(f"z within {distance:.2e} of a branch cut")
        inverse = np.asarray(self.inverse(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            values = 1.0 / inverse
        if not np.all(np.isfinite(values)) or np.max(np.abs(values)) > POLE_PROXIMITY_LIMIT:
            raise PoleProximityError("|F(z)| overflow next to a pole")
        return values[()] if values.ndim == 0 else values

    def cut_distance(self, z: complex | ComplexArray) -> RealArray:
        regime = self.regime
        if regime is Regime.MASSLESS_NOCUT:
            return np.full(np.shape(z), np.inf)
        if regime is Regime.MASSLESS_CUT:
            return _ray_distance(z, self.params.cutoff_ratio)
        return _ray_distance(z, self.params.mass_ratio)


def sqrt_pair(z: complex | ComplexArray, c: float) -> complex | ComplexArray:
    """sqrt(z^2 + c^2) with cuts leftward from +-ic."""
    return np.sqrt(z - 1j * c) * np.sqrt(z + 1j * c)


def arctan_left(lam: float, z: complex | ComplexArray) -> complex | ComplexArray:
    """arctan(lam / z) with its cuts leftward from +-i lam (no cut at z = 0)."""
    return -0.5j * (np.log(z + 1j * lam) - np.log(z - 1j * lam))


def _ray_distance(z: complex | ComplexArray, c: float) -> RealArray:
    z = np.asarray(z, dtype=complex)
    upper = np.where(z.real <= 0, np.abs(z.imag - c), np.abs(z - 1j * c))
    lower = np.where(z.real <= 0, np.abs(z.imag + c), np.abs(z + 1j * c))
    return np.minimum(upper, lower)


def resolvent_eval(fn: ResolventFn, z: complex) -> complex:
    return complex(fn(z))


def subtracted_tail_constant(params: ModelParams) -> complex:
    """c with F(z) - 1/(z + c) = O(z^-3) at large |z|."""
    if params.infinite_cutoff:
        return complex(2.0 * math.pi, params.omega0_ratio)
    return complex(0.0, params.omega0_ratio)


def sheet_jump(params: ModelParams, z: complex, eps: float = 1e-10) -> complex:
    """F(z - i eps) - F(z + i eps) on the principal sheet."""
    fn = ResolventFn(params)
    return complex(fn.inverse(z - 1j * eps) ** -1 - fn.inverse(z + 1j * eps) ** -1)


def _fine_half_width(params: ModelParams) -> float:
    lam = params.cutoff_ratio or 0.0
    return 2.0 * (abs(params.omega0_ratio) + params.mass_ratio + lam + 2.0 * math.pi) + 5.0


def _scalar_remainder(params: ModelParams, c: complex):
    """Fast scalar R(z) = F(z) - 1/(z + c) for the Fourier tail."""
    a = params.omega0_ratio
    regime = classify_regime(params)
    mu = params.mass_ratio
    lam = params.cutoff_ratio

    def inverse(z: complex) -> complex:
        if regime is Regime.MASSIVE_NOCUT:
            s = cmath.sqrt(z - 1j * mu) * cmath.sqrt(z + 1j * mu)
            return z + 1j * a + 2.0 * math.pi * z / s
        if regime is Regime.MASSLESS_CUT:
            return z + 1j * a - 2j * (cmath.log(z + 1j * lam) - cmath.log(z - 1j * lam))
        if regime is Regime.GENERAL:
            s = cmath.sqrt(z - 1j * mu) * cmath.sqrt(z + 1j * mu)
            return z + 1j * a - 2j * z * (cmath.log(s + 1j * lam) - cmath.log(s - 1j * lam)) / s
        return z + 1j * a + 2.0 * math.pi

    def remainder(z: complex) -> complex:
        return 1.0 / inverse(z) - 1.0 / (z + c)

    return remainder


def default_sigma(tau_max: float) -> float:
    """Contour abscissa min(1, 1/tau_max) for a grid ending at tau_max."""
    return min(1.0, 1.0 / tau_max) if tau_max > 0 else 1.0


def bromwich_invert(
    fn: ResolventFn,
    t_grid: TimeGrid,
    sigma: float | None = None,
    tolerance: float = BROMWICH_TOLERANCE,
) -> ComplexSeries:
    """Phi(t) from the line integral along Re z = sigma (interaction picture)."""
    if fn.sheet != PRINCIPAL:
        raise ConfigError("Bromwich inversion runs on the principal sheet", code="REGIME_MISMATCH")
    params = fn.params
    tau = t_grid.dimensionless(params)
    tau_max = float(tau[-1])
    if sigma is None:
        sigma = default_sigma(tau_max)
    elif sigma <= 0:
        raise ConfigError(f"sigma must be > 0, got {sigma!r}", code="INVALID_ARGUMENT")

    a = params.omega0_ratio
    if fn.regime is Regime.MASSLESS_NOCUT:
        # F is exactly 1/(z + c) here; subtract only the free pole.
        c = complex(0.0, a)
    else:
        c = subtracted_tail_constant(params)
    subtracted = np.exp(-c * tau)

    y0 = _fine_half_width(params)
    width = min(0.25, sigma, 1.0 / tau_max) if tau_max > 0 else min(0.25, sigma)
    n_panels = max(8, math.ceil(2.0 * y0 / width))
    coarse = _line_integral(fn, c, sigma, tau, y0, n_panels)
    fine = _line_integral(fn, c, sigma, tau, y0, 2 * n_panels)
    line_err = np.abs(fine - coarse)

    remainder = _scalar_remainder(params, c)
    tails = np.empty(tau.shape, dtype=complex)
    tail_err = np.empty(tau.shape, dtype=float)
    for i, tau_i in enumerate(tau):
        cos_part, sin_part, err = fourier_tail(
            lambda y: remainder(complex(sigma, y)) + remainder(complex(sigma, -y)), y0, tau_i
        )
        if tau_i == 0:
            tails[i] = cos_part
            tail_err[i] = err
            continue
        _, odd_sin, odd_err = fourier_tail(
            lambda y: remainder(complex(sigma, y)) - remainder(complex(sigma, -y)), y0, tau_i
        )
        tails[i] = cos_part + 1j * odd_sin
        tail_err[i] = err + odd_err

    scale = np.exp(sigma * tau) / (2.0 * math.pi)
    phi = subtracted + scale * (fine + tails)
    error = scale * (line_err + tail_err)
    worst = float(np.max(error))
    if worst > tolerance:
        raise ToleranceError(
            f"Bromwich error estimate {worst:.3e} above tolerance {tolerance:.1e}",
            code="TAIL_TOLERANCE",
        )
    return ComplexSeries(
        grid=t_grid,
        values=np.exp(1j * a * tau) * phi,
        picture=Picture.INTERACTION,
        error=worst,
        method="bromwich",
    )


def _line_integral(
    fn: ResolventFn, c: complex, sigma: float, tau: RealArray, y0: float, n_panels: int
) -> ComplexArray:
    """int_{-y0}^{y0} R(sigma + iy) exp(i y tau) dy for every tau."""
    y, w = gauss_legendre_panels(-y0, y0, n_panels, order=_LINE_ORDER)
    z = sigma + 1j * y
    weighted = w * (fn(z) - 1.0 / (z + c))
    out = np.empty(tau.shape, dtype=complex)
    for start in range(0, tau.size, _TAU_CHUNK):
        block = tau[start : start + _TAU_CHUNK]
        out[start : start + _TAU_CHUNK] = np.exp(1j * np.outer(block, y)) @ weighted
    return out
