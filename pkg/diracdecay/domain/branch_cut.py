"""Branch-cut contributions to Phi(t) and their long-time expansions.

Both cut regimes share one shape: two rays run leftward from the branch
points +-ic (c = m/g^2 or lambda/g^2). Writing z = +-ic - u with u >= 0,

    Phi_BC = exp(i a tau) / (2 pi i) *
             [exp(i c tau) int_0^inf exp(-u tau) D_up(u) du
              + exp(-i c tau) int_0^inf exp(-u tau) D_low(u) du]

where D = F(below) - F(above) is the jump of the principal-sheet resolvent
across each ray. The fast phases exp(+-i c tau) are factored out exactly.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
import math

import numpy as np

from ..errors import ConfigError, ToleranceError
from ..types import ComplexArray, RealArray
from .model import ModelParams, Regime, classify_regime, to_dimensionless
from .quadrature import quad_complex

DAMPING_CUTOFF = 40.0
BRANCH_CUT_TOLERANCE = 1e-8

_SUPPORTED = (Regime.MASSIVE_NOCUT, Regime.MASSLESS_CUT)


@dataclass(frozen=True)
class JumpFn:
    params: ModelParams
    regime: Regime

    @property
    def offset(self) -> float:
        """Distance c of the branch points +-ic from the origin."""
        if self.regime is Regime.MASSIVE_NOCUT:
            return self.params.mass_ratio
        return float(self.params.cutoff_ratio)

    def upper(self, u: float) -> complex:
        if self.regime is Regime.MASSIVE_NOCUT:
            return self._massive(1j * self.offset - u)
        a = self.params.omega0_ratio
        lam = self.offset
        z = 1j * lam - u
        base = z + 1j * a - 2j * (cmath.log(2j * lam - u) - (math.log(u) + 1j * math.pi))
        return -4.0 * math.pi / (base * (base + 4.0 * math.pi))

    def lower(self, u: float) -> complex:
        if self.regime is Regime.MASSIVE_NOCUT:
            return -self._massive(-1j * self.offset - u)
        a = self.params.omega0_ratio
        lam = self.offset
        z = -1j * lam - u
        base = z + 1j * a - 2j * ((math.log(u) + 1j * math.pi) - cmath.log(-2j * lam - u))
        return 4.0 * math.pi / (base * (base - 4.0 * math.pi))

    def _massive(self, z: complex) -> complex:
        """A(z) = -4 pi z S / P(z) with the principal sqrt(z^2 + mu^2)."""
        a = self.params.omega0_ratio
        mu2 = self.params.mass_ratio**2
        s2 = z * z + mu2
        s = cmath.sqrt(s2)
        poly = (z + 1j * a) ** 2 * s2 - 4.0 * math.pi**2 * z * z
        return -4.0 * math.pi * z * s / poly


def jump_function(params: ModelParams) -> JumpFn:
    regime = classify_regime(params)
    if regime not in _SUPPORTED:
        raise ConfigError(
            f"branch-cut integrals are defined for MASSIVE_NOCUT and MASSLESS_CUT, not {regime.value}",
            code="REGIME_MISMATCH",
        )
    return JumpFn(params, regime)


def branchcut_phi(params: ModelParams, t: float, tolerance: float = BRANCH_CUT_TOLERANCE) -> complex:
    jump = jump_function(params)
    if t <= 0:
        raise ConfigError(f"branchcut_phi needs t > 0, got {t!r}", code="INVALID_ARGUMENT")
    tau = to_dimensionless(t, params)
    reach = DAMPING_CUTOFF / tau
    split = min(1.0, 0.5 * reach)

    upper, upper_err = _ray_integral(jump.upper, tau, split, reach)
    lower, lower_err = _ray_integral(jump.lower, tau, split, reach)
    if upper_err + lower_err > tolerance:
        raise ToleranceError(
            f"branch-cut quadrature error {upper_err + lower_err:.3e} at t={t!r} "
            f"(reach R={reach:.3g})",
            code="TAIL_TOLERANCE",
        )

    c = jump.offset
    a = params.omega0_ratio
    total = cmath.exp(1j * c * tau) * upper + cmath.exp(-1j * c * tau) * lower
    return cmath.exp(1j * a * tau) * total / (2j * math.pi)


def branchcut_series(params: ModelParams, t: RealArray) -> ComplexArray:
    return np.array([branchcut_phi(params, float(ti)) for ti in np.asarray(t, dtype=float)])


def _ray_integral(jump, tau: float, split: float, reach: float) -> tuple[complex, float]:
    def integrand(u: float) -> complex:
        return math.exp(-u * tau) * jump(u)

    options = {"epsabs": 1e-13, "epsrel": 1e-10, "limit": 500}
    near, near_err = quad_complex(integrand, 0.0, split, **options)
    far, far_err = quad_complex(integrand, split, reach, **options)
    return near + far, near_err + far_err


def asymptotic_phi(params: ModelParams, t: float, order: int = 1) -> complex:
    """Long-time expansion of Phi_BC through the requested order (1 or 2)."""
    if order not in (1, 2):
        raise ConfigError(f"order must be 1 or 2, got {order!r}", code="INVALID_ARGUMENT")
    if t <= 0:
        raise ConfigError(f"asymptotic_phi needs t > 0, got {t!r}", code="INVALID_ARGUMENT")
    regime = classify_regime(params)
    tau = to_dimensionless(t, params)
    a = params.omega0_ratio
    phase = cmath.exp(1j * a * tau)

    if regime is Regime.MASSIVE_NOCUT:
        mu = params.mass_ratio
        value = -(math.cos(mu * tau) + math.sin(mu * tau)) / (
            2.0 * math.pi**1.5 * math.sqrt(mu) * tau**1.5
        )
        if order == 2:
            c = math.sqrt(2.0) / (4.0 * math.pi**1.5 * math.sqrt(mu))
            theta = mu * tau - 0.25 * math.pi
            beta_up = 5.0 / (4.0 * mu) - ((mu + a) ** 2 + 4.0 * math.pi**2) / (2.0 * math.pi**2 * mu)
            beta_low = 5.0 / (4.0 * mu) - ((mu - a) ** 2 + 4.0 * math.pi**2) / (2.0 * math.pi**2 * mu)
            value -= (
                c
                * tau**-2.5
                * 1.5j
                * (beta_up * cmath.exp(1j * theta) - beta_low * cmath.exp(-1j * theta))
            )
        return phase * value

    if regime is Regime.MASSLESS_CUT:
        lam = float(params.cutoff_ratio)
        s = math.sin(lam * tau)
        value = -4.0 * s / ((a - 2j * math.pi) * (a - 6j * math.pi) * tau)
        if order == 2:
            slope = -(1.0 - 4.0 / lam) * (
                1.0 / (1j * a + 2.0 * math.pi) ** 2 - 1.0 / (1j * a + 6.0 * math.pi) ** 2
            )
            value -= s * slope / (math.pi * tau**2)
        return phase * value

    if regime is Regime.MASSLESS_NOCUT:
        raise ConfigError(
            "massive long-time expansion diverges at m = 0", code="REGIME_MISMATCH"
        )
    raise ConfigError(
        f"no long-time expansion for regime {regime.value}", code="REGIME_MISMATCH"
    )
