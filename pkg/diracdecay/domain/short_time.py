"""Short-time survival expansions and the Zeno time."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import math

import numpy as np

from ..errors import ConfigError
from ..types import RealArray
from .kernel import kernel_taylor_coefficients, local_decay_rate
from .model import ModelParams, Regime, classify_regime


class SeriesForm(Enum):
    PRINTED = "PRINTED"
    KERNEL_MOMENTS = "KERNEL_MOMENTS"


@dataclass(frozen=True)
class SeriesTerm:
    """rational * pi**pi_power * a**a_power * mu**mu_power * L**lam_power."""

    rational: Fraction
    pi_power: int = 0
    a_power: int = 0
    mu_power: int = 0
    lam_power: int = 0

    def value(self, params: ModelParams) -> float:
        out = float(self.rational) * math.pi**self.pi_power
        if self.a_power:
            out *= params.omega0_ratio**self.a_power
        if self.mu_power:
            out *= params.mass_ratio**self.mu_power
        if self.lam_power:
            out *= float(params.cutoff_ratio) ** self.lam_power
        return out


@dataclass(frozen=True)
class ShortTimeSeries:
    """P(tau) = sum_k c_k tau^k; `terms[k]` or `numeric[k]` holds c_k."""

    regime: Regime
    form: SeriesForm
    terms: tuple[tuple[SeriesTerm, ...], ...] = ()
    numeric: tuple[float, ...] = ()

    @property
    def max_order(self) -> int:
        return max(len(self.terms), len(self.numeric)) - 1

    def coefficients(self, params: ModelParams) -> list[float]:
        if self.numeric:
            return list(self.numeric)
        return [sum(term.value(params) for term in power) for power in self.terms]

    def evaluate(self, t: float | RealArray, params: ModelParams, order: int | None = None) -> float | RealArray:
        """Truncated series at physical time(s) t, keeping powers <= order."""
        coeffs = self.coefficients(params)
        if order is not None:
            coeffs = coeffs[: order + 1]
        tau = np.asarray(t, dtype=float) * (params.g2 / params.hbar)
        # np.polyval wants highest power first
        values = np.polyval(coeffs[::-1], tau)
        return float(values) if np.ndim(values) == 0 else values


_ONE = (SeriesTerm(Fraction(1)),)

_NOCUT_TERMS = (
    _ONE,
    (SeriesTerm(Fraction(-4), pi_power=1),),
    (SeriesTerm(Fraction(8), pi_power=2),),
    (SeriesTerm(Fraction(1, 3), pi_power=1, mu_power=2), SeriesTerm(Fraction(-32, 3), pi_power=3)),
)

_CUT_TERMS = (
    _ONE,
    (),
    (SeriesTerm(Fraction(-4), lam_power=1),),
    (),
    (
        SeriesTerm(Fraction(8), lam_power=2),
        SeriesTerm(Fraction(1, 9), lam_power=3),
        SeriesTerm(Fraction(1, 3), a_power=2, lam_power=1),
    ),
)


def survival_series(params: ModelParams) -> ShortTimeSeries:
    """Published short-time coefficients; GENERAL falls back to kernel moments."""
    regime = classify_regime(params)
    if regime in (Regime.MASSLESS_NOCUT, Regime.MASSIVE_NOCUT):
        return ShortTimeSeries(regime, SeriesForm.PRINTED, terms=_NOCUT_TERMS)
    if regime is Regime.MASSLESS_CUT:
        return ShortTimeSeries(regime, SeriesForm.PRINTED, terms=_CUT_TERMS)
    return exact_survival_series(params, order=4)


def amplitude_taylor_coefficients(params: ModelParams, order: int) -> list[complex]:
    """Phi(t) = sum_N c_N t^N (physical t) from the kernel's Taylor series."""
    if order < 0:
        raise ConfigError(f"order must be >= 0, got {order!r}", code="INVALID_ARGUMENT")
    gamma = local_decay_rate(params)
    kernel = kernel_taylor_coefficients(params, max(order, 1))
    amp = [0j] * (order + 1)
    amp[0] = 1.0 + 0j
    for n in range(order):
        memory = 0j
        # t^n coefficient of int_0^t K(t-s) Phi(s) ds
        for j in range(n):
            k = n - 1 - j
            memory += kernel[j] * amp[k] * math.factorial(j) * math.factorial(k) / math.factorial(n)
        amp[n + 1] = (-gamma * amp[n] + memory) / (n + 1)
    return amp


def exact_survival_series(params: ModelParams, order: int = 4) -> ShortTimeSeries:
    amp = amplitude_taylor_coefficients(params, order)
    scale = params.hbar / params.g2
    coeffs = []
    for n in range(order + 1):
        p_n = sum(amp[i] * amp[n - i].conjugate() for i in range(n + 1)).real
        coeffs.append(p_n * scale**n)
    return ShortTimeSeries(classify_regime(params), SeriesForm.KERNEL_MOMENTS, numeric=tuple(coeffs))


def zeno_time(params: ModelParams) -> float:
    if params.infinite_cutoff:
        raise ConfigError("no Zeno time without a momentum cutoff", code="REGIME_MISMATCH")
    return params.hbar / (2.0 * abs(params.g) * math.sqrt(params.cutoff_value))


def quadratic_approximation(params: ModelParams, t: float | RealArray) -> float | RealArray:
    if params.infinite_cutoff:
        raise ConfigError("quadratic decay needs a momentum cutoff", code="REGIME_MISMATCH")
    tau = np.asarray(t, dtype=float) * (params.g2 / params.hbar)
    values = 1.0 - 4.0 * float(params.cutoff_ratio) * tau**2
    return float(values) if np.ndim(values) == 0 else values


def series_phi(params: ModelParams, t: float, order: int = 6) -> complex:
    """Truncated Taylor series of the amplitude itself (interaction picture)."""
    if t < 0:
        raise ConfigError(f"time must be >= 0, got {t!r}")
    return complex(np.polyval(amplitude_taylor_coefficients(params, order)[::-1], t))
