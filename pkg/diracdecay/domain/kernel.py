"""Memory kernel K(t) of the exact amplitude equation.

Mental model refresher:
- K(t) = -(2 g^2 / hbar^2) exp(i omega0 t / hbar) int_{-L}^{L} cos(omega_p t / hbar) dp.
- With an infinite cutoff the momentum integral carries a delta at t = 0.
  That part is never sampled; it is exposed as `local_decay_rate` and the
  solvers apply it as an instantaneous decay rate.
- Everything returned by `kernel_eval` / `kernel_grid` is the regular part.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from scipy import integrate, special

from ..errors import ConfigError, ToleranceError
from ..types import ComplexArray, RealArray
from .model import ModelParams, Regime, classify_regime
from .quadrature import gauss_legendre_panels, panels_for_phase

_QUAD_EPSREL = 1e-10
_MAX_PANELS = 20_000
_GRID_CHUNK = 2048


class KernelForm(Enum):
    CLOSED_DELTA = "CLOSED_DELTA"
    CLOSED_BESSEL = "CLOSED_BESSEL"
    CLOSED_SINC = "CLOSED_SINC"
    QUADRATURE = "QUADRATURE"


_CLOSED_FORM_BY_REGIME = {
    Regime.MASSLESS_NOCUT: KernelForm.CLOSED_DELTA,
    Regime.MASSIVE_NOCUT: KernelForm.CLOSED_BESSEL,
    Regime.MASSLESS_CUT: KernelForm.CLOSED_SINC,
}


@dataclass(frozen=True)
class KernelSpec:
    params: ModelParams
    form: KernelForm

    def __post_init__(self) -> None:
        regime = classify_regime(self.params)
        if self.form is KernelForm.QUADRATURE:
            if self.params.infinite_cutoff:
                raise ConfigError(
                    "QUADRATURE kernel needs a finite cutoff", code="REGIME_MISMATCH"
                )
            return
        if _CLOSED_FORM_BY_REGIME.get(regime) is not self.form:
            raise ConfigError(
                f"{self.form.value} kernel does not describe regime {regime.value}",
                code="REGIME_MISMATCH",
            )


def default_kernel_spec(params: ModelParams) -> KernelSpec:
    form = _CLOSED_FORM_BY_REGIME.get(classify_regime(params), KernelForm.QUADRATURE)
    return KernelSpec(params, form)


def local_decay_rate(params: ModelParams) -> float:
    """Rate carried by the delta part of the kernel (zero for a finite cutoff)."""
    if params.infinite_cutoff:
        return 2.0 * math.pi * params.g2 / params.hbar
    return 0.0


def kernel_eval(spec: KernelSpec, t: float) -> complex:
    if t <= 0:
        raise ConfigError(f"kernel_eval needs t > 0, got {t!r}", code="INVALID_ARGUMENT")
    if spec.form is KernelForm.QUADRATURE:
        params = spec.params
        phase = np.exp(1j * params.omega0 * t / params.hbar)
        prefactor = -2.0 * params.g2 / params.hbar**2
        return complex(prefactor * phase * _momentum_integral(params, t))
    return complex(kernel_grid(spec, np.array([t]))[0])


def kernel_grid(spec: KernelSpec, u: RealArray) -> ComplexArray:
    """Regular part of K on an array of lags u >= 0 (u = 0 gives the limit)."""
    params = spec.params
    u = np.asarray(u, dtype=float)
    hbar = params.hbar
    phase = np.exp(1j * params.omega0 * u / hbar)

    if spec.form is KernelForm.CLOSED_DELTA:
        return np.zeros(u.shape, dtype=complex)
    if spec.form is KernelForm.CLOSED_BESSEL:
        m = params.m
        return (2.0 * math.pi * params.g2 / hbar**2) * phase * m * special.j1(m * u / hbar)
    if spec.form is KernelForm.CLOSED_SINC:
        lam = params.cutoff_value
        # sin(lam u / hbar) / u with the u -> 0 limit lam / hbar
        sinc = (lam / hbar) * np.sinc(lam * u / (math.pi * hbar))
        return -(4.0 * params.g2 / hbar) * phase * sinc

    return -(2.0 * params.g2 / hbar**2) * phase * _momentum_integral_grid(params, u)


def kernel_double_integral(spec: KernelSpec, t: float) -> complex:
    """int_0^t ds int_0^{t-s} du K(u), delta part included."""
    if t < 0:
        raise ConfigError(f"t must be >= 0, got {t!r}", code="INVALID_ARGUMENT")
    if t == 0:
        return 0j
    params = spec.params
    delta_part = -local_decay_rate(params) * t

    if spec.form is KernelForm.CLOSED_DELTA:
        return complex(delta_part)

    fastest = max(params.omega0, params.m, 0.0 if params.infinite_cutoff else params.cutoff_value)
    n_panels = panels_for_phase(fastest * t / params.hbar, max_phase=1.0, minimum=4)
    nodes, weights = gauss_legendre_panels(0.0, t, n_panels, order=16)
    regular = np.sum(weights * (t - nodes) * kernel_grid(spec, nodes))
    return complex(delta_part + regular)


def kernel_taylor_coefficients(params: ModelParams, n_terms: int) -> list[complex]:
    """Coefficients k_j of the regular kernel, K(u) = sum_j k_j u^j (physical u)."""
    if n_terms <= 0:
        return []
    hbar = params.hbar
    regime = classify_regime(params)
    if regime is Regime.MASSLESS_NOCUT:
        return [0j] * n_terms

    # series of the real momentum part C(u), then multiplied by exp(i omega0 u / hbar)
    real_part = [0.0] * n_terms
    if params.infinite_cutoff:
        m = params.m
        scale = 2.0 * math.pi * params.g2 / hbar**2
        for k in range((n_terms + 1) // 2):
            power = 2 * k + 1
            if power >= n_terms:
                break
            real_part[power] = (
                scale
                * (-1) ** k
                * m ** (2 * k + 2)
                / (hbar**power * 2**power * math.factorial(k) * math.factorial(k + 1))
            )
    else:
        scale = -2.0 * params.g2 / hbar**2
        for n in range((n_terms + 1) // 2):
            power = 2 * n
            if power >= n_terms:
                break
            real_part[power] = (
                scale
                * (-1) ** n
                * _momentum_moment(params, n)
                / (hbar**power * math.factorial(power))
            )

    rotation = [(1j * params.omega0 / hbar) ** j / math.factorial(j) for j in range(n_terms)]
    return [
        sum(real_part[i] * rotation[j - i] for i in range(j + 1)) for j in range(n_terms)
    ]


def _momentum_moment(params: ModelParams, n: int) -> float:
    """int_{-L}^{L} (p^2 + m^2)^n dp."""
    lam = params.cutoff_value
    m2 = params.m**2
    return 2.0 * sum(
        math.comb(n, k) * m2 ** (n - k) * lam ** (2 * k + 1) / (2 * k + 1)
        for k in range(n + 1)
    )


def _momentum_integral(params: ModelParams, t: float) -> float:
    """int_{-L}^{L} cos(omega_p t / hbar) dp, split at the zeros of the cosine."""
    lam = params.cutoff_value
    m = params.m
    hbar = params.hbar
    omega_max = math.hypot(lam, m)

    k_first = max(0, math.ceil((m * t / (math.pi * hbar)) - 0.5))
    k_last = math.floor((omega_max * t / (math.pi * hbar)) - 0.5)
    if k_last - k_first + 2 > _MAX_PANELS:
        raise ToleranceError(
            f"momentum quadrature needs more than {_MAX_PANELS} panels at t={t!r}",
            code="QUADRATURE_TOLERANCE",
        )

    breaks = [0.0]
    for k in range(k_first, k_last + 1):
        omega_k = (k + 0.5) * math.pi * hbar / t
        if omega_k <= m:
            continue
        p_k = math.sqrt(omega_k**2 - m**2)
        if 0.0 < p_k < lam:
            breaks.append(p_k)
    breaks.append(lam)

    def integrand(p: float) -> float:
        return math.cos(math.hypot(p, m) * t / hbar)

    total = 0.0
    total_err = 0.0
    scale = 0.0
    for left, right in zip(breaks[:-1], breaks[1:]):
        value, err = integrate.quad(integrand, left, right, epsabs=0.0, epsrel=_QUAD_EPSREL, limit=200)
        total += value
        total_err += err
        scale += abs(value)
    if total_err > 1e-8 * max(scale, 1e-300):
        raise ToleranceError(
            f"momentum quadrature error {total_err:.3e} above tolerance at t={t!r}",
            code="QUADRATURE_TOLERANCE",
        )
    return 2.0 * total


def _momentum_integral_grid(params: ModelParams, u: RealArray) -> RealArray:
    lam = params.cutoff_value
    m = params.m
    hbar = params.hbar
    u_max = float(np.max(u)) if u.size else 0.0
    span = (math.hypot(lam, m) - m) * u_max / hbar
    n_panels = panels_for_phase(span, max_phase=3.0, minimum=4)
    nodes, weights = gauss_legendre_panels(0.0, lam, n_panels, order=16)
    omega = np.hypot(nodes, m) / hbar

    flat = u.reshape(-1)
    out = np.empty(flat.shape, dtype=float)
    for start in range(0, flat.size, _GRID_CHUNK):
        block = flat[start : start + _GRID_CHUNK]
        out[start : start + _GRID_CHUNK] = 2.0 * np.cos(np.outer(block, omega)) @ weights
    return out.reshape(u.shape)
