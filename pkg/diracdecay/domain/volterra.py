"""Time-domain solvers for the survival amplitude.

Mental model refresher:
- dPhi/dt = -gamma Phi(t) + int_0^t K(t - s) Phi(s) ds, Phi(0) = 1.
- gamma is the local (delta) part of the kernel, handled exactly by an
  exponential integrator; the regular convolution uses the trapezoid rule.
- Every solve runs at h and h/2 (and 2h when the grid allows it); the spread
  between them is the reported error, and SIMPSON returns the extrapolated
  fourth-order values.
- `propagate_discretized` is the independent oracle: a finite matrix model
  whose survival amplitude converges to the same Phi as the mode count grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np
from scipy import linalg

from ..errors import ConfigError, ConvergenceError, ToleranceError
from ..types import ComplexArray, RealArray
from .kernel import KernelSpec, default_kernel_spec, kernel_grid, local_decay_rate
from .model import ComplexSeries, ModelParams, Picture, Scaling, TimeGrid, _step_count
from .quadrature import gauss_legendre_panels

MAX_PHASE_PER_STEP = 0.2
NORM_DRIFT_TOLERANCE = 1e-6
_PHI2_SERIES_BELOW = 1e-2


class Scheme(Enum):
    TRAPEZOID = "TRAPEZOID"
    SIMPSON = "SIMPSON"


@dataclass(frozen=True)
class VolterraConfig:
    dt: float
    t_max: float
    scheme: Scheme = Scheme.SIMPSON

    def __post_init__(self) -> None:
        n_steps = _step_count(self.t_max, self.dt)
        if self.scheme is Scheme.SIMPSON and n_steps % 2:
            raise ConfigError(
                "SIMPSON needs an even number of steps (t_max / dt)", code="STEP_SIZE"
            )

    @property
    def n_steps(self) -> int:
        return _step_count(self.t_max, self.dt)

    def check_step(self, params: ModelParams) -> None:
        fastest = max(params.omega0, params.m)
        if not params.infinite_cutoff:
            fastest = max(fastest, params.cutoff_value)
        phase = self.dt * fastest / params.hbar
        if phase > MAX_PHASE_PER_STEP:
            raise ConfigError(
                f"dt={self.dt!r} resolves phase {phase:.3f} per step, above {MAX_PHASE_PER_STEP}",
                code="STEP_SIZE",
            )


@dataclass(frozen=True, eq=False)
class DiscretizedField:
    """Mode amplitudes of the matrix model; field arrays are (n_times, n_momenta)."""

    grid: TimeGrid
    p_grid: RealArray
    weights: RealArray
    particle: ComplexArray
    antiparticle: ComplexArray
    phi: ComplexArray

    def norm(self) -> RealArray:
        field = (np.abs(self.particle) ** 2 + np.abs(self.antiparticle) ** 2) @ self.weights
        return np.abs(self.phi) ** 2 + field


def solve_volterra(
    params: ModelParams, cfg: VolterraConfig, spec: KernelSpec | None = None
) -> ComplexSeries:
    """Interaction-picture Phi on the uniform grid 0, dt, ..., t_max."""
    cfg.check_step(params)
    spec = spec or default_kernel_spec(params)
    n = cfg.n_steps
    h = cfg.dt

    fine = _exponential_trapezoid(params, spec, h / 2.0, 2 * n)[::2]
    base = _exponential_trapezoid(params, spec, h, n)
    coarse = _exponential_trapezoid(params, spec, 2.0 * h, n // 2) if n % 2 == 0 and n >= 2 else None

    values, error = richardson_error(base, fine, coarse, cfg.scheme)

    grid = TimeGrid(h * np.arange(n + 1), Scaling.PHYSICAL)
    return ComplexSeries(
        grid=grid,
        values=values,
        picture=Picture.INTERACTION,
        error=float(error),
        method=f"volterra-{cfg.scheme.value.lower()}",
    )


def richardson_error(
    base: ComplexArray,
    fine: ComplexArray,
    coarse: ComplexArray | None,
    scheme: Scheme,
) -> tuple[ComplexArray, float]:
    """Values and error estimate from trapezoid runs at h, h/2 (sampled on h) and 2h."""
    diff_fine = float(np.max(np.abs(base - fine)))
    if coarse is not None:
        diff_coarse = float(np.max(np.abs(base[::2] - coarse)))
        if diff_fine > 1e-12 and diff_fine >= diff_coarse:
            raise ConvergenceError(
                f"step halving did not reduce the error ({diff_coarse:.3e} -> {diff_fine:.3e})"
            )

    if scheme is Scheme.TRAPEZOID:
        return base, 4.0 * diff_fine / 3.0

    values = (4.0 * fine - base) / 3.0
    if coarse is not None:
        previous = (4.0 * base[::2] - coarse) / 3.0
        error = float(np.max(np.abs(values[::2] - previous))) / 15.0
    else:
        error = diff_fine / 3.0
    return values, max(error, 1e-15)


def _phi_functions(x: float) -> tuple[float, float]:
    if x == 0:
        return 1.0, 0.5
    phi1 = -math.expm1(-x) / x
    if x < _PHI2_SERIES_BELOW:
        phi2 = 0.5 - x / 6.0 + x * x / 24.0 - x**3 / 120.0
    else:
        phi2 = (x - 1.0 + math.exp(-x)) / (x * x)
    return phi1, phi2


def _exponential_trapezoid(
    params: ModelParams, spec: KernelSpec, h: float, n: int
) -> ComplexArray:
    kernel = kernel_grid(spec, h * np.arange(n + 1))
    gamma = local_decay_rate(params)
    x = gamma * h
    decay = math.exp(-x)
    phi1, phi2 = _phi_functions(x)

    values = np.zeros(n + 1, dtype=complex)
    values[0] = 1.0
    memory = 0j
    denominator = 1.0 - 0.5 * h * h * phi2 * kernel[0]
    for step in range(n):
        history = h * (
            0.5 * kernel[step + 1] * values[0]
            + np.dot(kernel[step:0:-1], values[1 : step + 1])
        )
        explicit = decay * values[step] + h * (phi1 - phi2) * memory
        values[step + 1] = (explicit + h * phi2 * history) / denominator
        memory = history + 0.5 * h * kernel[0] * values[step + 1]
    return values


def momentum_grid(params: ModelParams, n_modes: int) -> tuple[RealArray, RealArray]:
    """Symmetric composite Gauss-Legendre grid over [-lambda_eff, lambda_eff]."""
    if n_modes < 2:
        raise ConfigError(f"n_modes must be >= 2, got {n_modes!r}", code="INVALID_ARGUMENT")
    if params.infinite_cutoff:
        span = max(50.0 * params.g2, 20.0 * params.m, 20.0 * params.omega0)
    else:
        span = params.cutoff_value
    half = n_modes // 2
    order = min(8, max(1, half))
    n_panels = max(1, math.ceil(half / order))
    nodes, weights = gauss_legendre_panels(0.0, span, n_panels, order=order)
    p_grid = np.concatenate([-nodes[::-1], nodes])
    w_grid = np.concatenate([weights[::-1], weights])
    return p_grid, w_grid


def propagate_discretized(
    params: ModelParams,
    n_modes: int,
    cfg: VolterraConfig | None = None,
    times: RealArray | None = None,
    keep_field: bool = False,
) -> tuple[ComplexSeries, DiscretizedField | None]:
    p_grid, weights = momentum_grid(params, n_modes)
    n_p = p_grid.size
    omega_p = np.hypot(p_grid, params.m)
    coupling = params.g * np.sqrt(weights)

    # index 0 is the two-level system; particle modes then antiparticle modes
    dim = 2 * n_p + 1
    hamiltonian = np.zeros((dim, dim))
    hamiltonian[0, 0] = params.omega0
    hamiltonian[1 : n_p + 1, 1 : n_p + 1][np.diag_indices(n_p)] = omega_p
    hamiltonian[n_p + 1 :, n_p + 1 :][np.diag_indices(n_p)] = -omega_p
    hamiltonian[0, 1:] = np.concatenate([coupling, coupling])
    hamiltonian[1:, 0] = hamiltonian[0, 1:]

    energies, vectors = linalg.eigh(hamiltonian)

    if times is not None:
        t = np.asarray(times, dtype=float)
    elif cfg is not None:
        t = cfg.dt * np.arange(cfg.n_steps + 1)
    else:
        raise ConfigError("propagate_discretized needs cfg or explicit times", code="INVALID_ARGUMENT")
    grid = TimeGrid(t, Scaling.PHYSICAL)
    propagator = np.exp(-1j * np.outer(grid.points, energies) / params.hbar)

    overlap = vectors[0, :]
    phi = propagator @ (overlap * overlap)
    interaction = phi * np.exp(1j * params.omega0 * grid.points / params.hbar)

    field: DiscretizedField | None = None
    if keep_field:
        states = (propagator * overlap[None, :]) @ vectors.T
        scale = 1.0 / np.sqrt(weights)
        field = DiscretizedField(
            grid=grid,
            p_grid=p_grid,
            weights=weights,
            particle=states[:, 1 : n_p + 1] * scale[None, :],
            antiparticle=states[:, n_p + 1 :] * scale[None, :],
            phi=states[:, 0],
        )
        drift = float(np.max(np.abs(field.norm() - 1.0)))
    else:
        drift = float(abs(np.sum(overlap * overlap) - 1.0))
    if drift > NORM_DRIFT_TOLERANCE:
        raise ToleranceError(f"norm drift {drift:.3e} in the matrix model", code="NORM_DRIFT")

    series = ComplexSeries(
        grid=grid,
        values=interaction,
        picture=Picture.INTERACTION,
        error=0.0,
        method=f"discretized-{n_p}",
    )
    return series, field
