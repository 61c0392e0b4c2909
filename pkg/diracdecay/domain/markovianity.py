"""Markovianity diagnostics.

Mental model refresher:
- Semigroup test: a Markovian amplitude composes, phi(t - s) phi(s) = phi(t).
  The deviation is the same in either picture since the phase factors cancel.
- GKSL reference: a Lindblad generator only ever produces sums of
  (polynomially dressed) exponentials, so its log-log slopes drift with the
  window while a true power law keeps a fixed slope.
- Zeno protocol: n projective checks during t give Q(t/n)^n.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Sequence

import numpy as np
from scipy import linalg, stats
from scipy.interpolate import CubicSpline

from ..errors import ConfigError, NumericalError
from ..types import ComplexArray, RealArray, SurvivalFn
from .model import ComplexSeries, ModelParams
from .volterra import Scheme, VolterraConfig, solve_volterra

MIN_SEMIGROUP_POINTS = 256
_DEFECTIVE_CONDITION = 1e10


@dataclass(frozen=True)
class SemigroupReport:
    t: float
    max_deviation: float
    n_points: int
    worst_s: float


def _amplitude_interpolant(series: ComplexSeries):
    t = series.grid.points
    modulus = CubicSpline(t, np.abs(series.values))
    phase = CubicSpline(t, np.unwrap(np.angle(series.values)))

    def evaluate(s: RealArray) -> ComplexArray:
        return modulus(s) * np.exp(1j * phase(s))

    return evaluate


def semigroup_deviation(
    amplitude: ComplexSeries, t: float, n_points: int = MIN_SEMIGROUP_POINTS
) -> SemigroupReport:
    points = amplitude.grid.points
    if t <= 0:
        raise ConfigError(f"t must be > 0, got {t!r}", code="INVALID_ARGUMENT")
    if points.size < 4 or points[0] > 0 or points[-1] < t:
        raise ConfigError(
            f"series on [{points[0]:.4g}, {points[-1]:.4g}] does not cover [0, {t}]",
            code="INVALID_ARGUMENT",
        )
    n_points = max(n_points, MIN_SEMIGROUP_POINTS)
    phi = _amplitude_interpolant(amplitude)
    s = np.linspace(0.0, t, n_points + 2)[1:-1]
    deviation = np.abs(phi(np.array([t]))[0] - phi(s) * phi(t - s))
    worst = int(np.argmax(deviation))
    return SemigroupReport(
        t=float(t), max_deviation=float(deviation[worst]), n_points=n_points, worst_s=float(s[worst])
    )


@dataclass(frozen=True)
class GkslRates:
    """P(t) = Re sum_i (sum_k weights[i][k] t^k) exp(eigenvalues[i] t)."""

    eigenvalues: tuple[complex, ...]
    weights: tuple[tuple[complex, ...], ...]
    diagonalizable: bool = True

    def __post_init__(self) -> None:
        if len(self.eigenvalues) != len(self.weights) or not self.eigenvalues:
            raise ConfigError("need one weight polynomial per eigenvalue")
        if any(not poly for poly in self.weights):
            raise ConfigError("weight polynomials must not be empty")
        if any(complex(lam).real > 1e-12 for lam in self.eigenvalues):
            raise ConfigError("eigenvalues must have non-positive real parts")
        if self.diagonalizable and any(len(poly) > 1 for poly in self.weights):
            raise ConfigError("polynomial prefactors need diagonalizable=False")
        total = sum(complex(poly[0]) for poly in self.weights)
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"weights sum to {total!r} at t = 0, expected 1")
        for lam, poly in zip(self.eigenvalues, self.weights):
            lam = complex(lam)
            if abs(lam.imag) <= 1e-12:
                continue
            partner = any(
                abs(complex(other) - lam.conjugate()) <= 1e-9 * (1.0 + abs(lam))
                and len(other_poly) == len(poly)
                and all(
                    abs(complex(b) - complex(c).conjugate()) <= 1e-9 * (1.0 + abs(c))
                    for b, c in zip(other_poly, poly)
                )
                for other, other_poly in zip(self.eigenvalues, self.weights)
            )
            if not partner:
                raise ConfigError(f"eigenvalue {lam!r} lacks its conjugate partner")


def gksl_reference_survival(rates: GkslRates, t_grid: RealArray | Sequence[float]) -> RealArray:
    t = np.asarray(t_grid, dtype=float)
    total = np.zeros(t.shape, dtype=complex)
    for lam, poly in zip(rates.eigenvalues, rates.weights):
        prefactor = np.polyval(np.asarray(poly, dtype=complex)[::-1], t)
        total += prefactor * np.exp(complex(lam) * t)
    return total.real


def amplitude_damping_liouvillian(gamma: float, omega: float) -> ComplexArray:
    """Column-stacked generator; basis index 0 is the excited state."""
    if gamma < 0:
        raise ConfigError(f"gamma must be >= 0, got {gamma!r}")
    identity = np.eye(2)
    hamiltonian = np.diag([0.5 * omega, -0.5 * omega]).astype(complex)
    jump = math.sqrt(gamma) * np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    decay = jump.conj().T @ jump
    return (
        -1j * (np.kron(identity, hamiltonian) - np.kron(hamiltonian.T, identity))
        + np.kron(jump.conj(), jump)
        - 0.5 * np.kron(identity, decay)
        - 0.5 * np.kron(decay.T, identity)
    )


def _excited_projector() -> ComplexArray:
    return np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)


def gksl_modes(liouvillian: ComplexArray) -> GkslRates:
    """Eigen-decomposition of the excited population starting from the excited state."""
    eigenvalues, right = linalg.eig(liouvillian)
    if np.linalg.cond(right) > _DEFECTIVE_CONDITION:
        raise NumericalError("generator is defective; Jordan weights need an explicit form")
    start = _excited_projector()
    coefficients = linalg.solve(right, start)
    weights = right[0, :] * coefficients
    keep = np.abs(weights) > 1e-14
    return GkslRates(
        eigenvalues=tuple(complex(lam) for lam in eigenvalues[keep]),
        weights=tuple((complex(c),) for c in weights[keep]),
        diagonalizable=True,
    )


def gksl_survival_expm(liouvillian: ComplexArray, t_grid: RealArray | Sequence[float]) -> RealArray:
    start = _excited_projector()
    return np.array([(linalg.expm(liouvillian * t) @ start)[0].real for t in np.asarray(t_grid, dtype=float)])


def window_slopes(
    t: RealArray, p: RealArray, windows: Sequence[tuple[float, float]]
) -> list[float]:
    """log-log slope of P per window; stable for power laws, drifting otherwise."""
    t = np.asarray(t, dtype=float)
    p = np.asarray(p, dtype=float)
    slopes = []
    for low, high in windows:
        mask = (t >= low) & (t <= high) & (p > 0)
        if np.count_nonzero(mask) < 2:
            raise ConfigError(f"window [{low}, {high}] holds fewer than 2 points", code="INVALID_ARGUMENT")
        slopes.append(float(stats.linregress(np.log(t[mask]), np.log(p[mask])).slope))
    return slopes


def _volterra_survival(params: ModelParams) -> SurvivalFn:
    def survival(t: float) -> float:
        fastest = max(params.omega0, params.m, 0.0 if params.infinite_cutoff else params.cutoff_value)
        n_steps = max(64, math.ceil(10.0 * fastest * t / params.hbar))
        n_steps += n_steps % 2
        cfg = VolterraConfig(dt=t / n_steps, t_max=t, scheme=Scheme.SIMPSON)
        return float(solve_volterra(params, cfg).probability[-1])

    return survival


def zeno_protocol(
    params: ModelParams, t_total: float, n_measurements: int, survival: SurvivalFn | None = None
) -> float:
    if t_total <= 0:
        raise ConfigError(f"t_total must be > 0, got {t_total!r}", code="INVALID_ARGUMENT")
    if int(n_measurements) != n_measurements or n_measurements < 1:
        raise ConfigError(f"n_measurements must be an integer >= 1, got {n_measurements!r}", code="INVALID_ARGUMENT")
    survival = survival or _volterra_survival(params)
    q = survival(t_total / n_measurements)
    return float(q ** int(n_measurements))
