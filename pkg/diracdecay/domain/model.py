"""Physical parameters, regimes, unit scalings and the shared grid types.

Mental model refresher:
- `ModelParams` is the single source of truth for every computation; all
  derived dimensionless ratios are computed from it, never passed around.
- Dimensionless time is tau = g^2 t / hbar; dimensionless energies are in
  units of g^2 (a = omega0/g^2, mu = m/g^2, L = lambda/g^2).
- `ComplexSeries` holds Phi(t) (interaction picture) or phi(t)
  (Schrodinger picture); Phi = exp(i omega0 t / hbar) phi.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
import math
from typing import Any, Mapping

import numpy as np

from ..errors import ConfigError
from ..types import ComplexArray, RealArray


class Cutoff(Enum):
    INFINITE = "inf"


INFINITE = Cutoff.INFINITE


class Regime(Enum):
    MASSLESS_NOCUT = "MASSLESS_NOCUT"
    MASSIVE_NOCUT = "MASSIVE_NOCUT"
    MASSLESS_CUT = "MASSLESS_CUT"
    GENERAL = "GENERAL"


class Scaling(Enum):
    PHYSICAL = "PHYSICAL"
    DIMENSIONLESS = "DIMENSIONLESS"


class Picture(Enum):
    INTERACTION = "INTERACTION"
    SCHRODINGER = "SCHRODINGER"


@dataclass(frozen=True)
class ModelParams:
    omega0: float
    g: float
    m: float = 0.0
    lam: float | Cutoff = INFINITE
    hbar: float = 1.0

    def __post_init__(self) -> None:
        omega0 = _as_finite_float(self.omega0, "omega0")
        g = _as_finite_float(self.g, "g")
        m = _as_finite_float(self.m, "m")
        hbar = _as_finite_float(self.hbar, "hbar")
        if omega0 <= 0:
            raise ConfigError(f"omega0 must be > 0, got {omega0!r}")
        if g == 0:
            raise ConfigError("g must be nonzero")
        if m < 0:
            raise ConfigError(f"m must be >= 0, got {m!r}")
        if hbar <= 0:
            raise ConfigError(f"hbar must be > 0, got {hbar!r}")

        lam: float | Cutoff
        if self.lam is INFINITE:
            lam = INFINITE
        else:
            lam = _as_finite_float(self.lam, "lambda")
            if lam <= 0:
                raise ConfigError(f"lambda must be > 0 or INFINITE, got {lam!r}")

        object.__setattr__(self, "omega0", omega0)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "lam", lam)

    @property
    def infinite_cutoff(self) -> bool:
        return self.lam is INFINITE

    @property
    def g2(self) -> float:
        return self.g * self.g

    @property
    def omega0_ratio(self) -> float:
        return self.omega0 / self.g2

    @property
    def mass_ratio(self) -> float:
        return self.m / self.g2

    @property
    def cutoff_ratio(self) -> float | None:
        """Lambda/g^2, or None for an infinite cutoff."""
        if self.lam is INFINITE:
            return None
        return float(self.lam) / self.g2

    @property
    def cutoff_value(self) -> float:
        if self.lam is INFINITE:
            raise ConfigError("finite cutoff required", code="REGIME_MISMATCH")
        return float(self.lam)

    def with_overrides(self, **changes: Any) -> ModelParams:
        return replace(self, **changes)

    def as_header(self) -> dict[str, str]:
        return {
            "omega0": repr(self.omega0),
            "g": repr(self.g),
            "m": repr(self.m),
            "lambda": "inf" if self.lam is INFINITE else repr(self.lam),
            "hbar": repr(self.hbar),
        }


def classify_regime(params: ModelParams) -> Regime:
    massless = params.m == 0
    if params.infinite_cutoff:
        return Regime.MASSLESS_NOCUT if massless else Regime.MASSIVE_NOCUT
    return Regime.MASSLESS_CUT if massless else Regime.GENERAL


def to_dimensionless(t: float, params: ModelParams) -> float:
    if t < 0:
        raise ConfigError(f"time must be >= 0, got {t!r}")
    return t * (params.g2 / params.hbar)


def to_physical(tau: float, params: ModelParams) -> float:
    if tau < 0:
        raise ConfigError(f"dimensionless time must be >= 0, got {tau!r}")
    return tau * (params.hbar / params.g2)


def markovian_phi(params: ModelParams, t: float | RealArray) -> complex | ComplexArray:
    """Closed-form Phi(t) = exp(-2 pi g^2 t / hbar) of the massless no-cutoff bath."""
    if classify_regime(params) is not Regime.MASSLESS_NOCUT:
        raise ConfigError(
            "closed-form amplitude exists only for MASSLESS_NOCUT",
            code="REGIME_MISMATCH",
        )
    values = np.exp(-2.0 * math.pi * params.g2 * np.asarray(t, dtype=float) / params.hbar)
    if np.ndim(values) == 0:
        return complex(values)
    return values.astype(complex)


@dataclass(frozen=True, eq=False)
class TimeGrid:
    points: RealArray
    scaling: Scaling = Scaling.PHYSICAL

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float, copy=True).reshape(-1)
        if points.size == 0:
            raise ConfigError("time grid must contain at least one point")
        if not np.all(np.isfinite(points)):
            raise ConfigError("time grid must be finite")
        if points[0] < 0:
            raise ConfigError("time grid must start at t >= 0")
        if points.size > 1 and not np.all(np.diff(points) > 0):
            raise ConfigError("time grid must be strictly increasing")
        points.flags.writeable = False
        object.__setattr__(self, "points", points)

    @classmethod
    def uniform(
        cls, t_max: float, dt: float, scaling: Scaling = Scaling.PHYSICAL
    ) -> TimeGrid:
        n_steps = _step_count(t_max, dt)
        return cls(dt * np.arange(n_steps + 1), scaling)

    def __len__(self) -> int:
        return int(self.points.size)

    def physical(self, params: ModelParams) -> RealArray:
        if self.scaling is Scaling.PHYSICAL:
            return self.points
        return self.points * (params.hbar / params.g2)

    def dimensionless(self, params: ModelParams) -> RealArray:
        if self.scaling is Scaling.DIMENSIONLESS:
            return self.points
        return self.points * (params.g2 / params.hbar)

    def to_scaling(self, target: Scaling, params: ModelParams) -> TimeGrid:
        if target is self.scaling:
            return self
        if target is Scaling.PHYSICAL:
            return TimeGrid(self.physical(params), Scaling.PHYSICAL)
        return TimeGrid(self.dimensionless(params), Scaling.DIMENSIONLESS)


@dataclass(frozen=True, eq=False)
class ComplexSeries:
    grid: TimeGrid
    values: ComplexArray
    picture: Picture = Picture.INTERACTION
    error: float = 0.0
    method: str = ""
    components: Mapping[str, ComplexArray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex, copy=True).reshape(-1)
        if values.shape != self.grid.points.shape:
            raise ConfigError(
                f"series has {values.size} values for {len(self.grid)} grid points"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

        components: dict[str, ComplexArray] = {}
        for name, raw in dict(self.components).items():
            component = np.array(raw, dtype=complex, copy=True).reshape(-1)
            if component.shape != values.shape:
                raise ConfigError(f"component {name!r} does not match the grid")
            component.flags.writeable = False
            components[name] = component
        object.__setattr__(self, "components", components)

    @property
    def abs(self) -> RealArray:
        return np.abs(self.values)

    @property
    def probability(self) -> RealArray:
        return np.abs(self.values) ** 2

    def max_modulus_excess(self) -> float:
        """How far |values| exceeds 1 beyond the reported error (0 when physical)."""
        excess = float(np.max(np.abs(self.values))) - 1.0 - self.error
        return max(excess, 0.0)

    def to_picture(self, picture: Picture, params: ModelParams) -> ComplexSeries:
        if picture is self.picture:
            return self
        t = self.grid.physical(params)
        sign = -1.0 if picture is Picture.SCHRODINGER else 1.0
        phase = np.exp(sign * 1j * params.omega0 * t / params.hbar)
        return ComplexSeries(
            grid=self.grid,
            values=self.values * phase,
            picture=picture,
            error=self.error,
            method=self.method,
            components={name: item * phase for name, item in self.components.items()},
        )


def _step_count(t_max: float, dt: float) -> int:
    if dt <= 0 or t_max <= 0:
        raise ConfigError("dt and t_max must be > 0", code="STEP_SIZE")
    if dt > t_max:
        raise ConfigError(f"dt={dt!r} exceeds t_max={t_max!r}", code="STEP_SIZE")
    n_steps = int(round(t_max / dt))
    if abs(n_steps * dt - t_max) > 1e-9 * t_max:
        raise ConfigError(
            f"t_max={t_max!r} is not an integer multiple of dt={dt!r}", code="STEP_SIZE"
        )
    return n_steps


def _as_finite_float(value: Any, field_name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{field_name} must be a number, got {value!r}") from exc
    if not math.isfinite(number):
        raise ConfigError(f"{field_name} must be finite, got {value!r}")
    return number
