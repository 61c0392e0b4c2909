"""Single emitter coupled to a periodic SSH ring (waveguide array).

Depth l plays the role of time (hbar = 1, hoppings in inverse length).
Site 0 is the emitter, cell j holds sites A_j = 1 + 2j and B_j = 2 + 2j, and
the emitter couples to A_0 only.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Sequence

import numpy as np
from scipy import linalg, stats

from ..errors import ConfigError
from ..types import RealArray
from .model import ComplexSeries, Picture, Scaling, TimeGrid

DEFAULT_CELLS = 2000
MIN_ENVELOPE_POINTS = 4


@dataclass(frozen=True)
class SshChain:
    n_cells: int
    t1: float
    t2: float
    g: float
    omega0: float

    def __post_init__(self) -> None:
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ConfigError(f"n_cells must be an integer >= 2, got {self.n_cells!r}")
        for name in ("t1", "t2", "g", "omega0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        if self.t1 < 0 or self.t2 < 0:
            raise ConfigError("hoppings must be >= 0")

    @property
    def dimension(self) -> int:
        return 2 * self.n_cells + 1

    @property
    def gap(self) -> float:
        """Effective mass m_eff = |t1 - t2|."""
        return abs(self.t1 - self.t2)

    @property
    def band_edge(self) -> float:
        return self.t1 + self.t2

    def as_header(self) -> dict[str, str]:
        return {
            "cells": str(self.n_cells),
            "t1": repr(self.t1),
            "t2": repr(self.t2),
            "g": repr(self.g),
            "omega0": repr(self.omega0),
        }


def build_hamiltonian(chain: SshChain) -> RealArray:
    n = chain.n_cells
    h = np.zeros((chain.dimension, chain.dimension))
    h[0, 0] = chain.omega0
    h[0, 1] = h[1, 0] = chain.g
    a_sites = 1 + 2 * np.arange(n)
    b_sites = a_sites + 1
    h[a_sites, b_sites] = h[b_sites, a_sites] = chain.t1
    next_a = np.roll(a_sites, -1)
    h[b_sites, next_a] = h[next_a, b_sites] = chain.t2
    return h


@dataclass(frozen=True, eq=False)
class SshSpectrum:
    energies: RealArray
    vectors: RealArray

    def amplitudes(self, l: float) -> np.ndarray:
        """All site amplitudes at depth l, starting from the emitter site."""
        return self.vectors @ (np.exp(-1j * self.energies * l) * self.vectors[0, :])


def diagonalize(chain: SshChain) -> SshSpectrum:
    energies, vectors = linalg.eigh(build_hamiltonian(chain))
    return SshSpectrum(energies, vectors)


def survival_vs_depth(
    chain: SshChain, l_grid: RealArray | Sequence[float], spectrum: SshSpectrum | None = None
) -> ComplexSeries:
    grid = TimeGrid(np.asarray(l_grid, dtype=float), Scaling.PHYSICAL)
    spectrum = spectrum or diagonalize(chain)
    l = grid.points
    weights = spectrum.vectors[0, :] ** 2
    phi = np.exp(-1j * np.outer(l, spectrum.energies)) @ weights
    return ComplexSeries(
        grid=grid,
        values=np.exp(1j * chain.omega0 * l) * phi,
        picture=Picture.INTERACTION,
        method=f"ssh-{chain.n_cells}",
    )


def ssh_dispersion(chain: SshChain, k: float | RealArray) -> float | RealArray:
    values = np.sqrt(chain.t1**2 + chain.t2**2 - 2.0 * chain.t1 * chain.t2 * np.cos(k))
    return float(values) if np.ndim(values) == 0 else values


def bulk_spectrum_edges(chain: SshChain) -> tuple[float, float]:
    """(inner, outer) edges of the upper band; the lower band mirrors it."""
    return chain.gap, chain.band_edge


def continuum_decay_rate(chain: SshChain) -> float:
    """Golden-rule rate of P(l) for an emitter inside a band, 0 inside the gap."""
    inner, outer = bulk_spectrum_edges(chain)
    energy = abs(chain.omega0)
    if chain.t1 == 0 or chain.t2 == 0 or not inner < energy < outer:
        return 0.0
    cos_k = (energy**2 - chain.t1**2 - chain.t2**2) / (2.0 * chain.t1 * chain.t2)
    sin_k = math.sqrt(max(1.0 - cos_k * cos_k, 0.0))
    return chain.g**2 * energy / (chain.t1 * chain.t2 * sin_k)


def envelope_points(l: RealArray, p: RealArray) -> tuple[RealArray, RealArray]:
    """Points that are not exceeded anywhere later in the window."""
    suffix_max = np.maximum.accumulate(p[::-1])[::-1]
    keep = p >= suffix_max
    return l[keep], p[keep]


def fit_power_law(
    series: ComplexSeries | tuple[RealArray, RealArray], l_min: float, l_max: float
) -> tuple[float, float]:
    """Slope and stderr of log P against log l over the envelope in [l_min, l_max]."""
    if isinstance(series, ComplexSeries):
        l, p = series.grid.points, series.probability
    else:
        l, p = (np.asarray(item, dtype=float) for item in series)
    if l_min <= 0 or l_max <= l_min:
        raise ConfigError(f"invalid fit window [{l_min!r}, {l_max!r}]", code="INVALID_ARGUMENT")
    window = (l >= l_min) & (l <= l_max)
    if np.any(p[window] <= 0):
        raise ConfigError("power-law fit needs P > 0 in the window", code="INVALID_ARGUMENT")
    env_l, env_p = envelope_points(l[window], p[window])
    if env_l.size < MIN_ENVELOPE_POINTS:
        raise ConfigError(
            f"only {env_l.size} envelope points in [{l_min}, {l_max}]", code="INVALID_ARGUMENT"
        )
    fit = stats.linregress(np.log(env_l), np.log(env_p))
    return float(fit.slope), float(fit.stderr)


def fit_exponential(series: ComplexSeries, l_min: float, l_max: float) -> tuple[float, float]:
    """(rate, r_squared) of a straight-line fit to log P over the window."""
    l, p = series.grid.points, series.probability
    window = (l >= l_min) & (l <= l_max)
    if np.count_nonzero(window) < MIN_ENVELOPE_POINTS:
        raise ConfigError("too few points for an exponential fit", code="INVALID_ARGUMENT")
    fit = stats.linregress(l[window], np.log(p[window]))
    return float(-fit.slope), float(fit.rvalue**2)


def gap_sweep(
    chain: SshChain, gaps: Sequence[float], l_grid: RealArray | Sequence[float]
) -> dict[float, ComplexSeries]:
    """Survival for t2 = t1 - gap at each requested gap."""
    results: dict[float, ComplexSeries] = {}
    for gap in gaps:
        swept = SshChain(chain.n_cells, chain.t1, chain.t1 - gap, chain.g, chain.omega0)
        results[float(gap)] = survival_vs_depth(swept, l_grid)
    return results
