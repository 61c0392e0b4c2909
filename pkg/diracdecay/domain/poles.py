"""Poles of the resolvent, their residues and pole contributions to Phi(t).

Mental model refresher:
- MASSIVE_NOCUT: the four poles are the roots of the quartic
  P(z) = (z + ia)^2 (z^2 + mu^2) - 4 pi^2 z^2. With z = iy the quartic has
  real coefficients in y, so roots come as real y (imaginary z) or
  conjugate pairs (z+ = -conj(z-)). Exactly one root sits on R+.
- MASSLESS_CUT: two principal-sheet poles ix1 and -ix2 on the imaginary
  axis, both beyond the branch points (x > L).
- `spectral_phi` rebuilds Phi(t) as principal-sheet poles plus branch cuts.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
import math
from typing import Sequence

import numpy as np
from scipy import optimize

from ..errors import ConfigError, ExceptionalPointError, RootFindingError, SimulationError
from ..types import RealArray
from .branch_cut import branchcut_phi
from .model import ComplexSeries, ModelParams, Picture, Regime, TimeGrid, classify_regime, to_dimensionless
from .resolvent import PRINCIPAL, ResolventFn, SheetId, sqrt_pair

SHEET_TOLERANCE = 1e-3
SHEET_MATCH_TOLERANCE = 1e-8
ROOT_RESIDUAL_TOLERANCE = 1e-8
EXCEPTIONAL_POINT_DISTANCE = 1e-5
RABI_THRESHOLD = 1e-3
_NEWTON_STEPS = 8

R_PLUS = SheetId(1)
R_MINUS = SheetId(-1)


class PoleLabel(Enum):
    BOUND_Z0 = "BOUND_Z0"
    IMAG_Z1 = "IMAG_Z1"
    RESONANT_ZPLUS = "RESONANT_ZPLUS"
    ANTIRESONANT_ZMINUS = "ANTIRESONANT_ZMINUS"
    UPPER_IX1 = "UPPER_IX1"
    LOWER_IX2 = "LOWER_IX2"


@dataclass(frozen=True)
class Pole:
    z: complex
    sheet: SheetId
    residue: complex
    label: PoleLabel


@dataclass(frozen=True)
class PoleSet:
    regime: Regime
    poles: tuple[Pole, ...]
    discriminant: float | None = None

    def by_label(self, label: PoleLabel) -> Pole:
        for pole in self.poles:
            if pole.label is label:
                return pole
        raise KeyError(label.value)

    @property
    def min_separation(self) -> float:
        distances = [
            abs(first.z - second.z) / (1.0 + abs(first.z))
            for first, second in combinations(self.poles, 2)
        ]
        return min(distances) if distances else math.inf

    @property
    def exceptional(self) -> bool:
        return self.min_separation < EXCEPTIONAL_POINT_DISTANCE


def quartic_coefficients(a: float, mu: float) -> RealArray:
    """Coefficients (highest first) of the quartic in y, z = iy."""
    return np.array(
        [1.0, 2.0 * a, a * a - mu * mu + 4.0 * math.pi**2, -2.0 * a * mu * mu, -(a * a) * mu * mu]
    )


def quartic_discriminant(a: float, mu: float) -> float:
    a_prime = a * a * mu * mu
    b_plus = a * a + mu * mu
    b_minus = a * a - mu * mu
    pi2 = math.pi**2
    return -64.0 * pi2 * a_prime * (
        b_minus**3
        + 48.0 * pi2**2 * b_minus
        + 12.0 * pi2 * (b_plus**2 + 5.0 * a_prime)
        + 64.0 * pi2**3
    )


def quartic_roots(params: ModelParams) -> PoleSet:
    if classify_regime(params) is not Regime.MASSIVE_NOCUT:
        raise ConfigError("quartic poles exist only for MASSIVE_NOCUT", code="REGIME_MISMATCH")
    a = params.omega0_ratio
    mu = params.mass_ratio
    coeffs = quartic_coefficients(a, mu)
    scale = float(np.max(np.abs(coeffs)))

    roots_y = [_polish(coeffs, complex(root)) for root in np.roots(coeffs)]
    for root in roots_y:
        residual = abs(np.polyval(coeffs, root))
        if residual > ROOT_RESIDUAL_TOLERANCE * scale:
            raise RootFindingError(
                f"quartic root {root!r} has residual {residual:.3e}", code="ROOT_RESIDUAL"
            )
    roots_z = [1j * y for y in _pair_conjugates(roots_y)]

    plus = ResolventFn(params, R_PLUS)
    minus = ResolventFn(params, R_MINUS)
    on_plus: list[complex] = []
    on_minus: list[complex] = []
    for z in roots_z:
        sheet = assign_sheet(z, abs(plus.inverse(z)), abs(minus.inverse(z)))
        (on_plus if sheet == R_PLUS else on_minus).append(z)
    if len(on_plus) != 1:
        raise RootFindingError(
            f"expected one root on R+, found {len(on_plus)}", code="AMBIGUOUS_SHEET"
        )

    labelled = [(on_plus[0], R_PLUS, PoleLabel.BOUND_Z0)]
    labelled.extend((z, R_MINUS, label) for z, label in _label_second_sheet(on_minus))

    poles = []
    for z, sheet, label in labelled:
        others = [other for other in roots_z if other is not z]
        poles.append(Pole(z=z, sheet=sheet, residue=_quartic_residue(params, z, sheet, others), label=label))
    return PoleSet(Regime.MASSIVE_NOCUT, tuple(poles), quartic_discriminant(a, mu))


def assign_sheet(z: complex, inv_plus: float, inv_minus: float) -> SheetId:
    """Sheet on which z is a zero of 1/F, given |1/F| on R+ and R-.

    The matching sheet must vanish to SHEET_MATCH_TOLERANCE (relative to
    1 + |z|) and the other must stay above SHEET_TOLERANCE.
    """
    scale = 1.0 + abs(z)
    best, other = sorted((inv_plus, inv_minus))
    if best > SHEET_MATCH_TOLERANCE * scale:
        raise RootFindingError(
            f"root {z!r} is not a zero on either sheet ({inv_plus:.2e}, {inv_minus:.2e})",
            code="ROOT_RESIDUAL",
        )
    if other < SHEET_TOLERANCE * scale:
        raise RootFindingError(
            f"root {z!r} satisfies both sheets ({inv_plus:.2e}, {inv_minus:.2e})",
            code="AMBIGUOUS_SHEET",
        )
    return R_PLUS if inv_plus <= inv_minus else R_MINUS


def _polish(coeffs: RealArray, root: complex) -> complex:
    derivative = np.polyder(coeffs)
    for _ in range(_NEWTON_STEPS):
        slope = np.polyval(derivative, root)
        if slope == 0:
            break
        step = np.polyval(coeffs, root) / slope
        root -= step
        if abs(step) <= 1e-15 * (1.0 + abs(root)):
            break
    return complex(root)


def _pair_conjugates(roots: Sequence[complex]) -> list[complex]:
    """Snap near-real roots to the axis and make complex pairs exact conjugates."""
    out: list[complex] = []
    pending = list(roots)
    while pending:
        root = pending.pop(0)
        if abs(root.imag) <= 1e-10 * (1.0 + abs(root)):
            out.append(complex(root.real, 0.0))
            continue
        partner = min(range(len(pending)), key=lambda i: abs(pending[i] - root.conjugate()))
        pending.pop(partner)
        upper = root if root.imag > 0 else root.conjugate()
        out.extend([upper, upper.conjugate()])
    return out


def _label_second_sheet(roots: list[complex]) -> list[tuple[complex, PoleLabel]]:
    if len(roots) != 3:
        raise RootFindingError(f"expected three roots on R-, found {len(roots)}", code="AMBIGUOUS_SHEET")
    off_axis = [z for z in roots if z.real != 0.0]
    if off_axis:
        resonant = min(off_axis, key=lambda z: z.real)
        anti = max(off_axis, key=lambda z: z.real)
        imaginary = [z for z in roots if z.real == 0.0][0]
        return [
            (imaginary, PoleLabel.IMAG_Z1),
            (resonant, PoleLabel.RESONANT_ZPLUS),
            (anti, PoleLabel.ANTIRESONANT_ZMINUS),
        ]
    # three imaginary roots: the closest pair is the one that split off the axis
    pair = min(combinations(roots, 2), key=lambda p: abs(p[0] - p[1]))
    lone = [z for z in roots if z is not pair[0] and z is not pair[1]][0]
    high, low = sorted(pair, key=lambda z: z.imag, reverse=True)
    return [
        (lone, PoleLabel.IMAG_Z1),
        (high, PoleLabel.RESONANT_ZPLUS),
        (low, PoleLabel.ANTIRESONANT_ZMINUS),
    ]


def _quartic_residue(
    params: ModelParams, z: complex, sheet: SheetId, others: Sequence[complex]
) -> complex:
    a = params.omega0_ratio
    s = complex(sqrt_pair(z, params.mass_ratio))
    sign = 1.0 if sheet.branch >= 0 else -1.0
    numerator = (z + 1j * a) * s * s - sign * 2.0 * math.pi * z * s
    denominator = complex(np.prod([z - other for other in others]))
    if denominator == 0:
        return complex(math.nan, math.nan)
    return numerator / denominator


def residue_phi_z0(params: ModelParams, poles: PoleSet, t: float) -> complex:
    """Bound-pole part of Phi(t); its modulus does not depend on t."""
    if poles.regime is not Regime.MASSIVE_NOCUT:
        raise ConfigError("residue_phi_z0 needs MASSIVE_NOCUT poles", code="REGIME_MISMATCH")
    if poles.exceptional:
        raise ExceptionalPointError(
            f"repeated roots (separation {poles.min_separation:.2e}); residue undefined"
        )
    z0 = poles.by_label(PoleLabel.BOUND_Z0)
    tau = to_dimensionless(t, params)
    return z0.residue * cmath.exp(1j * params.omega0_ratio * tau + z0.z * tau)


def contour_residue(
    params: ModelParams, z0: complex, radius: float | None = None, n_points: int = 256
) -> complex:
    """Residue of F+ at z0 from a trapezoid rule on a small circle."""
    if radius is None:
        radius = 0.5 * (params.mass_ratio - abs(z0.imag))
    theta = 2.0 * math.pi * np.arange(n_points) / n_points
    offsets = radius * np.exp(1j * theta)
    values = ResolventFn(params, R_PLUS)(z0 + offsets)
    return complex(np.mean(values * offsets))


def _cutoff_bracket(lam: float, a: float) -> tuple[float, float]:
    low = 2.0 * lam * math.exp(-(lam + abs(a) + 1.0) / 2.0)
    high = max(1e3 * lam, lam + abs(a) + 10.0) - lam
    return max(low, 1e-300), high


def _solve_cutoff(lam: float, a: float, sign: float) -> float:
    """x > lam solving x + sign * a = 2 ln((x + lam) / (x - lam))."""

    def condition(delta: float) -> float:
        return lam + delta + sign * a - 2.0 * math.log((2.0 * lam + delta) / delta)

    low, high = _cutoff_bracket(lam, a)
    f_low, f_high = condition(low), condition(high)
    if f_low * f_high > 0:
        raise RootFindingError(
            f"no sign change for cutoff pole in [{lam + low:.6g}, {lam + high:.6g}] "
            f"(a={a!r}, L={lam!r})",
            code="ROOT_NOT_FOUND",
        )
    delta = optimize.brentq(condition, low, high, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return lam + delta


def cutoff_residue(x: float, lam: float) -> float:
    return (x * x - lam * lam) / (x * x + (4.0 - lam) * lam)


def cutoff_poles(params: ModelParams) -> PoleSet:
    if classify_regime(params) is not Regime.MASSLESS_CUT:
        raise ConfigError("cutoff poles exist only for MASSLESS_CUT", code="REGIME_MISMATCH")
    a = params.omega0_ratio
    lam = float(params.cutoff_ratio)
    x1 = _solve_cutoff(lam, a, +1.0)
    x2 = _solve_cutoff(lam, a, -1.0)
    poles = (
        Pole(1j * x1, PRINCIPAL, complex(cutoff_residue(x1, lam)), PoleLabel.UPPER_IX1),
        Pole(-1j * x2, PRINCIPAL, complex(cutoff_residue(x2, lam)), PoleLabel.LOWER_IX2),
    )
    return PoleSet(Regime.MASSLESS_CUT, poles)


def cutoff_positions(poles: PoleSet) -> tuple[float, float]:
    return (
        poles.by_label(PoleLabel.UPPER_IX1).z.imag,
        -poles.by_label(PoleLabel.LOWER_IX2).z.imag,
    )


def is_rabi(poles: PoleSet) -> bool:
    x1, x2 = cutoff_positions(poles)
    return abs(x1 - x2) < RABI_THRESHOLD * x1


def pole_contribution_cut(params: ModelParams, poles: PoleSet, t: float) -> complex:
    tau = to_dimensionless(t, params)
    upper = poles.by_label(PoleLabel.UPPER_IX1)
    lower = poles.by_label(PoleLabel.LOWER_IX2)
    total = upper.residue * cmath.exp(upper.z * tau) + lower.residue * cmath.exp(lower.z * tau)
    return cmath.exp(1j * params.omega0_ratio * tau) * total


def crossover_map(omega0_over_g2: Sequence[float], lambda_over_g2: Sequence[float]) -> RealArray:
    """exp(-|x1 - x2|) per (a, L) cell; failed cells are NaN."""
    grid = np.full((len(omega0_over_g2), len(lambda_over_g2)), np.nan)
    for i, a in enumerate(omega0_over_g2):
        for j, lam in enumerate(lambda_over_g2):
            try:
                if a <= 0 or lam <= 0:
                    raise ConfigError("grid values must be positive")
                poles = cutoff_poles(ModelParams(omega0=a, g=1.0, lam=lam))
            except SimulationError:
                continue
            x1, x2 = cutoff_positions(poles)
            grid[i, j] = math.exp(-abs(x1 - x2))
    return grid


def rlambert_crosscheck(params: ModelParams, poles: PoleSet) -> dict[str, dict[str, float]]:
    """Residual of w e^w + r w = alpha for each cutoff pole, w = -iz/2 - L/2.

    alpha = -r L; with the substitution above the upper pole maps to
    w = (x1 - L)/2 > 0 and the lower pole to w = -(x2 + L)/2 < 0.
    """
    a = params.omega0_ratio
    lam = float(params.cutoff_ratio)
    r = -math.exp(-(a + lam) / 2.0)
    alpha = -r * lam
    report: dict[str, dict[str, float]] = {}
    for pole in poles.poles:
        w = (-1j * pole.z / 2.0 - lam / 2.0).real
        residual = w * math.exp(w) + r * w - alpha
        report[pole.label.value] = {
            "w": w,
            "r": r,
            "alpha": alpha,
            "residual": abs(residual) / max(abs(alpha), 1e-300),
        }
    return report


def pole_phi(params: ModelParams, poles: PoleSet, t: float) -> complex:
    if poles.regime is Regime.MASSIVE_NOCUT:
        return residue_phi_z0(params, poles, t)
    return pole_contribution_cut(params, poles, t)


def find_poles(params: ModelParams) -> PoleSet:
    regime = classify_regime(params)
    if regime is Regime.MASSIVE_NOCUT:
        return quartic_roots(params)
    if regime is Regime.MASSLESS_CUT:
        return cutoff_poles(params)
    raise ConfigError(f"no pole search for regime {regime.value}", code="REGIME_MISMATCH")


def spectral_phi(params: ModelParams, t_grid: TimeGrid) -> ComplexSeries:
    """Phi(t) = pole part + branch-cut part, both kept as components."""
    poles = find_poles(params)
    t = t_grid.physical(params)
    pole_part = np.array([pole_phi(params, poles, float(ti)) for ti in t])
    cut_part = np.empty_like(pole_part)
    for i, ti in enumerate(t):
        if ti == 0:
            cut_part[i] = 1.0 - pole_part[i]
        else:
            cut_part[i] = branchcut_phi(params, float(ti))
    return ComplexSeries(
        grid=t_grid,
        values=pole_part + cut_part,
        picture=Picture.INTERACTION,
        method="spectral",
        components={"pole": pole_part, "branch_cut": cut_part},
    )
