from __future__ import annotations

import math
import unittest

import numpy as np

from diracdecay.domain.branch_cut import asymptotic_phi, branchcut_phi, branchcut_series, jump_function
from diracdecay.domain.model import INFINITE, ModelParams, Regime
from diracdecay.domain.ssh import fit_power_law
from diracdecay.errors import ConfigError


def make_params(**overrides: object) -> ModelParams:
    base: dict[str, object] = {"omega0": 1.0, "g": 1.0, "m": 0.0, "lam": INFINITE}
    return ModelParams(**(base | overrides))


def massive_params() -> ModelParams:
    return make_params(omega0=3.0 / 11.0, g=math.sqrt(1.0 / 11.0), m=1.0)


class JumpFunctionTests(unittest.TestCase):
    def test_supported_regimes(self) -> None:
        self.assertIs(jump_function(massive_params()).regime, Regime.MASSIVE_NOCUT)
        self.assertAlmostEqual(jump_function(massive_params()).offset, 11.0)
        self.assertAlmostEqual(jump_function(make_params(lam=5.0)).offset, 5.0)

    def test_other_regimes_rejected(self) -> None:
        for params in (make_params(), make_params(m=1.0, lam=5.0)):
            with self.subTest(params=params):
                with self.assertRaises(ConfigError) as ctx:
                    jump_function(params)
                self.assertEqual(ctx.exception.code, "REGIME_MISMATCH")

    def test_massive_jump_vanishes_at_branch_point(self) -> None:
        jump = jump_function(massive_params())
        self.assertLess(abs(jump.upper(1e-10)), 1e-3)


class BranchCutPhiTests(unittest.TestCase):
    def test_requires_positive_time(self) -> None:
        with self.assertRaises(ConfigError):
            branchcut_phi(make_params(lam=5.0), 0.0)

    def test_series_matches_pointwise(self) -> None:
        params = make_params(lam=5.0)
        values = branchcut_series(params, np.array([1.0, 2.0]))
        self.assertAlmostEqual(values[1], branchcut_phi(params, 2.0))

    def test_cutoff_contribution_decays(self) -> None:
        params = make_params(lam=5.0)
        early = max(abs(branchcut_phi(params, t)) for t in np.linspace(20.0, 25.0, 26))
        late = max(abs(branchcut_phi(params, t)) for t in np.linspace(100.0, 105.0, 26))
        self.assertLess(late, early)


class AsymptoticTests(unittest.TestCase):
    def test_order_and_time_are_validated(self) -> None:
        with self.assertRaises(ConfigError):
            asymptotic_phi(massive_params(), 10.0, order=3)
        with self.assertRaises(ConfigError):
            asymptotic_phi(massive_params(), 0.0)

    def test_no_expansion_without_gap_or_cutoff(self) -> None:
        with self.assertRaises(ConfigError) as ctx:
            asymptotic_phi(make_params(), 10.0)
        self.assertEqual(ctx.exception.code, "REGIME_MISMATCH")
        with self.assertRaises(ConfigError):
            asymptotic_phi(make_params(m=1.0, lam=5.0), 10.0)

    def test_massive_expansion_converges_at_long_times(self) -> None:
        params = massive_params()
        # tau in [20, 21] for g^2 = 1/11
        times = np.linspace(220.0, 231.0, 41)
        exact = branchcut_series(params, times)
        first = np.array([asymptotic_phi(params, t, order=1) for t in times])
        second = np.array([asymptotic_phi(params, t, order=2) for t in times])
        scale = float(np.max(np.abs(exact)))
        first_error = float(np.max(np.abs(first - exact)))
        second_error = float(np.max(np.abs(second - exact)))
        self.assertLess(first_error, 0.1 * scale)
        self.assertLess(second_error, first_error)

    def test_second_order_does_not_help_below_tau_of_two(self) -> None:
        params = massive_params()
        for t in (10.0, 20.0):
            exact = branchcut_phi(params, t)
            first = abs(asymptotic_phi(params, t, order=1) - exact)
            second = abs(asymptotic_phi(params, t, order=2) - exact)
            with self.subTest(t=t):
                self.assertGreater(second, first)

    def test_massive_envelope_decays_as_three_halves_power(self) -> None:
        params = massive_params()
        # tau in [20, 80] for g^2 = 1/11
        times = np.linspace(220.0, 880.0, 2401)
        exact = branchcut_series(params, times)
        first = np.array([asymptotic_phi(params, t, order=1) for t in times])
        envelope_slope, _ = fit_power_law((times, np.abs(exact)), times[0], times[-1])
        error_slope, _ = fit_power_law((times, np.abs(first - exact)), times[0], times[-1])
        self.assertAlmostEqual(envelope_slope, -1.5, delta=0.15)
        self.assertAlmostEqual(error_slope, -2.5, delta=0.3)

    def test_cutoff_envelope_decays_as_inverse_time(self) -> None:
        params = make_params(lam=5.0)
        times = np.linspace(20.0, 80.0, 1201)
        exact = branchcut_series(params, times)
        slope, _ = fit_power_law((times, np.abs(exact)), times[0], times[-1])
        self.assertAlmostEqual(slope, -1.0, delta=0.15)

    def test_cutoff_expansion_vanishes_with_sine(self) -> None:
        params = make_params(lam=5.0)
        t = 20.0 * math.pi / 5.0
        self.assertLess(abs(asymptotic_phi(params, t)), 1e-15)
        self.assertGreater(abs(asymptotic_phi(params, t + 0.5 * math.pi / 5.0)), 0.0)


if __name__ == "__main__":
    unittest.main()
