from __future__ import annotations

import math
import unittest

import numpy as np
from scipy.signal import find_peaks

from diracdecay.application.survival import (
    METHOD_REGIMES,
    compare_oracles,
    default_step,
    method_applies,
    resolve_options,
    survival_amplitude,
)
from diracdecay.domain.model import INFINITE, ModelParams, Regime, TimeGrid
from diracdecay.errors import ConfigError


def make_params(**overrides: object) -> ModelParams:
    base: dict[str, object] = {"omega0": 1.0, "g": 1.0, "m": 0.0, "lam": INFINITE}
    return ModelParams(**(base | overrides))


def massive_params() -> ModelParams:
    return make_params(omega0=3.0 / 11.0, g=math.sqrt(1.0 / 11.0), m=1.0)


class MethodRegistryTests(unittest.TestCase):
    def test_every_regime_has_two_methods(self) -> None:
        for regime in Regime:
            with self.subTest(regime=regime):
                methods = [name for name in METHOD_REGIMES if method_applies(name, regime)]
                self.assertGreaterEqual(len(methods), 2)

    def test_unknown_method_rejected(self) -> None:
        with self.assertRaises(ConfigError) as ctx:
            method_applies("magic", Regime.MASSLESS_NOCUT)
        self.assertEqual(ctx.exception.code, "INVALID_ARGUMENT")

    def test_default_step_is_even_and_fine(self) -> None:
        params = make_params(lam=5.0)
        dt = default_step(params, 2.0)
        n_steps = round(2.0 / dt)
        self.assertEqual(n_steps % 2, 0)
        self.assertGreaterEqual(n_steps, 64)
        self.assertLessEqual(dt * 5.0, 0.05 + 1e-12)


class SurvivalAmplitudeTests(unittest.TestCase):
    def test_regime_mismatch(self) -> None:
        with self.assertRaises(ConfigError) as ctx:
            survival_amplitude(make_params(lam=5.0), [0.0, 1.0], "closed-form")
        self.assertEqual(ctx.exception.code, "REGIME_MISMATCH")

    def test_zero_horizon_returns_initial_amplitude(self) -> None:
        series = survival_amplitude(make_params(lam=5.0), [0.0])
        np.testing.assert_array_equal(series.values, [1.0 + 0j])

    def test_unknown_scheme_rejected(self) -> None:
        with self.assertRaises(ConfigError):
            survival_amplitude(make_params(lam=5.0), [0.0, 1.0], "volterra", scheme="euler")

    def test_scheme_accepts_strings(self) -> None:
        series = survival_amplitude(make_params(lam=5.0), [0.0, 0.5], "volterra", scheme="trapezoid")
        self.assertEqual(series.method, "volterra-trapezoid")

    def test_volterra_lands_on_caller_grid(self) -> None:
        grid = TimeGrid(np.array([0.0, 0.3, 1.1]))
        series = survival_amplitude(make_params(), grid)
        self.assertIs(series.grid, grid)
        np.testing.assert_allclose(series.values, np.exp(-2.0 * math.pi * grid.points), rtol=1e-5)

    def test_series_method_reports_order(self) -> None:
        series = survival_amplitude(make_params(), [0.0, 0.01], "series", order=6)
        self.assertEqual(series.method, "series-6")
        self.assertAlmostEqual(series.values[1], math.exp(-2.0 * math.pi * 0.01), places=9)


class CompareOraclesTests(unittest.TestCase):
    def test_needs_two_distinct_methods(self) -> None:
        for methods in (["volterra"], ["volterra", "volterra"]):
            with self.subTest(methods=methods):
                with self.assertRaises(ConfigError) as ctx:
                    compare_oracles(make_params(), [0.0, 1.0], methods)
                self.assertEqual(ctx.exception.code, "METHOD_COUNT")

    def test_unknown_method_fails_before_running(self) -> None:
        with self.assertRaises(ConfigError) as ctx:
            compare_oracles(make_params(), [0.0, 1.0], ["volterra", "magic"])
        self.assertEqual(ctx.exception.code, "INVALID_ARGUMENT")

    def test_markovian_oracles_agree(self) -> None:
        result = compare_oracles(
            make_params(), np.linspace(0.0, 3.0, 301), ["volterra", "bromwich", "closed-form"], dt=0.01
        )
        self.assertEqual(result["regime"], "MASSLESS_NOCUT")
        self.assertEqual(len(result["pairs"]), 3)
        for pair in result["pairs"]:
            self.assertLess(pair["max_rel_dev"], 1e-4)
        self.assertTrue(result["all_within_tolerance"])

    def test_massive_oracles_agree(self) -> None:
        result = compare_oracles(
            massive_params(), np.linspace(0.0, 20.0, 41), ["volterra", "spectral", "bromwich"], dt=0.05
        )
        statuses = {item["method"]: item["status"] for item in result["method_results"]}
        self.assertEqual(statuses, {"volterra": "ok", "spectral": "ok", "bromwich": "ok"})
        for pair in result["pairs"]:
            with self.subTest(pair=(pair["method_a"], pair["method_b"])):
                self.assertLess(pair["max_rel_dev"], 1e-3)

    def test_cutoff_oracles_agree(self) -> None:
        result = compare_oracles(
            make_params(lam=5.0), np.linspace(0.0, 5.0, 21), ["volterra", "spectral", "bromwich"], dt=0.01
        )
        self.assertTrue(result["all_within_tolerance"], result["pairs"])

    def test_inapplicable_method_is_skipped(self) -> None:
        result = compare_oracles(
            massive_params(), np.linspace(0.0, 2.0, 5), ["closed-form", "volterra", "bromwich"]
        )
        skipped = [item for item in result["method_results"] if item["status"] == "skipped"]
        self.assertEqual([item["method"] for item in skipped], ["closed-form"])
        self.assertEqual(len(result["pairs"]), 1)

    def test_truncated_series_is_flagged(self) -> None:
        result = compare_oracles(make_params(), np.linspace(0.0, 1.0, 11), ["series", "closed-form"], order=2)
        self.assertTrue(result["pairs"][0]["flagged"])
        self.assertFalse(result["all_within_tolerance"])


class GeneralRegimeTests(unittest.TestCase):
    def test_general_bromwich_matches_discretized(self) -> None:
        params = make_params(omega0=1.0, g=0.5, m=1.0, lam=10.0)
        t = np.linspace(0.0, 20.0, 41)
        bromwich = survival_amplitude(params, t, "bromwich")
        discretized = survival_amplitude(params, t, "discretized", n_modes=400)
        np.testing.assert_allclose(bromwich.values, discretized.values, atol=1e-6)
        self.assertLessEqual(bromwich.error, 1e-6)

    def test_general_plateau_increases_with_mass(self) -> None:
        t = np.linspace(0.0, 20.0, 401)
        plateaus = []
        for m, expected in ((0.5, 0.036), (1.0, 0.119), (2.0, 0.310)):
            params = make_params(omega0=1.0, g=0.5, m=m, lam=10.0)
            p = survival_amplitude(params, t, "bromwich").probability
            plateau = float(np.mean(p[t >= 15.0]))
            with self.subTest(m=m):
                self.assertAlmostEqual(plateau, expected, delta=0.01)
            plateaus.append(plateau)
        self.assertEqual(plateaus, sorted(plateaus))


class CrossoverSurvivalTests(unittest.TestCase):
    def late_window(self, omega0: float) -> np.ndarray:
        t = np.linspace(0.0, 50.0, 1001)
        p = survival_amplitude(make_params(omega0=omega0, lam=5.0), t, "volterra").probability
        return p[t >= 25.0]

    def test_bright_point_keeps_oscillating(self) -> None:
        late = self.late_window(1.0)
        swing = 0.5 * (late.max() - late.min())
        peaks, _ = find_peaks(late, prominence=swing)
        self.assertGreaterEqual(len(peaks), 3)
        self.assertGreater(swing, 0.3 * float(np.mean(late)))

    def test_dark_point_settles_on_plateau(self) -> None:
        late = self.late_window(10.0)
        swing = 0.5 * (late.max() - late.min())
        self.assertLess(swing, 0.1 * float(np.mean(late)))


class ResolvedOptionsTests(unittest.TestCase):
    def test_defaults_are_filled_in(self) -> None:
        params = make_params(lam=5.0)
        t = np.linspace(0.0, 2.0, 11)
        self.assertEqual(
            resolve_options(params, t, "volterra"), {"dt": default_step(params, 2.0), "scheme": "simpson"}
        )
        self.assertEqual(resolve_options(params, t, "bromwich"), {"sigma": 0.5, "tail_tolerance": 1e-6})
        self.assertEqual(resolve_options(params, t, "discretized"), {"n_modes": 400})
        self.assertEqual(resolve_options(params, t, "series", order=3), {"order": 3})
        self.assertEqual(resolve_options(params, t, "spectral"), {})

    def test_resolved_options_reproduce_the_run(self) -> None:
        params = make_params(lam=5.0)
        t = np.linspace(0.0, 2.0, 11)
        options = resolve_options(params, t, "volterra", scheme="trapezoid")
        first = survival_amplitude(params, t, "volterra", scheme="trapezoid")
        again = survival_amplitude(params, t, "volterra", **options)
        np.testing.assert_array_equal(first.values, again.values)

    def test_compare_reports_options_per_method(self) -> None:
        result = compare_oracles(make_params(), np.linspace(0.0, 1.0, 5), ["bromwich", "closed-form"], sigma=0.5)
        options = {item["method"]: item["options"] for item in result["method_results"]}
        self.assertEqual(options["bromwich"], {"sigma": 0.5, "tail_tolerance": 1e-6})
        self.assertEqual(options["closed-form"], {})


if __name__ == "__main__":
    unittest.main()
