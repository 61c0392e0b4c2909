from __future__ import annotations

import math
import unittest

import numpy as np

from diracdecay.domain.model import INFINITE, ModelParams, markovian_phi
from diracdecay.domain.short_time import (
    SeriesForm,
    amplitude_taylor_coefficients,
    exact_survival_series,
    quadratic_approximation,
    series_phi,
    survival_series,
    zeno_time,
)
from diracdecay.domain.volterra import VolterraConfig, solve_volterra
from diracdecay.errors import ConfigError


def make_params(**overrides: object) -> ModelParams:
    base: dict[str, object] = {"omega0": 1.0, "g": 1.0, "m": 0.0, "lam": INFINITE}
    return ModelParams(**(base | overrides))


def cutoff_quartic(a: float, lam: float) -> float:
    return 16.0 / 3.0 * lam**2 + a**2 * lam / 3.0 + lam**3 / 9.0


class PrintedSeriesTests(unittest.TestCase):
    def test_no_cutoff_coefficients(self) -> None:
        params = make_params(m=2.0)
        series = survival_series(params)
        self.assertIs(series.form, SeriesForm.PRINTED)
        self.assertEqual(series.max_order, 3)
        expected = [1.0, -4.0 * math.pi, 8.0 * math.pi**2, 4.0 * math.pi / 3.0 - 32.0 * math.pi**3 / 3.0]
        np.testing.assert_allclose(series.coefficients(params), expected, rtol=1e-14)

    def test_cutoff_coefficients(self) -> None:
        params = make_params(omega0=2.0, lam=5.0)
        coefficients = survival_series(params).coefficients(params)
        np.testing.assert_allclose(
            coefficients, [1.0, 0.0, -20.0, 0.0, 200.0 + 125.0 / 9.0 + 20.0 / 3.0], rtol=1e-14
        )

    def test_general_regime_uses_kernel_moments(self) -> None:
        series = survival_series(make_params(m=1.0, lam=5.0))
        self.assertIs(series.form, SeriesForm.KERNEL_MOMENTS)
        self.assertEqual(series.max_order, 4)

    def test_evaluate_truncates_and_scales_time(self) -> None:
        params = make_params(g=0.5, lam=5.0)
        series = survival_series(params)
        self.assertEqual(series.evaluate(0.0, params), 1.0)
        # tau = g^2 t = 0.025; L = lambda / g^2 = 20
        self.assertAlmostEqual(series.evaluate(0.1, params, order=2), 1.0 - 80.0 * 0.025**2)


class ExactSeriesTests(unittest.TestCase):
    def test_massive_coefficients_match_printed_through_cubic(self) -> None:
        for m in (0.5, 2.0):
            with self.subTest(m=m):
                params = make_params(m=m)
                exact = exact_survival_series(params, order=3).coefficients(params)
                printed = survival_series(params).coefficients(params)
                np.testing.assert_allclose(exact, printed, rtol=1e-10)

    def test_first_coefficients_do_not_depend_on_mass(self) -> None:
        light = exact_survival_series(make_params(m=0.5), order=3).coefficients(make_params(m=0.5))
        heavy = exact_survival_series(make_params(m=2.0), order=3).coefficients(make_params(m=2.0))
        np.testing.assert_allclose(light[:3], heavy[:3], rtol=1e-12)

    def test_cutoff_quartic_coefficient(self) -> None:
        params = make_params(omega0=2.0, lam=5.0)
        coefficients = exact_survival_series(params, order=4).coefficients(params)
        self.assertAlmostEqual(coefficients[1], 0.0, places=12)
        self.assertAlmostEqual(coefficients[2], -20.0, places=10)
        self.assertAlmostEqual(coefficients[3], 0.0, places=10)
        self.assertAlmostEqual(coefficients[4], cutoff_quartic(2.0, 5.0), places=8)

    def test_amplitude_series_rejects_negative_order(self) -> None:
        with self.assertRaises(ConfigError):
            amplitude_taylor_coefficients(make_params(), -1)

    def test_amplitude_series_of_markovian_bath(self) -> None:
        params = make_params()
        self.assertAlmostEqual(series_phi(params, 0.01), markovian_phi(params, 0.01), places=12)
        with self.assertRaises(ConfigError):
            series_phi(params, -0.1)

    def test_remainder_scales_as_fourth_power_under_cutoff(self) -> None:
        params = make_params(lam=5.0)
        series = solve_volterra(params, VolterraConfig(dt=0.0005, t_max=0.05))
        tau = series.grid.points[20::20]  # 0.01 .. 0.05
        remainder = np.abs(series.probability[20::20] - (1.0 - 20.0 * tau**2))
        slope = np.polyfit(np.log(tau), np.log(remainder), 1)[0]
        self.assertAlmostEqual(slope, 4.0, delta=0.3)
        self.assertAlmostEqual(remainder[0] / tau[0] ** 4, cutoff_quartic(1.0, 5.0), delta=0.02 * cutoff_quartic(1.0, 5.0))


class ZenoTimeTests(unittest.TestCase):
    def test_reference_value(self) -> None:
        self.assertAlmostEqual(zeno_time(make_params(lam=5.0)), 0.22360680, places=7)

    def test_scales_with_cutoff(self) -> None:
        ratio = zeno_time(make_params(lam=5.0)) / zeno_time(make_params(lam=10.0))
        self.assertAlmostEqual(ratio, math.sqrt(2.0))

    def test_requires_cutoff(self) -> None:
        with self.assertRaises(ConfigError):
            zeno_time(make_params())
        with self.assertRaises(ConfigError):
            quadratic_approximation(make_params(), 0.1)

    def test_quadratic_approximation_vanishes_at_zeno_time(self) -> None:
        params = make_params(g=0.5, lam=3.0)
        self.assertAlmostEqual(quadratic_approximation(params, zeno_time(params)), 0.0, places=12)
        self.assertEqual(quadratic_approximation(params, 0.0), 1.0)


if __name__ == "__main__":
    unittest.main()
