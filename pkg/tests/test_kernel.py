from __future__ import annotations

import math
import unittest

import numpy as np

from diracdecay.domain.kernel import (
    KernelForm,
    KernelSpec,
    default_kernel_spec,
    kernel_double_integral,
    kernel_eval,
    kernel_grid,
    kernel_taylor_coefficients,
    local_decay_rate,
)
from diracdecay.domain.model import INFINITE, ModelParams
from diracdecay.errors import ConfigError


def make_params(**overrides: object) -> ModelParams:
    base: dict[str, object] = {"omega0": 1.0, "g": 1.0, "m": 0.0, "lam": INFINITE}
    return ModelParams(**(base | overrides))


class KernelSpecTests(unittest.TestCase):
    def test_default_forms_follow_regime(self) -> None:
        self.assertIs(default_kernel_spec(make_params()).form, KernelForm.CLOSED_DELTA)
        self.assertIs(default_kernel_spec(make_params(m=1.0)).form, KernelForm.CLOSED_BESSEL)
        self.assertIs(default_kernel_spec(make_params(lam=5.0)).form, KernelForm.CLOSED_SINC)
        self.assertIs(default_kernel_spec(make_params(m=1.0, lam=5.0)).form, KernelForm.QUADRATURE)

    def test_quadrature_needs_finite_cutoff(self) -> None:
        with self.assertRaises(ConfigError) as ctx:
            KernelSpec(make_params(m=1.0), KernelForm.QUADRATURE)
        self.assertEqual(ctx.exception.code, "REGIME_MISMATCH")

    def test_closed_form_must_match_regime(self) -> None:
        with self.assertRaises(ConfigError):
            KernelSpec(make_params(lam=5.0), KernelForm.CLOSED_BESSEL)

    def test_kernel_eval_rejects_non_positive_time(self) -> None:
        spec = default_kernel_spec(make_params(lam=5.0))
        with self.assertRaises(ConfigError) as ctx:
            kernel_eval(spec, 0.0)
        self.assertEqual(ctx.exception.code, "INVALID_ARGUMENT")


class KernelValueTests(unittest.TestCase):
    def test_local_decay_rate_only_without_cutoff(self) -> None:
        self.assertAlmostEqual(local_decay_rate(make_params()), 2.0 * math.pi)
        self.assertAlmostEqual(local_decay_rate(make_params(g=0.5, m=2.0)), 0.5 * math.pi)
        self.assertEqual(local_decay_rate(make_params(lam=5.0)), 0.0)

    def test_delta_kernel_has_no_regular_part(self) -> None:
        values = kernel_grid(default_kernel_spec(make_params()), np.linspace(0.0, 2.0, 5))
        np.testing.assert_array_equal(values, np.zeros(5, dtype=complex))

    def test_sinc_closed_form_matches_momentum_quadrature(self) -> None:
        params = make_params(lam=5.0)
        closed = KernelSpec(params, KernelForm.CLOSED_SINC)
        numeric = KernelSpec(params, KernelForm.QUADRATURE)
        for t in (0.3, 1.7, 4.2):
            with self.subTest(t=t):
                expected = -4.0 * math.sin(5.0 * t) / t * np.exp(1j * t)
                self.assertAlmostEqual(abs(kernel_eval(closed, t) - expected), 0.0, places=10)
                self.assertAlmostEqual(abs(kernel_eval(numeric, t) - expected), 0.0, places=7)

    def test_sinc_limit_at_zero_lag(self) -> None:
        spec = default_kernel_spec(make_params(g=0.5, lam=3.0))
        self.assertAlmostEqual(kernel_grid(spec, np.array([0.0]))[0], -4.0 * 0.25 * 3.0)

    def test_grid_and_pointwise_quadrature_agree(self) -> None:
        spec = default_kernel_spec(make_params(g=0.5, m=1.0, lam=10.0))
        lags = np.array([0.5, 1.0, 2.0])
        grid_values = kernel_grid(spec, lags)
        for lag, value in zip(lags, grid_values):
            with self.subTest(lag=lag):
                pointwise = kernel_eval(spec, float(lag))
                self.assertLess(abs(value - pointwise), 1e-7 * max(abs(pointwise), 1.0))

    def test_double_integral_of_delta_kernel_is_linear(self) -> None:
        spec = default_kernel_spec(make_params())
        self.assertAlmostEqual(kernel_double_integral(spec, 0.5), -math.pi)
        self.assertEqual(kernel_double_integral(spec, 0.0), 0j)

    def test_double_integral_is_quadratic_at_short_times(self) -> None:
        spec = default_kernel_spec(make_params(lam=5.0))
        t = 1e-3
        # K(0) t^2 / 2 with K(0) = -4 g^2 lambda
        expected = -4.0 * 5.0 * t**2 / 2.0
        self.assertLess(abs(kernel_double_integral(spec, t) - expected), 1e-2 * abs(expected))

    def test_cutoff_quadrature_approaches_bessel_kernel(self) -> None:
        bessel = KernelSpec(make_params(g=0.5, m=1.0), KernelForm.CLOSED_BESSEL)
        times = (1.5, 2.0, 2.5)
        errors = []
        for lam in (10.0, 40.0, 160.0):
            cut = KernelSpec(make_params(g=0.5, m=1.0, lam=lam), KernelForm.QUADRATURE)
            errors.append(
                max(abs(kernel_double_integral(cut, t) - kernel_double_integral(bessel, t)) for t in times)
            )
        self.assertLess(errors[1], errors[0])
        self.assertLess(errors[2], 0.25 * errors[0])
        self.assertLess(errors[2], 0.02 * abs(kernel_double_integral(bessel, 2.0)))

    def test_double_integral_rejects_negative_time(self) -> None:
        with self.assertRaises(ConfigError):
            kernel_double_integral(default_kernel_spec(make_params(lam=5.0)), -1.0)


class KernelTaylorTests(unittest.TestCase):
    def _assert_series_matches(self, params: ModelParams, u: float) -> None:
        coefficients = kernel_taylor_coefficients(params, 12)
        series = sum(c * u**j for j, c in enumerate(coefficients))
        exact = kernel_grid(default_kernel_spec(params), np.array([u]))[0]
        self.assertLess(abs(series - exact), 1e-9 * max(abs(exact), 1.0))

    def test_sinc_series(self) -> None:
        self._assert_series_matches(make_params(lam=5.0), 0.05)

    def test_bessel_series(self) -> None:
        self._assert_series_matches(make_params(omega0=0.5, m=1.0), 0.1)

    def test_general_series(self) -> None:
        self._assert_series_matches(make_params(m=1.0, lam=4.0), 0.05)

    def test_delta_series_is_zero(self) -> None:
        self.assertEqual(kernel_taylor_coefficients(make_params(), 3), [0j, 0j, 0j])
        self.assertEqual(kernel_taylor_coefficients(make_params(), 0), [])


if __name__ == "__main__":
    unittest.main()
