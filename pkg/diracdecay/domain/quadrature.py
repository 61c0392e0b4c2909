"""Quadrature helpers shared by the kernel, inversion and branch-cut modules."""

from __future__ import annotations

from functools import lru_cache
import math
from typing import Callable
import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from ..types import RealArray


@lru_cache(maxsize=32)
def _legendre_rule(order: int) -> tuple[RealArray, RealArray]:
    nodes, weights = leggauss(order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_legendre_panels(
    a: float, b: float, n_panels: int, order: int = 16
) -> tuple[RealArray, RealArray]:
    """Nodes and weights of composite Gauss-Legendre on equal-width panels."""
    if n_panels < 1 or order < 1:
        raise ValueError("n_panels and order must be >= 1")
    x, w = _legendre_rule(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panels_for_phase(phase_span: float, max_phase: float = 3.0, minimum: int = 2) -> int:
    """Panel count keeping the oscillation phase per panel below `max_phase`."""
    return max(minimum, int(math.ceil(abs(phase_span) / max_phase)))


def quad_complex(
    func: Callable[[float], complex], a: float, b: float, **kwargs: object
) -> tuple[complex, float]:
    """`scipy.integrate.quad` on the real and imaginary parts separately."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        real, real_err = integrate.quad(lambda s: func(s).real, a, b, **kwargs)
        imag, imag_err = integrate.quad(lambda s: func(s).imag, a, b, **kwargs)
    return complex(real, imag), float(real_err + imag_err)


def fourier_tail(
    func: Callable[[float], complex], start: float, omega: float, epsabs: float = 1e-13
) -> tuple[complex, complex, float]:
    """Return (int f cos(omega y), int f sin(omega y), abserr) over [start, inf)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if omega == 0:
            real, real_err = integrate.quad(
                lambda y: func(y).real, start, np.inf, epsabs=epsabs, limit=400
            )
            imag, imag_err = integrate.quad(
                lambda y: func(y).imag, start, np.inf, epsabs=epsabs, limit=400
            )
            return complex(real, imag), 0j, float(real_err + imag_err)

        parts: list[float] = []
        total_err = 0.0
        for weight in ("cos", "sin"):
            for take in (np.real, np.imag):
                value, err = integrate.quad(
                    lambda y, take=take: float(take(func(y))),
                    start,
                    np.inf,
                    weight=weight,
                    wvar=omega,
                    epsabs=epsabs,
                    limlst=200,
                )
                parts.append(value)
                total_err += err
    return complex(parts[0], parts[1]), complex(parts[2], parts[3]), total_err


def trapezoid_weights(x: RealArray) -> RealArray:
    x = np.asarray(x, dtype=float)
    weights = np.zeros_like(x)
    if x.size < 2:
        return weights
    dx = np.diff(x)
    weights[:-1] += 0.5 * dx
    weights[1:] += 0.5 * dx
    return weights
