"""Adaptive nested quadrature over products of half-lines [1, inf)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exceptions import QuadratureError


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the adaptive integrators.

    Improper integrals over [1, inf) are mapped onto [0, 1] by nu = 1/t,
    so there is no truncation cutoff to configure.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    limit: int = 200

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.limit < 1:
            raise ValueError("limit must be >= 1")


DEFAULT_CONFIG = QuadratureConfig()


def quad(func, lo, hi, config: QuadratureConfig = DEFAULT_CONFIG, **kwargs) -> float:
    """scipy.integrate.quad that raises instead of warning on non-convergence."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(func, lo, hi, epsrel=config.rtol, epsabs=config.atol, limit=config.limit, **kwargs)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from exc
    return float(val)


def nquad(func, ranges, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """scipy.integrate.nquad with the same error policy as :func:`quad`.

    ``ranges[0]`` is the innermost variable, as in scipy.
    """
    opts = {"epsrel": config.rtol, "epsabs": config.atol, "limit": config.limit}
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.nquad(func, ranges, opts=opts)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from exc
    return float(val)


def integrate_half_lines(func, dim: int, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integrate ``func(nu)`` (nu a length-``dim`` array) over [1, inf)^dim.

    The integrand must decay faster than nu**-2 in every coordinate; the
    mapped integrand is taken as zero on the t = 0 faces.
    """

    def mapped(*t):
        t = np.asarray(t)
        if np.any(t == 0.0):
            return 0.0
        return func(1.0 / t) / np.prod(t) ** 2

    return nquad(mapped, [(0.0, 1.0)] * dim, config)
