"""Closed-form measure densities on symplectic spectra.

The Hilbert-Schmidt volume element factorises into a divergent (and
trivial) symplectic-group part and a spectral part. Only the spectral part
is evaluated here. Densities are unnormalized unless asked otherwise.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernel
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_half_lines, nquad, quad

EXACT_NORMALIZATION = {1: Fraction(3, 2), 2: Fraction(525, 8)}
MAX_QUADRATURE_MODES = 3


@dataclass(frozen=True)
class DensityEvaluation:
    value: float
    normalized: bool
    normalization_constant: Optional[float] = None


def hs_exponent(modes: int) -> float:
    """Power of 1/prod(nu) in the Hilbert-Schmidt density, N (N + 5/2) - 1."""
    return modes * (modes + 2.5) - 1.0


def _squared_vandermonde(nu2: np.ndarray) -> np.ndarray:
    n = nu2.shape[-1]
    out = np.ones(nu2.shape[:-1])
    for l in range(n):
        for m in range(l):
            out = out * (nu2[..., l] - nu2[..., m]) ** 2
    return out


def hs_weight(spectrum) -> np.ndarray:
    """``prod nu**-e * prod_{l>m} (nu_l^2 - nu_m^2)^2``, vectorised over rows.

    This is the spectral density with every constant factor dropped.
    """
    nu = np.asarray(spectrum, dtype=float)
    n = nu.shape[-1]
    return np.prod(nu, axis=-1) ** (-hs_exponent(n)) * _squared_vandermonde(nu * nu)


def hs_sqrt_det_g(spectrum) -> float:
    """Square root of the Hilbert-Schmidt metric determinant in Williamson coordinates.

    sqrt(det g) = sqrt(N + 1) / 4**(N**2) * prod(nu)**-(N (N + 5/2) - 1)
                  * prod_{l>m} (nu_l^2 - nu_m^2)^2
    """
    nu = np.atleast_1d(np.asarray(spectrum, dtype=float))
    n = nu.size
    return float(np.sqrt(n + 1.0) / 4.0 ** (n * n) * hs_weight(nu))


def spectral_integral(modes: int, func=None, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Nested adaptive quadrature of ``func(nu) * hs_weight(nu)`` over [1, inf)^N."""
    if func is None:
        integrand = hs_weight
    else:
        def integrand(nu):
            return func(nu) * hs_weight(nu)
    return integrate_half_lines(integrand, modes, config)


_norm_cache: dict[int, float] = {}
_norm_lock = threading.Lock()


def hs_normalization_constant(modes: int, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Constant Z_N with ``P_N = Z_N * hs_weight`` a probability density.

    N = 1 and 2 are the exact rationals 3/2 and 525/8. N = 3 is computed by
    nested quadrature; larger N use the closed-form Cauchy determinant, since
    nested quadrature in four or more dimensions is impractically slow.
    Results are cached per mode count.
    """
    if modes < 1:
        raise ValueError("modes must be >= 1")
    if modes in EXACT_NORMALIZATION:
        return float(EXACT_NORMALIZATION[modes])
    with _norm_lock:
        cached = _norm_cache.get(modes)
    if cached is not None:
        return cached
    if modes <= MAX_QUADRATURE_MODES:
        value = 1.0 / spectral_integral(modes, config=config)
    else:
        value = float(kernel.normalization_fraction(modes))
    with _norm_lock:
        _norm_cache.setdefault(modes, value)
    return value


def hs_spectral_density(spectrum, normalized: bool = False, config: QuadratureConfig = DEFAULT_CONFIG) -> DensityEvaluation:
    """Spectral density P_N at ``spectrum``.

    The unnormalized value is :func:`hs_sqrt_det_g`; the normalized value is
    ``Z_N * hs_weight``.
    """
    nu = np.atleast_1d(np.asarray(spectrum, dtype=float))
    if np.any(nu < 1.0):
        raise ValueError("symplectic eigenvalues must be >= 1")
    if not normalized:
        return DensityEvaluation(hs_sqrt_det_g(nu), False)
    z = hs_normalization_constant(nu.size, config)
    return DensityEvaluation(float(z * hs_weight(nu)), True, z)


def bures_spectral_density_one_mode(nu):
    """Unnormalizable one-mode Bures spectral density nu^2 / ((nu^2 + 1) sqrt(nu^2 - 1)).

    Defined on nu > 1 only; the endpoint singularity is integrable.
    """
    nu_arr = np.asarray(nu, dtype=float)
    if np.any(nu_arr <= 1.0):
        raise ValueError("Bures spectral density is defined for nu > 1")
    nu2 = nu_arr * nu_arr
    out = nu2 / ((nu2 + 1.0) * np.sqrt(nu2 - 1.0))
    return float(out) if out.ndim == 0 else out


def bures_volume_density_one_mode(nu):
    """Bures volume element per d nu da db: a quarter of the spectral density."""
    return 0.25 * bures_spectral_density_one_mode(nu)


def bures_truncated_integral(cutoff: float, func=None, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of ``func(nu) * P_B(nu)`` over [1, cutoff].

    Substituting nu = cosh(theta) cancels the sqrt(nu^2 - 1) singularity:
    the integrand becomes ``func(cosh t) cosh(t)^2 / (cosh(t)^2 + 1)``.
    """
    if cutoff <= 1.0:
        raise ValueError("cutoff must exceed 1")
    theta_max = float(np.arccosh(cutoff))

    def integrand(theta):
        c = np.cosh(theta)
        w = c * c / (c * c + 1.0)
        return w if func is None else func(c) * w

    return quad(integrand, 0.0, theta_max, config)


def purity_density(modes: int, mu: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Probability density of the purity mu = 1/prod(nu) under P_N.

    The delta constraint is solved for nu_1 = 1 / (mu nu_2 ... nu_N). The
    remaining integral runs over the simplex ``u_k = ln nu_k >= 0``,
    ``sum u_k <= -ln mu``, where the Jacobian leaves ``P_N / mu^2``.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError("purity must lie in (0, 1]")
    if modes > 4:
        raise ValueError("purity density quadrature supports N <= 4")
    z = hs_normalization_constant(modes, config)
    big_l = -np.log(mu)
    if modes == 1:
        return float(z * hs_weight(np.array([1.0 / mu])) / mu**2)
    if big_l == 0.0:
        return 0.0

    def integrand(*u):
        u = np.asarray(u)
        nu = np.exp(np.concatenate([[big_l - u.sum()], u]))
        return hs_weight(nu)

    dim = modes - 1

    def bound(*outer):
        return (0.0, max(big_l - sum(outer), 0.0))

    # nquad: ranges[0] is innermost and receives the outer variables
    ranges = [bound] * dim
    value = nquad(integrand, ranges, config)
    return float(z * value / mu**2)
