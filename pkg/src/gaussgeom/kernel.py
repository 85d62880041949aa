"""Orthogonal-polynomial structure of the Hilbert-Schmidt spectral ensemble.

Under ``x = 1 / nu**2`` the joint density of the symplectic eigenvalues
becomes ``prod x_i**a * prod_{l>m} (x_l - x_m)**2`` on ``[0, 1]^N`` with
``a = N (N - 3/2) / 2``: a unitary Jacobi ensemble. Everything here works in
``x`` with the shifted Jacobi polynomials orthonormal for ``x**a dx``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np
from scipy.special import eval_jacobi

from .quadrature import DEFAULT_CONFIG, QuadratureConfig, quad


def x_exponent(modes: int) -> float:
    return modes * (modes - 1.5) / 2.0


def to_x(nu):
    return 1.0 / np.square(nu)


def to_nu(x):
    return 1.0 / np.sqrt(x)


def orthonormal_basis(modes: int, x) -> np.ndarray:
    """Values q_k(x), k < N, stacked along the last axis.

    q_k(x) = P_k^(0, a)(2x - 1) * sqrt(2k + a + 1) is orthonormal for the
    weight x**a on [0, 1].
    """
    a = x_exponent(modes)
    x = np.asarray(x, dtype=float)
    k = np.arange(modes)
    t = 2.0 * x[..., None] - 1.0
    return eval_jacobi(k, 0.0, a, t) * np.sqrt(2.0 * k + a + 1.0)


def one_point_density(modes: int, x) -> np.ndarray:
    """Density of eigenvalues in x; integrates to N over [0, 1]."""
    a = x_exponent(modes)
    q = orthonormal_basis(modes, x)
    return np.asarray(x, dtype=float) ** a * np.sum(q * q, axis=-1)


def normalization_fraction(modes: int) -> Fraction:
    """Exact normalization constant of the spectral density in nu.

    The integral of ``prod nu**-e * prod (nu_l^2 - nu_m^2)^2`` over
    ``[1, inf)^N`` equals ``2**-N N! det[1 / (a + 1 + j + k)]``, a Cauchy
    determinant with a product formula. Returns its reciprocal.
    """
    n = modes
    a1 = Fraction(n * (2 * n - 3), 4) + 1
    num = Fraction(factorial(n))
    for j in range(n):
        for k in range(j + 1, n):
            num *= (k - j) ** 2
    den = Fraction(2**n)
    for j in range(n):
        for k in range(n):
            den *= a1 + j + k
    return den / num


def additive_mean(modes: int, h, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Ensemble mean of ``sum_i h(nu_i)`` as a 1-D integral of the kernel."""
    return quad(lambda x: h(to_nu(x)) * one_point_density(modes, x), 0.0, 1.0, config)


def product_mean(modes: int, phi, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Ensemble mean of ``prod_i phi(nu_i)`` as a Gram determinant."""
    a = x_exponent(modes)
    gram = np.empty((modes, modes))
    for j in range(modes):
        for k in range(j, modes):
            def f(x, j=j, k=k):
                q = orthonormal_basis(modes, x)
                return phi(to_nu(x)) * x**a * q[j] * q[k]
            gram[j, k] = gram[k, j] = quad(f, 0.0, 1.0, config)
    return float(np.linalg.det(gram))
