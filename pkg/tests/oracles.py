"""Independent exact references used across the test suite."""

from functools import lru_cache
from math import factorial

import sympy


@lru_cache(maxsize=None)
def exact_spectral_moment(modes: int, shift: int = 0):
    """Integral of prod nu^-(e + shift) prod (nu_l^2 - nu_m^2)^2 over [1, inf)^N.

    Expanding the squared Vandermonde (Andreief) turns it into
    N! det[1 / (e + shift - 1 - 2 (j + k))], evaluated here in exact rationals.
    """
    e = sympy.Rational(2 * modes * modes + 5 * modes - 2, 2) + shift
    m = sympy.Matrix(modes, modes, lambda j, k: 1 / (e - 1 - 2 * (j + k)))
    return factorial(modes) * m.det()


def exact_normalization(modes: int):
    return 1 / exact_spectral_moment(modes)


def exact_mean_purity(modes: int):
    return exact_spectral_moment(modes, 1) / exact_spectral_moment(modes)


def p2_rectangle_mass(a1, a2, b1, b2):
    """Mass of the normalized two-mode density P_2 on [a1, a2] x [b1, b2] (unsorted)."""
    def power(k, lo, hi):
        return (lo ** (1.0 - k) - hi ** (1.0 - k)) / (k - 1.0)

    return 525 / 8 * (
        power(4, a1, a2) * power(8, b1, b2)
        - 2 * power(6, a1, a2) * power(6, b1, b2)
        + power(8, a1, a2) * power(4, b1, b2)
    )


def sorted_pair_cell_masses(edges):
    """Cell masses for (min, max) of a P_2 draw on a grid; cells below the diagonal are 0."""
    k = len(edges) - 1
    mass = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            m = p2_rectangle_mass(edges[i], edges[i + 1], edges[j], edges[j + 1])
            mass[i][j] = m if i == j else 2 * m
    return mass
