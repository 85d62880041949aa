"""Distances, overlaps and invariant scalars of zero-mean Gaussian states."""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from .exceptions import NumericalError
from .symplectic_core import HamiltonianGenerator, mode_count, williamson_diagonal, PHYSICAL_TOL

_RADICAND_TOL = 1e-12
_PURE_MODE_TOL = 1e-12


def _spectrum(values) -> np.ndarray:
    nu = np.atleast_1d(np.asarray(values, dtype=float))
    if nu.ndim != 1 or nu.size == 0:
        raise ValueError("spectrum must be a non-empty 1-D sequence")
    return nu


def purity(spectrum) -> float:
    """Purity tr(rho^2) = 1 / prod(nu)."""
    return float(1.0 / np.prod(_spectrum(spectrum)))


def _mode_entropy(nu: np.ndarray) -> np.ndarray:
    plus = 0.5 * (nu + 1.0)
    minus = 0.5 * (nu - 1.0)
    out = xlogy(plus, plus) - xlogy(minus, minus)
    return np.where(nu - 1.0 < _PURE_MODE_TOL, 0.0, out)


def von_neumann_entropy(spectrum) -> float:
    """Von Neumann entropy in nats, a sum of thermal-mode terms."""
    nu = _spectrum(spectrum)
    if np.any(nu < 1.0 - PHYSICAL_TOL):
        raise ValueError(f"unphysical symplectic eigenvalue {nu.min()}")
    return float(np.sum(_mode_entropy(np.maximum(nu, 1.0))))


def mode_entropy(nu):
    """Per-mode entropy term, vectorised over ``nu >= 1``."""
    return _mode_entropy(np.maximum(np.asarray(nu, dtype=float), 1.0))


def _pair(sigma_a, sigma_b):
    a = np.asarray(sigma_a, dtype=float)
    b = np.asarray(sigma_b, dtype=float)
    mode_count(a)
    if a.shape != b.shape:
        raise ValueError(f"mode count mismatch: {a.shape} vs {b.shape}")
    return a, b


def _inv_sqrt_det(m: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(m)
    if sign <= 0:
        raise ValueError("matrix is not positive definite")
    return float(np.exp(-0.5 * logdet))


def hs_overlap(sigma_a, sigma_b) -> float:
    """tr(rho_a rho_b) = 1 / sqrt(det((sigma_a + sigma_b) / 2))."""
    a, b = _pair(sigma_a, sigma_b)
    return _inv_sqrt_det(0.5 * (a + b))


def hs_distance(sigma_a, sigma_b) -> float:
    """Hilbert-Schmidt distance between two Gaussian states.

    Equal to sqrt(mu_a + mu_b - 2 tr(rho_a rho_b)), evaluated through the
    generalized eigenvalues 1 + delta_i of (sigma_b, sigma_a) as a sum of two
    nonnegative terms, so nearby states do not lose precision to cancellation.
    """
    a, b = _pair(sigma_a, sigma_b)
    try:
        delta = scipy.linalg.eigh(b - a, a, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance matrix is not positive definite") from exc
    if np.any(delta <= -1.0):
        raise ValueError("covariance matrix is not positive definite")
    half_u = -0.25 * np.sum(np.log1p(delta))  # half of ln(mu_b / mu_a)
    gap = 0.25 * np.sum(np.log1p(delta * delta / (4.0 * (1.0 + delta))))
    v = half_u - gap  # ln(tr(rho_a rho_b) / mu_a)
    radicand = _inv_sqrt_det(a) * (np.expm1(half_u) ** 2 + 2.0 * np.exp(v) * np.expm1(gap))
    if radicand < 0.0:
        if radicand < -_RADICAND_TOL:
            raise NumericalError(f"negative squared distance {radicand}")
        return 0.0
    return float(np.sqrt(radicand))


def hs_line_element(sigma, d_sigma) -> float:
    """Squared line element ds^2 for a perturbation d_sigma at sigma.

    ds^2 = [tr(K)^2 + 2 tr(K^2)] / (16 sqrt(det sigma)),  K = sigma^-1 d_sigma.
    """
    sigma, d_sigma = _pair(sigma, d_sigma)
    try:
        k = np.linalg.solve(sigma, d_sigma)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance matrix is singular") from exc
    tr = np.trace(k)
    return float((tr * tr + 2.0 * np.trace(k @ k)) * _inv_sqrt_det(sigma) / 16.0)


def hs_line_element_diagonal(spectrum, d_nu, d_x: HamiltonianGenerator) -> float:
    """Line element in Williamson coordinates (eigenvalue shifts plus generator).

    The eigenvalue and generator contributions decouple, so the result is the
    sum of the two pure parts. ``d_x`` must be in the canonical gauge.
    """
    nu = _spectrum(spectrum)
    d_nu = np.asarray(d_nu, dtype=float).ravel()
    if d_nu.shape != nu.shape or d_x.modes != nu.size:
        raise ValueError("spectrum, d_nu and d_x disagree on the mode count")
    if not d_x.canonical or np.any(np.diag(d_x.c) != 0):
        raise ValueError("d_x must be a canonical generator (zero diagonal in c)")
    d = williamson_diagonal(nu)
    d_inv = np.diag(1.0 / np.diag(d))
    dd = williamson_diagonal(d_nu)
    dx = d_x.matrix
    k = d_inv @ dd
    tr = np.trace(k)
    total = tr * tr + 2.0 * np.trace(k @ k) + 4.0 * np.trace(dx @ dx) + 4.0 * np.trace(dx @ d_inv @ dx.T @ d)
    return float(total / (16.0 * np.prod(nu)))


def _one_mode(sigma_a, sigma_b):
    a, b = _pair(sigma_a, sigma_b)
    if a.shape != (2, 2):
        raise ValueError("fidelity and Bures distance are implemented for one mode only")
    return a, b


def fidelity_one_mode(sigma_a, sigma_b) -> float:
    """Uhlmann fidelity (squared-trace convention) of two one-mode states."""
    a, b = _one_mode(sigma_a, sigma_b)
    p = (np.linalg.det(a) - 1.0) * (np.linalg.det(b) - 1.0)
    p = max(p, 0.0)
    det_sum = np.linalg.det(a + b)
    # 2 / (sqrt(D + P) - sqrt(P)) rewritten without the cancellation
    f = 2.0 * (np.sqrt(det_sum + p) + np.sqrt(p)) / det_sum
    return float(min(f, 1.0))


def bures_distance_one_mode(sigma_a, sigma_b) -> float:
    """Bures distance sqrt(2 (1 - sqrt(F))) for one-mode states."""
    f = fidelity_one_mode(sigma_a, sigma_b)
    return float(np.sqrt(max(2.0 * (1.0 - np.sqrt(f)), 0.0)))
