"""Covariance matrices, symplectic spectra and symplectic transforms.

Phase-space ordering is *block* ordering throughout: the first N coordinates
are the real parts of the mode amplitudes, the last N the imaginary parts,
so that ``J = [[0, 1], [-1, 0]]`` with N x N blocks. Many libraries use the
mode-interleaved ordering (x1, p1, x2, p2, ...); convert such input with
:func:`interleaved_to_block`.

The vacuum has the identity covariance matrix, so every symplectic eigenvalue
of a physical state is at least one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import NumericalError

SYMMETRY_RTOL = 1e-9
PHYSICAL_TOL = 1e-9
GENERATOR_SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-9


class GaugeWarning(UserWarning):
    """A canonical generator was given a nonzero diagonal in ``c``."""


def symplectic_form(modes: int) -> np.ndarray:
    """Return the 2N x 2N symplectic form in block ordering."""
    if modes < 1:
        raise ValueError(f"modes must be >= 1, got {modes}")
    eye = np.eye(modes)
    zero = np.zeros((modes, modes))
    return np.block([[zero, eye], [-eye, zero]])


def mode_count(matrix: np.ndarray) -> int:
    """Number of modes of a square even-dimensional matrix."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] % 2:
        raise ValueError(f"covariance dimension must be even, got {matrix.shape[0]}")
    if matrix.shape[0] == 0:
        raise ValueError("empty matrix")
    return matrix.shape[0] // 2


def _is_symmetric(matrix: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    scale = max(np.max(np.abs(matrix)), 1.0)
    return bool(np.max(np.abs(matrix - matrix.T)) <= rtol * scale)


def as_covariance(matrix) -> np.ndarray:
    """Validate shape, finiteness and symmetry; return a float array."""
    sigma = np.array(matrix, dtype=float)
    mode_count(sigma)
    if not np.all(np.isfinite(sigma)):
        raise ValueError("covariance matrix has non-finite entries")
    if not _is_symmetric(sigma):
        raise ValueError("covariance matrix is not symmetric")
    return sigma


def interleaved_to_block(matrix) -> np.ndarray:
    """Reorder a (x1, p1, x2, p2, ...) matrix into (x1..xN, p1..pN) order."""
    matrix = np.asarray(matrix, dtype=float)
    n = mode_count(matrix)
    perm = np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])
    return matrix[np.ix_(perm, perm)]


def block_to_interleaved(matrix) -> np.ndarray:
    """Inverse of :func:`interleaved_to_block`."""
    matrix = np.asarray(matrix, dtype=float)
    n = mode_count(matrix)
    perm = np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])
    inv = np.argsort(perm)
    return matrix[np.ix_(inv, inv)]


def williamson_diagonal(spectrum) -> np.ndarray:
    """Diagonal covariance ``diag(nu, nu)`` carrying each eigenvalue twice."""
    nu = np.asarray(spectrum, dtype=float).ravel()
    return np.diag(np.concatenate([nu, nu]))


def _squared_spectrum(sigma: np.ndarray) -> np.ndarray:
    """Paired eigenvalues nu_i**2 of -(J sigma)^2, ascending, one per mode.

    With sigma = L L^T, -(J sigma)^2 is similar to the symmetric matrix
    -(L^T J L)^2, so a symmetric eigen-solve gives the same (real) values.
    """
    n = mode_count(sigma)
    j = symplectic_form(n)
    try:
        low = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise ValueError("covariance matrix is not positive definite") from exc
    k = low.T @ j @ low
    m = k.T @ k
    try:
        lam = np.linalg.eigvalsh(0.5 * (m + m.T))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-solve failed: {exc}") from exc
    scale = max(lam[-1], 1e-300)
    first, second = lam[0::2], lam[1::2]
    if np.max(np.abs(first - second)) > 1e-8 * scale:
        raise NumericalError("eigenvalues of -(J sigma)^2 are not paired")
    return 0.5 * (first + second)


def symplectic_spectrum(sigma) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix, sorted ascending.

    The values are the square roots of the doubly degenerate eigenvalues of
    ``-(J sigma)^2``. Values within ``1e-9`` below one are clamped to one.

    Raises:
        ValueError: if ``sigma`` is not symmetric or is not positive definite.
        NumericalError: if the eigen-solve fails its consistency checks.
    """
    sigma = as_covariance(sigma)
    nu = np.sqrt(_squared_spectrum(sigma))
    near_one = (nu < 1.0) & (nu >= 1.0 - PHYSICAL_TOL)
    nu[near_one] = 1.0
    return nu


@dataclass(frozen=True)
class ValidityReport:
    physical: bool
    min_nu: float


def validate_covariance(sigma) -> ValidityReport:
    """Check the uncertainty relation ``sigma + iJ >= 0``.

    ``min_nu`` is the smallest symplectic eigenvalue; it is reported as 0.0
    when ``sigma`` is not positive definite (no Williamson form exists).
    Asymmetric input is reported unphysical rather than raising.
    """
    sigma = np.array(sigma, dtype=float)
    mode_count(sigma)
    if not np.all(np.isfinite(sigma)):
        raise ValueError("covariance matrix has non-finite entries")
    symmetric = _is_symmetric(sigma)
    sym = 0.5 * (sigma + sigma.T)
    try:
        min_nu = float(np.sqrt(_squared_spectrum(sym)[0]))
    except ValueError:
        return ValidityReport(False, 0.0)
    physical = symmetric and min_nu >= 1.0 - PHYSICAL_TOL
    if physical and min_nu < 1.0:
        min_nu = 1.0
    return ValidityReport(physical, min_nu)


@dataclass(frozen=True)
class HamiltonianGenerator:
    """Generator ``X = [[a, b], [c, -a.T]]`` of a symplectic transformation.

    With ``canonical=True`` the diagonal of ``c`` is zero, which removes the
    SO(2)^N rotations commuting with a Williamson diagonal and leaves 2N^2
    free parameters.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    canonical: bool = False

    @property
    def modes(self) -> int:
        return self.a.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.a, self.b], [self.c, -self.a.T]])

    def to_vector(self) -> np.ndarray:
        """Flatten to coordinates (a row-major, b upper triangle, c above diagonal).

        Canonical generators give 2N^2 coordinates; otherwise the diagonal of
        ``c`` is included as well.
        """
        n = self.modes
        iu = np.triu_indices(n)
        k = 1 if self.canonical else 0
        ic = np.triu_indices(n, k)
        return np.concatenate([self.a.ravel(), self.b[iu], self.c[ic]])

    @classmethod
    def from_vector(cls, vector, modes: int, canonical: bool = True) -> "HamiltonianGenerator":
        vector = np.asarray(vector, dtype=float)
        n = modes
        iu = np.triu_indices(n)
        ic = np.triu_indices(n, 1 if canonical else 0)
        expected = n * n + len(iu[0]) + len(ic[0])
        if vector.shape != (expected,):
            raise ValueError(f"expected {expected} coordinates, got shape {vector.shape}")
        a = vector[: n * n].reshape(n, n)
        b = np.zeros((n, n))
        b[iu] = vector[n * n : n * n + len(iu[0])]
        b = b + np.triu(b, 1).T
        c = np.zeros((n, n))
        c[ic] = vector[n * n + len(iu[0]) :]
        c = c + np.triu(c, 1).T
        return cls(a, b, c, canonical)


def generator_dimension(modes: int, canonical: bool = True) -> int:
    return 2 * modes * modes + (0 if canonical else modes)


def assemble_generator(a, b, c, canonical: bool = False) -> HamiltonianGenerator:
    """Build a Hamiltonian generator and check ``(J X)^T = J X``.

    If ``canonical`` and ``c`` has a nonzero diagonal, the diagonal is zeroed
    and a :class:`GaugeWarning` is issued.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    n = a.shape[0]
    for name, blk in (("a", a), ("b", b), ("c", c)):
        if blk.shape != (n, n):
            raise ValueError(f"block {name} has shape {blk.shape}, expected {(n, n)}")
    for name, blk in (("b", b), ("c", c)):
        if np.max(np.abs(blk - blk.T), initial=0.0) > GENERATOR_SYMMETRY_TOL:
            raise ValueError(f"block {name} is not symmetric")
    b = 0.5 * (b + b.T)
    c = 0.5 * (c + c.T)
    if canonical and np.any(np.diag(c) != 0):
        warnings.warn("zeroing the diagonal of c for the canonical gauge", GaugeWarning, stacklevel=2)
        c = c.copy()
        np.fill_diagonal(c, 0.0)
    gen = HamiltonianGenerator(a, b, c, canonical)
    jx = symplectic_form(n) @ gen.matrix
    if np.max(np.abs(jx - jx.T)) > GENERATOR_SYMMETRY_TOL * max(1.0, np.max(np.abs(jx))):
        raise NumericalError("assembled generator is not Hamiltonian")
    return gen


def random_generator(modes: int, scale: float, rng: np.random.Generator, canonical: bool = False) -> HamiltonianGenerator:
    """Generator with independent N(0, scale^2) entries in a, b and c."""
    n = modes
    a = rng.normal(0.0, scale, (n, n))
    b = rng.normal(0.0, scale, (n, n))
    c = rng.normal(0.0, scale, (n, n))
    b = np.triu(b) + np.triu(b, 1).T
    c = np.triu(c) + np.triu(c, 1).T
    if canonical:
        np.fill_diagonal(c, 0.0)
    return HamiltonianGenerator(a, b, c, canonical)


def is_symplectic(s, tol: float = SYMPLECTIC_TOL) -> bool:
    s = np.asarray(s, dtype=float)
    n = mode_count(s)
    j = symplectic_form(n)
    return bool(np.max(np.abs(s.T @ j @ s - j)) <= tol * max(1.0, np.max(np.abs(s)) ** 2))


def symplectic_exp(x: HamiltonianGenerator) -> np.ndarray:
    """Matrix exponential of a generator (scaling and squaring with Pade)."""
    s = scipy.linalg.expm(x.matrix)
    if not np.all(np.isfinite(s)):
        raise NumericalError("matrix exponential overflowed")
    if not is_symplectic(s):
        raise NumericalError("matrix exponential lost symplecticity")
    return s


def conjugate(sigma, s) -> np.ndarray:
    """Return ``s.T @ sigma @ s`` for a symplectic ``s``."""
    sigma = np.asarray(sigma, dtype=float)
    s = np.asarray(s, dtype=float)
    if sigma.shape != s.shape:
        raise ValueError(f"dimension mismatch: {sigma.shape} vs {s.shape}")
    if not is_symplectic(s):
        raise ValueError("transformation is not symplectic")
    out = s.T @ sigma @ s
    return 0.5 * (out + out.T)
