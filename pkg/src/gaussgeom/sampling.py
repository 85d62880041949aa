"""Exact random symplectic spectra from the Hilbert-Schmidt measure.

Two exact samplers are provided:

* ``"rejection"``: independent power-law proposals per eigenvalue, accepted
  with probability ``prod_{l>m} (nu_l^2 - nu_m^2)^2 / (nu_l^4 nu_m^4)``.
  Acceptance rates fall off quickly with N (about 3e-4 at N = 3, 3e-9 at
  N = 4).
* ``"dpp"``: in ``x = 1/nu^2`` the spectrum is a projection determinantal
  point process; points are drawn one at a time from the conditional
  densities (chain rule), each by uniform rejection under the kernel
  diagonal. The cost grows only polynomially in N.

Batches are split into fixed-size blocks. Block ``b`` draws from a stream
seeded by ``(seed, b)``, so sample ``i`` depends only on the seed and its
index, and the output does not depend on the number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernel
from .exceptions import NumericalError, SamplerExhausted
from .symplectic_core import conjugate, random_generator, symplectic_exp, williamson_diagonal

log = logging.getLogger(__name__)

DEFAULT_SEED = 20150601
BLOCK_SIZE = 4096
METHODS = ("auto", "rejection", "dpp")
# predicted rejection acceptance below which "auto" switches to the DPP sampler
MIN_REJECTION_RATE = 1e-4


def proposal_exponent(modes: int) -> float:
    """Default tail exponent N^2 - 3N/2 + 3 of the power-law proposal."""
    return modes * modes - 1.5 * modes + 3.0


def predicted_acceptance_rate(modes: int, tail_exponent: Optional[float] = None) -> float:
    """Expected acceptance rate of the rejection sampler at the default exponent."""
    beta = proposal_exponent(modes) if tail_exponent is None else tail_exponent
    if beta != proposal_exponent(modes):
        raise ValueError("closed-form rate is only available for the default exponent")
    return float((beta - 1.0) ** modes / kernel.normalization_fraction(modes))


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler settings.

    ``tail_exponent`` may be lowered below the default (heavier proposal tail)
    but not raised above it, or the acceptance ratio would exceed one.
    """

    modes: int
    seed: int = DEFAULT_SEED
    tail_exponent: Optional[float] = None
    max_retries: int = 10**6
    method: str = "auto"

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("modes must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        beta = self.beta
        if beta <= 1.0:
            raise ValueError("tail exponent must exceed 1")
        if beta > proposal_exponent(self.modes) + 1e-12:
            raise ValueError("tail exponent above the default makes the acceptance ratio unbounded")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")

    @property
    def beta(self) -> float:
        return proposal_exponent(self.modes) if self.tail_exponent is None else float(self.tail_exponent)

    def resolved_method(self) -> str:
        if self.method != "auto":
            return self.method
        if self.modes == 1:
            return "rejection"
        if self.tail_exponent is None and predicted_acceptance_rate(self.modes) >= MIN_REJECTION_RATE:
            return "rejection"
        log.warning(
            "rejection acceptance rate for N=%d is %.2e; using the DPP sampler",
            self.modes,
            predicted_acceptance_rate(self.modes),
        )
        return "dpp"


@dataclass(frozen=True)
class SampleBatch:
    spectra: np.ndarray  # shape (count, N), each row ascending
    attempts: int
    method: str

    @property
    def acceptance_rate(self) -> float:
        return len(self.spectra) / self.attempts


def power_law_inverse_cdf(u, beta: float):
    """Inverse CDF of (beta - 1) nu**-beta on [1, inf)."""
    return (1.0 - np.asarray(u, dtype=float)) ** (-1.0 / (beta - 1.0))


def sample_spectrum_one_mode(rng: np.random.Generator) -> np.ndarray:
    """One exact draw from P_1(nu) = 3/2 nu^-5/2 by CDF inversion."""
    return np.array([float(power_law_inverse_cdf(rng.random(), 2.5))])


def acceptance_probability(spectrum, beta: Optional[float] = None) -> np.ndarray:
    """Rejection acceptance probability, vectorised over the last axis.

    For the default exponent this is ``prod_{l>m} (1/nu_m^2 - 1/nu_l^2)^2``;
    a heavier proposal tail multiplies it by ``prod nu**(beta - beta_N)``.
    """
    nu = np.asarray(spectrum, dtype=float)
    n = nu.shape[-1]
    x = 1.0 / (nu * nu)
    out = np.ones(nu.shape[:-1])
    for l in range(n):
        for m in range(l):
            out = out * (x[..., l] - x[..., m]) ** 2
    if beta is not None and beta != proposal_exponent(n):
        out = out * np.prod(nu, axis=-1) ** (beta - proposal_exponent(n))
    return out


def sample_spectrum(config: SamplerConfig, rng: np.random.Generator) -> np.ndarray:
    """One exact draw from P_N, sorted ascending."""
    method = config.resolved_method()
    if method == "dpp":
        return _dpp_block(config.modes, 1, rng)[0]
    beta = config.beta
    for _ in range(config.max_retries):
        nu = power_law_inverse_cdf(rng.random(config.modes), beta)
        if config.modes == 1 or rng.random() < acceptance_probability(nu, beta):
            return np.sort(nu)
    raise SamplerExhausted(f"no acceptance in {config.max_retries} proposals")


def _rejection_block(config: SamplerConfig, count: int, rng: np.random.Generator):
    n, beta = config.modes, config.beta
    if n == 1:
        return np.sort(power_law_inverse_cdf(rng.random((count, 1)), beta), axis=1), count
    rate = predicted_acceptance_rate(n) if config.tail_exponent is None else 0.01
    accepted: list[np.ndarray] = []
    have = 0
    attempts = 0
    while have < count:
        chunk = int(min(max(1.2 * (count - have) / rate, 256), 2**20))
        nu = power_law_inverse_cdf(rng.random((chunk, n)), beta)
        keep = rng.random(chunk) < acceptance_probability(nu, beta)
        idx = np.flatnonzero(keep)
        need = count - have
        if len(idx) >= need:
            attempts += int(idx[need - 1]) + 1
            idx = idx[:need]
        else:
            attempts += chunk
        accepted.append(nu[idx])
        have += len(idx)
        if attempts > config.max_retries * count:
            raise SamplerExhausted(
                f"{attempts} proposals for {have}/{count} samples exceeds the retry budget"
            )
    return np.sort(np.concatenate(accepted), axis=1), attempts


@lru_cache(maxsize=None)
def _kernel_bound(modes: int) -> float:
    x = np.linspace(0.0, 1.0, 20001)
    return 1.02 * float(np.max(kernel.one_point_density(modes, x)))


def _dpp_block(modes: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Chain-rule sampling of the projection DPP, vectorised over samples."""
    if modes == 1:
        return power_law_inverse_cdf(rng.random((count, 1)), 2.5)
    n = modes
    a = kernel.x_exponent(n)
    bound = _kernel_bound(n)
    basis = np.zeros((count, n, n))  # orthonormal rows spanning chosen points
    xs = np.empty((count, n))
    for i in range(n):
        per_row = int(np.ceil(2.0 * bound / (n - i)))
        pending = np.arange(count)
        while pending.size:
            x = rng.random((pending.size, per_row))
            u = rng.random((pending.size, per_row))
            phi = np.sqrt(x**a)[..., None] * kernel.orthonormal_basis(n, x)
            proj = np.einsum("pjk,prk->prj", basis[pending, :i], phi)
            resid = np.sum(phi * phi, axis=-1) - np.sum(proj * proj, axis=-1)
            if np.any(resid > bound):
                raise NumericalError("kernel envelope violated in the DPP sampler")
            hit = u * bound < resid
            rows = np.flatnonzero(hit.any(axis=1))
            first = hit[rows].argmax(axis=1)
            sel = pending[rows]
            xs[sel, i] = x[rows, first]
            v = phi[rows, first] - np.einsum("pj,pjk->pk", proj[rows, first], basis[sel, :i])
            basis[sel, i] = v / np.linalg.norm(v, axis=1, keepdims=True)
            pending = np.delete(pending, rows)
    return kernel.to_nu(xs)


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def sample_batch(config: SamplerConfig, count: int, workers: int = 1) -> SampleBatch:
    """Draw ``count`` spectra; identical output for any ``workers``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    method = config.resolved_method()
    sizes = [min(BLOCK_SIZE, count - start) for start in range(0, count, BLOCK_SIZE)]

    def run(block: int):
        rng = block_rng(config.seed, block)
        if method == "dpp":
            return np.sort(_dpp_block(config.modes, sizes[block], rng), axis=1), sizes[block]
        return _rejection_block(config, sizes[block], rng)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(b) for b in range(len(sizes))]
    spectra = np.concatenate([p[0] for p in parts])
    attempts = sum(p[1] for p in parts)
    batch = SampleBatch(spectra, attempts, method)
    log.info("sampled %d spectra (N=%d, %s), acceptance rate %.3g", count, config.modes, method, batch.acceptance_rate)
    return batch


def sample_covariance(config: SamplerConfig, generator_scale: float, rng: np.random.Generator):
    """Random covariance matrix S^T D S with a Hilbert-Schmidt spectrum.

    ``S = exp(X)`` for a generator with independent N(0, generator_scale^2)
    entries. This is not a uniform measure over the symplectic group, which
    has infinite volume; it is meant for invariance testing.

    Returns:
        tuple: (sigma, spectrum)
    """
    if generator_scale <= 0:
        raise ValueError("generator_scale must be positive")
    nu = sample_spectrum(config, rng)
    s = symplectic_exp(random_generator(config.modes, generator_scale, rng))
    return conjugate(williamson_diagonal(nu), s), nu
