"""Ensemble averages and figure data for random Gaussian states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernel
from .measures import (
    bures_truncated_integral,
    hs_normalization_constant,
    hs_weight,
    purity_density,
    spectral_integral,
)
from .metrics import mode_entropy
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .sampling import DEFAULT_SEED, SamplerConfig, sample_batch

OBSERVABLES = ("purity", "entropy")


def purity_values(spectra) -> np.ndarray:
    return 1.0 / np.prod(np.atleast_2d(spectra), axis=1)


def entropy_values(spectra) -> np.ndarray:
    return np.sum(mode_entropy(np.atleast_2d(spectra)), axis=1)


_EVALUATORS = {"purity": purity_values, "entropy": entropy_values}


def _check_observable(name: str) -> None:
    if name not in OBSERVABLES:
        raise ValueError(f"observable must be one of {OBSERVABLES}, got {name!r}")


@dataclass(frozen=True)
class EnsembleSummary:
    observable: str
    modes: int
    method: str  # "monte-carlo" or "quadrature"
    estimate: float
    standard_error: float
    sample_count: Optional[int] = None
    tolerance: Optional[float] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class HistogramSeries:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def heights(self) -> np.ndarray:
        return self.counts / (self.counts.sum() * np.diff(self.edges))

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])


def mc_mean(observable: str, modes: int, count: int, seed: int = DEFAULT_SEED, workers: int = 1, method: str = "auto") -> EnsembleSummary:
    """Monte Carlo mean of an observable with its standard error."""
    _check_observable(observable)
    if count < 1:
        raise ValueError("count must be >= 1")
    batch = sample_batch(SamplerConfig(modes, seed=seed, method=method), count, workers)
    values = _EVALUATORS[observable](batch.spectra)
    se = float(values.std(ddof=1) / np.sqrt(count)) if count > 1 else 0.0
    return EnsembleSummary(observable, modes, "monte-carlo", float(values.mean()), se, sample_count=count, seed=seed)


def quad_mean(observable: str, modes: int, config: QuadratureConfig = DEFAULT_CONFIG, route: str = "kernel") -> EnsembleSummary:
    """Quadrature mean of an observable under P_N.

    ``route="kernel"`` reduces the N-dimensional integral to one-dimensional
    integrals against the orthonormal-polynomial kernel (any N).
    ``route="nested"`` integrates over [1, inf)^N directly (N <= 3).
    """
    _check_observable(observable)
    if route == "kernel":
        if observable == "purity":
            value = kernel.product_mean(modes, lambda nu: 1.0 / nu, config)
        else:
            value = kernel.additive_mean(modes, mode_entropy, config)
    elif route == "nested":
        if modes > 3:
            raise ValueError("nested quadrature is limited to N <= 3")
        f = _EVALUATORS[observable]
        value = hs_normalization_constant(modes, config) * spectral_integral(modes, lambda nu: f(nu)[0], config)
    else:
        raise ValueError(f"unknown route {route!r}")
    return EnsembleSummary(observable, modes, "quadrature", float(value), 0.0, tolerance=config.rtol)


def purity_histogram(modes: int, count: int, bins: int, seed: int = DEFAULT_SEED, workers: int = 1) -> HistogramSeries:
    """Normalized histogram of the purity of sampled states on (0, 1]."""
    if count < bins:
        raise ValueError("count must be at least the number of bins")
    batch = sample_batch(SamplerConfig(modes, seed=seed), count, workers)
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(purity_values(batch.spectra), bins=edges)
    return HistogramSeries(edges, counts)


_BURES_OBSERVABLES = {
    "unit": None,
    "purity": lambda nu: 1.0 / nu,
    "entropy": mode_entropy,
}


def bures_truncated_mean(observable: str, cutoff: float, config: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Mean of a one-mode observable under the Bures density truncated at ``cutoff``."""
    if observable not in _BURES_OBSERVABLES:
        raise ValueError(f"observable must be one of {tuple(_BURES_OBSERVABLES)}")
    f = _BURES_OBSERVABLES[observable]
    if f is None:
        return 1.0
    return bures_truncated_integral(cutoff, f, config) / bures_truncated_integral(cutoff, None, config)


FIGURES = ("means", "purity_dist", "spectral_density")


def figure_data(figure: str, modes=None, points: int = 101, count: int = 20000, seed: int = DEFAULT_SEED, workers: int = 1, nu_max: float = 4.0):
    """Tabulated columns for the standard figures.

    Returns:
        tuple: (header, rows) with ``rows`` a list of tuples.

    * ``spectral_density``: one mode gives (nu, P_1); two modes give a grid
      (nu1, nu2, P_2) on [1, nu_max]^2.
    * ``means``: (modes, purity, purity_se, entropy, entropy_se, method);
      quadrature for N <= 4 and Monte Carlo above.
    * ``purity_dist``: (mu, P_N(mu) for each requested N).
    """
    if figure == "spectral_density":
        n = 1 if modes is None else int(modes)
        z = hs_normalization_constant(n)
        grid = np.linspace(1.0, nu_max, points)
        if n == 1:
            return ["nu", "density"], [(float(v), float(z * hs_weight(np.array([v])))) for v in grid]
        if n == 2:
            rows = [(float(a), float(b), float(z * hs_weight(np.array([a, b])))) for a in grid for b in grid]
            return ["nu1", "nu2", "density"], rows
        raise ValueError("spectral_density figure supports N = 1 or 2")
    if figure == "means":
        top = 6 if modes is None else int(modes)
        rows = []
        for n in range(1, top + 1):
            if n <= 4:
                p, s = quad_mean("purity", n), quad_mean("entropy", n)
                rows.append((n, p.estimate, 0.0, s.estimate, 0.0, "quadrature"))
            else:
                cfg = SamplerConfig(n, seed=seed)
                spectra = sample_batch(cfg, count, workers).spectra
                pv, sv = purity_values(spectra), entropy_values(spectra)
                rows.append((
                    n,
                    float(pv.mean()), float(pv.std(ddof=1) / np.sqrt(count)),
                    float(sv.mean()), float(sv.std(ddof=1) / np.sqrt(count)),
                    "monte-carlo",
                ))
        return ["modes", "purity", "purity_se", "entropy", "entropy_se", "method"], rows
    if figure == "purity_dist":
        ns = [1, 2, 3] if modes is None else [int(m) for m in np.atleast_1d(modes)]
        grid = np.linspace(0.0, 1.0, points)
        rows = []
        for mu in grid:
            vals = [0.0 if mu == 0.0 else purity_density(n, float(mu)) for n in ns]
            rows.append((float(mu), *vals))
        return ["mu", *[f"P_N{n}" for n in ns]], rows
    raise ValueError(f"figure must be one of {FIGURES}")
