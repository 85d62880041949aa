import numpy as np
import pytest

from gaussgeom.symplectic_core import (
    HamiltonianGenerator,
    random_generator,
    symplectic_exp,
    williamson_diagonal,
)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_symplectic(modes, rng, scale=0.5):
    return symplectic_exp(random_generator(modes, scale, rng))


def random_state(modes, rng, scale=0.5, nu_range=(1.0, 4.0)):
    """Physical covariance S^T D S and its (sorted) spectrum."""
    nu = np.sort(rng.uniform(*nu_range, modes))
    s = random_symplectic(modes, rng, scale)
    sigma = s.T @ williamson_diagonal(nu) @ s
    return 0.5 * (sigma + sigma.T), nu


def williamson_chart(modes, nu, s0):
    """Covariance as a function of (d_nu, canonical generator coordinates)."""
    def sigma(delta):
        x = HamiltonianGenerator.from_vector(delta[modes:], modes, canonical=True)
        s = symplectic_exp(x) @ s0
        out = s.T @ williamson_diagonal(nu + delta[:modes]) @ s
        return 0.5 * (out + out.T)
    return sigma


def fd_metric(dist2, chart, dim, h):
    """Metric tensor g with d^2 ~ delta^T g delta, by central differences."""
    base = chart(np.zeros(dim))
    f = lambda d: dist2(base, chart(d))
    e = np.eye(dim) * h
    g = np.zeros((dim, dim))
    for i in range(dim):
        g[i, i] = (f(2 * e[i]) + f(-2 * e[i])) / (8 * h * h)
        for j in range(i):
            g[i, j] = g[j, i] = (
                f(e[i] + e[j]) - f(e[i] - e[j]) - f(e[j] - e[i]) + f(-e[i] - e[j])
            ) / (8 * h * h)
    return g


def random_perturbation(sigma, rng):
    """Symmetric direction of unit size relative to sigma (L M L^T, sigma = L L^T)."""
    low = np.linalg.cholesky(sigma)
    m = rng.normal(size=sigma.shape)
    m = 0.5 * (m + m.T) / np.sqrt(sigma.shape[0])
    return low @ m @ low.T
