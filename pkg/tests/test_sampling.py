import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from gaussgeom.exceptions import SamplerExhausted
from gaussgeom.measures import hs_normalization_constant, hs_weight
from gaussgeom.quadrature import integrate_half_lines
from gaussgeom.sampling import (
    SamplerConfig,
    acceptance_probability,
    power_law_inverse_cdf,
    predicted_acceptance_rate,
    proposal_exponent,
    sample_batch,
    sample_covariance,
    sample_spectrum,
    sample_spectrum_one_mode,
)
from gaussgeom.metrics import purity
from gaussgeom.symplectic_core import symplectic_spectrum

from oracles import exact_mean_purity, exact_normalization, sorted_pair_cell_masses


def one_mode_cdf(nu):
    return 1.0 - np.asarray(nu) ** -1.5


def min_survival_two_modes(t):
    return np.asarray(t, dtype=float) ** -10.0


def chi2_sorted_pairs(spectra, edges, min_expected=5.0):
    n = len(spectra)
    masses = np.array(sorted_pair_cell_masses(edges))
    counts, _, _ = np.histogram2d(spectra[:, 0], spectra[:, 1], bins=[edges, edges])
    keep = masses * n >= min_expected
    obs = list(counts[keep])
    exp = list(masses[keep] * n)
    obs.append(n - sum(obs))
    exp.append(n - sum(exp))
    return stats.chisquare(obs, exp)


class TestOneMode:
    def test_inverse_cdf_points(self):
        assert power_law_inverse_cdf(0.0, 2.5) == 1.0
        assert power_law_inverse_cdf(0.75, 2.5) == pytest.approx(4 ** (2 / 3), rel=1e-15)

    def test_single_draw(self, rng):
        nu = sample_spectrum_one_mode(rng)
        assert nu.shape == (1,) and nu[0] >= 1.0

    def test_ks(self):
        spectra = sample_batch(SamplerConfig(1, seed=7), 100_000).spectra[:, 0]
        assert stats.kstest(spectra, one_mode_cdf).statistic < 0.01


class TestAcceptance:
    def test_one_mode_always_accepts(self):
        assert acceptance_probability(np.array([3.3])) == 1.0

    def test_coincident_rejected(self):
        assert acceptance_probability(np.array([2.0, 2.0])) == 0.0

    @settings(max_examples=300)
    @given(st.lists(st.floats(1.0, 1e6), min_size=1, max_size=6))
    def test_bounded_by_one(self, nu):
        p = acceptance_probability(np.array(nu))
        assert 0.0 <= p <= 1.0

    def test_exponents(self):
        assert proposal_exponent(1) == 2.5
        assert proposal_exponent(2) == 4.0

    def test_ratio_is_target_over_proposal(self, rng):
        # target / proposal must be a constant multiple of the acceptance probability
        n = 3
        beta = proposal_exponent(n)
        nu = rng.uniform(1, 5, (20, n))
        ratio = hs_weight(nu) / np.prod(nu, axis=1) ** -beta
        np.testing.assert_allclose(ratio, acceptance_probability(nu), rtol=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_predicted_rate(self, n):
        expected = (proposal_exponent(n) - 1) ** n / float(exact_normalization(n))
        assert predicted_acceptance_rate(n) == pytest.approx(expected, rel=1e-12)


class TestTwoModes:
    @pytest.mark.parametrize("method", ["rejection", "dpp"])
    def test_chi2(self, method):
        spectra = sample_batch(SamplerConfig(2, seed=11, method=method), 100_000).spectra
        edges = np.linspace(1.0, 4.0, 21)
        assert chi2_sorted_pairs(spectra, edges).pvalue > 0.01

    def test_min_marginal_oracles_agree(self):
        z = hs_normalization_constant(2)
        for t in (1.0, 1.05, 1.3, 2.0):
            shifted = integrate_half_lines(lambda v: hs_weight(t * v) * t * t, 2)
            assert z * shifted == pytest.approx(min_survival_two_modes(t), rel=1e-9)

    @pytest.mark.parametrize("method", ["rejection", "dpp"])
    def test_min_marginal_ks(self, method):
        spectra = sample_batch(SamplerConfig(2, seed=5, method=method), 100_000).spectra
        ks = stats.kstest(spectra[:, 0], lambda t: 1 - min_survival_two_modes(t))
        assert ks.statistic < 0.015

    def test_heavier_proposal_is_still_exact(self):
        cfg = SamplerConfig(2, seed=3, tail_exponent=3.0, method="rejection")
        spectra = sample_batch(cfg, 20_000).spectra
        assert stats.kstest(spectra[:, 0], lambda t: 1 - min_survival_two_modes(t)).pvalue > 0.001

    def test_single_draw_loop(self):
        rng = np.random.default_rng(99)
        cfg = SamplerConfig(2, method="rejection")
        mins = np.array([sample_spectrum(cfg, rng)[0] for _ in range(5000)])
        assert stats.kstest(mins, lambda t: 1 - min_survival_two_modes(t)).pvalue > 0.001


class TestBatch:
    def test_determinism_and_workers(self):
        cfg = SamplerConfig(2, seed=42)
        a = sample_batch(cfg, 10_000)
        b = sample_batch(cfg, 10_000, workers=4)
        np.testing.assert_array_equal(a.spectra, b.spectra)
        assert a.attempts == b.attempts
        c = sample_batch(SamplerConfig(2, seed=43), 10_000)
        assert not np.array_equal(a.spectra, c.spectra)

    def test_prefix_stability(self):
        # sample i depends only on (seed, i): a longer batch extends a shorter one
        cfg = SamplerConfig(1, seed=8)
        short = sample_batch(cfg, 5000).spectra
        long = sample_batch(cfg, 9000).spectra
        np.testing.assert_array_equal(long[:4096], short[:4096])

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_support_and_order(self, n):
        spectra = sample_batch(SamplerConfig(n, seed=1), 2000).spectra
        assert spectra.shape == (2000, n)
        assert np.all(spectra >= 1.0)
        assert np.all(np.diff(spectra, axis=1) >= 0)

    def test_acceptance_rate_reported(self):
        batch = sample_batch(SamplerConfig(2, seed=1, method="rejection"), 20_000)
        assert 0 < batch.acceptance_rate <= 1
        assert batch.acceptance_rate == pytest.approx(predicted_acceptance_rate(2), rel=0.05)

    def test_auto_switches_for_large_modes(self, caplog):
        assert SamplerConfig(2).resolved_method() == "rejection"
        assert SamplerConfig(3).resolved_method() == "rejection"
        with caplog.at_level("WARNING"):
            assert SamplerConfig(4).resolved_method() == "dpp"
        assert "DPP" in caplog.text

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_dpp_mean_purity(self, n):
        spectra = sample_batch(SamplerConfig(n, seed=2, method="dpp"), 20_000).spectra
        p = 1 / spectra.prod(axis=1)
        se = p.std(ddof=1) / np.sqrt(len(p))
        assert abs(p.mean() - float(exact_mean_purity(n))) < 4 * se

    def test_retry_budget(self):
        cfg = SamplerConfig(3, seed=1, max_retries=1, method="rejection")
        with pytest.raises(SamplerExhausted):
            sample_batch(cfg, 100)
        with pytest.raises(SamplerExhausted):
            sample_spectrum(cfg, np.random.default_rng(0))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SamplerConfig(2, tail_exponent=5.0)
        with pytest.raises(ValueError):
            SamplerConfig(2, tail_exponent=1.0)
        with pytest.raises(ValueError):
            SamplerConfig(0)
        with pytest.raises(ValueError):
            SamplerConfig(2, seed=-1)
        with pytest.raises(ValueError):
            SamplerConfig(2, method="mcmc")


class TestCovariance:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_spectrum_recovered(self, n):
        rng = np.random.default_rng(n)
        for _ in range(10):
            sigma, nu = sample_covariance(SamplerConfig(n), 0.5, rng)
            np.testing.assert_allclose(symplectic_spectrum(sigma), nu, rtol=1e-8)
            assert purity(symplectic_spectrum(sigma)) == pytest.approx(1 / np.prod(nu), rel=1e-9)

    def test_small_scale_is_diagonal(self):
        sigma, nu = sample_covariance(SamplerConfig(2), 1e-12, np.random.default_rng(0))
        np.testing.assert_allclose(sigma, np.diag(np.concatenate([nu, nu])), atol=1e-9)

    def test_scale_must_be_positive(self):
        with pytest.raises(ValueError):
            sample_covariance(SamplerConfig(1), 0.0, np.random.default_rng(0))
