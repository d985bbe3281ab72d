"""Path generator tests: exact schemes, circulant embedding, truncation."""

import math

import numpy as np
import pytest

from mfcascade import (EmbeddingError, Gamma, Gaussian, TemperedStable,
                       UnsupportedParameter, mean_var, substream)
from mfcascade.ou_paths import (ExponentialCorr, PowerLawCorr,
                                SuperpositionCorr, sample_gamma_ou_exact,
                                sample_gaussian_ar1, sample_gaussian_general,
                                sample_ou_bdlp_truncated)


def replica_stats(sampler, n_rep, seed, picks):
    """Columns of sampled values at the given grid indices over replicas."""
    out = np.empty((n_rep, len(picks)))
    for r in range(n_rep):
        v = sampler(substream(seed, r)).values
        out[r] = [v[i] for i in picks]
    return out


class TestGaussianAr1:
    def test_white_noise_limit(self):
        # lam*dt = 20 kills the lag-1 correlation
        p = sample_gaussian_ar1(1.0, 20.0 * 2 ** 10, 10, substream(1), dt=2.0 ** -10)
        big = np.concatenate([sample_gaussian_ar1(
            1.0, 20.0 * 2 ** 10, 10, substream(1, r)).values for r in range(1000)])
        x = big.reshape(1000, -1)
        lag1 = np.mean(x[:, :-1] * x[:, 1:])
        assert abs(lag1) < 0.005
        assert p.n_points == 2 ** 10 + 1

    def test_lag_one_time_unit(self):
        cols = replica_stats(
            lambda g: sample_gaussian_ar1(1.0, 1.0, 10, g), 1000, 2, [0, 1024])
        corr = np.mean(cols[:, 0] * cols[:, 1])
        assert corr == pytest.approx(math.exp(-1.0), abs=0.05)

    def test_stationary_variance(self):
        cols = replica_stats(
            lambda g: sample_gaussian_ar1(2.5, 1.0, 8, g), 2000, 3, [0, 128])
        se = 2.5 * math.sqrt(2.0 / 2000)
        assert abs(cols[:, 0].var() - 2.5) < 3 * se
        assert abs(cols[:, 1].var() - 2.5) < 3 * se

    def test_determinism(self):
        a = sample_gaussian_ar1(1.0, 1.0, 8, substream(9, 5)).values
        b = sample_gaussian_ar1(1.0, 1.0, 8, substream(9, 5)).values
        assert np.array_equal(a, b)

    def test_stationarity_halves(self):
        # first- and second-half moments of a long path agree within noise
        p = sample_gaussian_ar1(1.0, 64.0, 16, substream(4))
        half = p.n_points // 2
        a, b = p.values[:half], p.values[half:]
        n_eff = half * (1 - math.exp(-64 * p.dt)) / (1 + math.exp(-64 * p.dt))
        se = math.sqrt(2.0 / n_eff)
        assert abs(a.var() - b.var()) < 4 * se


class TestGaussianGeneral:
    def test_matches_ar1_law(self):
        cols = replica_stats(
            lambda g: sample_gaussian_general(1.0, ExponentialCorr(1.0), 9, g),
            3000, 5, [0, 512])
        assert cols[:, 0].var() == pytest.approx(1.0, abs=0.08)
        assert np.mean(cols[:, 0] * cols[:, 1]) == pytest.approx(
            math.exp(-1.0), abs=0.06)

    def test_power_law_corr(self):
        cols = replica_stats(
            lambda g: sample_gaussian_general(1.0, PowerLawCorr(1.0), 9, g),
            3000, 6, [0, 512])
        assert np.mean(cols[:, 0] * cols[:, 1]) == pytest.approx(
            2.0 ** -0.5, abs=0.06)
        assert cols[:, 0].var() == pytest.approx(1.0, abs=0.08)

    def test_superposition_corr_callable(self):
        dep = SuperpositionCorr(((1.0, 1.0), (0.5, 0.2)))
        assert dep.corr(0.0) == pytest.approx(1.0)
        want = (1.0 * math.exp(-0.5) + 0.5 * math.exp(-0.1)) / 1.5
        assert dep.corr(0.5) == pytest.approx(want)

    def test_hurst_truncation_rule(self):
        dep = SuperpositionCorr.from_hurst(0.75, 1.0)
        n = len(dep.components)
        p = 1.5
        from scipy.special import zeta
        tail = n ** (1 - p) / (p - 1)
        assert tail <= 0.005 * zeta(p, 1) * 1.05
        deltas = [d for d, _ in dep.components]
        assert deltas[0] == pytest.approx(1.0)
        assert all(a > b for a, b in zip(deltas, deltas[1:]))

    def test_not_embeddable_raises(self):
        # an oscillatory "correlation" that is not positive semidefinite
        bad = lambda tau: np.cos(200.0 * np.asarray(tau)) * np.exp(
            -0.001 * np.asarray(tau) ** 2) * (1 - 1e-9) + 1e-9
        corr = type("Bad", (), {"corr": staticmethod(bad)})()
        with pytest.raises(EmbeddingError):
            sample_gaussian_general(1.0, corr, 6, substream(7))


class TestGammaOuExact:
    def test_moments(self):
        cols = replica_stats(
            lambda g: sample_gamma_ou_exact(3.0, 1.0, 1.0, 8, g), 3000, 10, [0, 128])
        assert cols[:, 1].mean() == pytest.approx(1 / 3, abs=0.02)
        assert cols[:, 1].var() == pytest.approx(1 / 9, abs=0.02)

    def test_autocovariance(self):
        # covariance (beta/alpha^2) e^{-lam tau} at tau = 0.5
        cols = replica_stats(
            lambda g: sample_gamma_ou_exact(3.0, 1.0, 1.0, 8, g), 4000, 11, [0, 128])
        cov = np.mean(cols[:, 0] * cols[:, 1]) - cols[:, 0].mean() * cols[:, 1].mean()
        assert cov == pytest.approx((1 / 9) * math.exp(-0.5), abs=0.01)

    def test_zero_shape_degenerates(self):
        p = sample_gamma_ou_exact(3.0, 0.0, 1.0, 8, substream(12))
        assert np.all(p.values == 0.0)

    def test_determinism(self):
        a = sample_gamma_ou_exact(3.0, 1.0, 2.0, 8, substream(13, 1)).values
        b = sample_gamma_ou_exact(3.0, 1.0, 2.0, 8, substream(13, 1)).values
        assert np.array_equal(a, b)


class TestTruncatedBdlp:
    def test_gamma_against_exact_oracle(self):
        # the exact gamma scheme is the oracle for the generic scheme
        exact = replica_stats(
            lambda g: sample_gamma_ou_exact(3.0, 1.0, 1.0, 8, g), 2000, 20, [0, 64])
        trunc = replica_stats(
            lambda g: sample_ou_bdlp_truncated(
                Gamma(3.0, 1.0), 1.0, 8, 1e-4, g), 2000, 21, [0, 64])
        assert trunc.mean() == pytest.approx(exact.mean(), abs=0.02 * exact.mean() + 0.02)
        assert trunc[:, 1].var() == pytest.approx(exact[:, 1].var(), rel=0.15)

    def test_exp_correlation(self):
        cols = replica_stats(
            lambda g: sample_ou_bdlp_truncated(
                TemperedStable(0.5, 1.0, 3.0), 1.0, 7, 1e-4, g), 4000, 22, [0, 64])
        a, b = cols[:, 0], cols[:, 1]
        rho = np.mean((a - a.mean()) * (b - b.mean())) / (a.std() * b.std())
        assert rho == pytest.approx(math.exp(-0.5), abs=0.04)

    def test_truncation_monotone(self):
        meta_coarse = sample_ou_bdlp_truncated(
            TemperedStable(0.5, 1.0, 3.0), 1.0, 6, 2e-4, substream(23)).meta
        meta_fine = sample_ou_bdlp_truncated(
            TemperedStable(0.5, 1.0, 3.0), 1.0, 6, 1e-4, substream(23)).meta
        assert (meta_fine["small_jump_variance"]
                < meta_coarse["small_jump_variance"])

    def test_gaussian_unsupported(self):
        with pytest.raises(UnsupportedParameter):
            sample_ou_bdlp_truncated(Gaussian(1.0), 1.0, 6, 1e-4, substream(24))

    def test_stationary_mean_all_families(self):
        from test_marginals import FAMILIES
        for name, spec in FAMILIES.items():
            if name == "gaussian":
                continue
            cols = replica_stats(
                lambda g, s=spec: sample_ou_bdlp_truncated(s, 1.0, 6, 1e-4, g),
                400, 25, [0, 64])
            m = mean_var(spec)[0]
            last = cols[:, 1]
            se = last.std(ddof=1) / math.sqrt(last.size)
            assert abs(last.mean() - m) < 4 * se, name
