import math

import numpy as np
import pytest
from scipy import integrate, optimize

from fermigap import ensembles as ens
from fermigap.errors import InputError


class TestSampling:
    def test_reproducible_and_order_independent(self):
        config = ens.EnsembleConfig(kind="gaussian", n=5, samples=10, seed=42)
        third = ens.sample_pair(config, 3)
        # drawing other indices first must not change sample 3
        ens.sample_pair(config, 0)
        ens.sample_pair(config, 7)
        again = ens.sample_pair(config, 3)
        assert np.array_equal(third.a, again.a)
        assert np.array_equal(third.b, again.b)

    def test_distinct_indices_differ(self):
        config = ens.EnsembleConfig(kind="gaussian", n=4, samples=2, seed=0)
        assert not np.array_equal(ens.sample_pair(config, 0).a,
                                  ens.sample_pair(config, 1).a)

    def test_wishart_is_psd_with_zero_b(self):
        config = ens.EnsembleConfig(kind="wishart", n=6, samples=1, seed=1)
        pair = ens.sample_pair(config, 0)
        assert np.array_equal(pair.b, np.zeros((6, 6)))
        assert np.linalg.eigvalsh(pair.a).min() >= 0.0

    def test_bounded_uniform_norm(self):
        config = ens.EnsembleConfig(kind="bounded_uniform", n=8, samples=5, seed=2)
        for i in range(5):
            pair = ens.sample_pair(config, i)
            assert np.linalg.norm(pair.c, 2) <= 1.0 + 1e-12

    def test_haar_orthogonal(self):
        q = ens.haar_orthogonal(6, np.random.default_rng(3))
        np.testing.assert_allclose(q @ q.T, np.eye(6), atol=1e-12)

    def test_bad_config_rejected(self):
        with pytest.raises(InputError):
            ens.EnsembleConfig(kind="ginibre", n=4, samples=1, seed=0)
        with pytest.raises(InputError):
            ens.EnsembleConfig(kind="gaussian", n=1, samples=1, seed=0)
        config = ens.EnsembleConfig(kind="gaussian", n=4, samples=2, seed=0)
        with pytest.raises(InputError):
            ens.sample_pair(config, 2)


class TestLimitLaw:
    def test_pdf_integrates_to_one(self):
        total, _ = integrate.quad(ens.edelman_pdf, 0, np.inf)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_cdf_is_pdf_antiderivative(self):
        for x in (0.1, 0.5, 1.0, 3.0):
            num, _ = integrate.quad(ens.edelman_pdf, 0, x)
            assert ens.edelman_cdf(x) == pytest.approx(num, abs=1e-10)

    def test_pdf_value(self):
        assert ens.edelman_pdf(1.0) == pytest.approx(math.exp(-1.5), rel=1e-14)

    def test_median_constant(self):
        root = optimize.brentq(lambda x: ens.edelman_cdf(x) - 0.5, 1e-6, 2.0,
                               xtol=1e-15)
        assert ens.EDELMAN_MEDIAN == pytest.approx(root, abs=1e-12)

    def test_domains(self):
        with pytest.raises(InputError):
            ens.edelman_pdf(0.0)
        with pytest.raises(InputError):
            ens.edelman_cdf(-0.5)


class TestRarity:
    def test_small_cases(self):
        # n=2: (1 - 1/2)^3 = 1/8
        assert ens.rarity_fraction(2, 0.5) == pytest.approx(0.125, rel=1e-14)
        assert ens.rarity_fraction(1, 0.25) == pytest.approx(0.75, rel=1e-14)

    def test_log_route_survives_underflow(self):
        log_val = ens.rarity_log_fraction(40, 0.5)
        assert log_val == pytest.approx((2.0 ** 40 - 1.0) * math.log1p(-0.5), rel=1e-12)
        assert ens.rarity_fraction(40, 0.5) == 0.0  # underflows, no exception

    def test_consistency(self):
        assert math.log(ens.rarity_fraction(6, 0.1)) == pytest.approx(
            ens.rarity_log_fraction(6, 0.1), rel=1e-12)

    def test_monte_carlo_agreement(self):
        # independent oracle: draw uniform level subsets directly
        rng = np.random.default_rng(123)
        n, eps, draws = 4, 0.25, 40000
        hits = 0
        for _ in range(draws):
            lam = np.sort(rng.uniform(0.0, 1.0, size=2 ** n - 1))
            # gap >= eps iff every one of the 2^n - 1 uniforms exceeds eps
            hits += bool(lam[0] >= eps)
        p_hat = hits / draws
        se = math.sqrt(p_hat * (1 - p_hat) / draws) + 1e-6
        assert abs(p_hat - ens.rarity_fraction(n, eps)) <= 4 * se

    def test_domain(self):
        with pytest.raises(InputError):
            ens.rarity_fraction(3, 1.5)


class TestExperiments:
    def test_gap_distribution_small_run(self):
        config = ens.EnsembleConfig(kind="gaussian", n=32, samples=200, seed=9)
        res = ens.gap_distribution_experiment(config)
        assert res.scaled_gaps.shape == (200,)
        assert res.num_degenerate == 0
        assert res.ks_distance < 0.15          # loose: small sample
        assert abs(res.median - ens.EDELMAN_MEDIAN) < 0.15

    def test_gap_distribution_requires_gaussian(self):
        config = ens.EnsembleConfig(kind="wishart", n=8, samples=2, seed=0)
        with pytest.raises(InputError):
            ens.gap_distribution_experiment(config)

    def test_survival_small_run(self):
        config = ens.EnsembleConfig(kind="bounded_uniform", n=32, samples=300, seed=4)
        points = ens.survival_experiment(config, [0.5, 1.0])
        for pt in points:
            assert pt.threshold == pytest.approx(2 * pt.x / 32)
            assert 0.0 <= pt.empirical <= 1.0
            assert abs(pt.empirical - pt.limit) < 0.12

    def test_figure1_counts_conserved(self):
        hist = ens.figure1_experiment(n=6, samples=50, seed=3)
        assert hist.ground_gap_counts.sum() == 50
        assert hist.other_gap_counts.sum() == 50 * (2 ** 6 - 2)
        # consecutive spacings in the dense 2^n spectrum are far smaller
        # than the ground gap 2*sigma_min
        assert hist.median_ground > hist.median_other

    def test_figure2_linearity(self):
        table = ens.figure2_experiment(n=5, seed=5, s_grid=np.linspace(0, 1, 11))
        assert table.levels.shape == (11, 32)
        assert table.max_linearity_defect < 1e-10
        # the s = 0 level table is the free-field ladder -n, -n+2, ..., n
        np.testing.assert_allclose(np.unique(np.round(table.levels[0], 9)),
                                   np.arange(-5.0, 6.0, 2.0), atol=1e-9)
