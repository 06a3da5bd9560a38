import math

import numpy as np
import pytest

from satrack.errors import ConfigError
from satrack.numerics import norm_quantile
from satrack.rng import RngState, gaussian_block
from satrack.signals import (
    ArctanOf,
    Finite,
    Geometric,
    LinearProcessSpec,
    PowerDecay,
    RandomEnvChainSpec,
    Uniform01,
    gen_linear_path,
    gen_random_env_path,
    gen_uniform_path,
    generate_path,
    generate_paths_block,
    stationary_cdf,
    stationary_draws,
    tail_variance,
)

GEO = LinearProcessSpec(Geometric(0.5))
POW = LinearProcessSpec(PowerDecay(3.0))


class TestSpecs:
    def test_rule_validation(self):
        with pytest.raises(ConfigError):
            Geometric(1.0)
        with pytest.raises(ConfigError):
            PowerDecay(0.5)
        with pytest.raises(ConfigError):
            Finite(())
        with pytest.raises(ConfigError):
            Finite((0.0, 1.0))

    def test_env_chain_validation(self):
        with pytest.raises(ConfigError):
            RandomEnvChainSpec(1.0, 0.0, 0.0, 1.0, GEO)
        with pytest.raises(ConfigError):
            RandomEnvChainSpec(0.5, -1.0, 0.0, 1.0, GEO)


class TestTailVariance:
    def test_power_total_is_zeta_six(self):
        assert tail_variance(POW, 0) == pytest.approx(math.pi**6 / 945.0, abs=1e-10)
        assert tail_variance(POW, 0) == pytest.approx(1.0173430619, abs=1e-9)

    def test_geometric_closed_form(self):
        assert tail_variance(GEO, 1) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_finite_no_tail(self):
        assert tail_variance(LinearProcessSpec(Finite((1.0, 0.5))), 2) == 0.0

    def test_power_tail_consistent_with_direct_sum(self):
        direct = sum((j + 1.0) ** -6 for j in range(7, 300000))
        assert tail_variance(POW, 7) == pytest.approx(direct, rel=1e-8)


class TestLinearPaths:
    def test_ma0_path_is_raw_noise(self):
        st = RngState(7, 3)
        p = gen_linear_path(LinearProcessSpec(Finite((1.0,))), st, 50)
        assert np.array_equal(p.values, gaussian_block(7, 3, 0, 50))

    def test_geometric_stationary_variance(self):
        p = gen_linear_path(GEO, RngState(11, 0), 10**6)
        assert p.values.var() == pytest.approx(4.0 / 3.0, rel=0.01)

    def test_power_stationary_variance_moderate_n(self):
        p = gen_linear_path(POW, RngState(12, 0), 200000)
        target = math.pi**6 / 945.0
        # 4 standard errors of the variance estimator (Gaussian: sd ~ sqrt(2/n) * var)
        tol = 4.0 * math.sqrt(2.0 / 200000) * target
        assert abs(p.values.var() - target) <= tol

    def test_block_rows_match_single_paths(self):
        block, _ = generate_paths_block(POW, 99, [4, 5], 300)
        single = gen_linear_path(POW, RngState(99, 4), 300)
        assert np.array_equal(block[0], single.values)

    def test_empty_horizon_rejected(self):
        with pytest.raises(ValueError):
            gen_linear_path(GEO, RngState(1, 0), 0)

    def test_tail_cutoff_consistency(self):
        # paper device: short explicit window + Gaussian lump; the lump
        # variance is analytic, so moments must agree across cutoffs
        a12, _ = generate_paths_block(LinearProcessSpec(PowerDecay(3.0), 12), 31, range(20000), 4)
        a40, _ = generate_paths_block(LinearProcessSpec(PowerDecay(3.0), 40), 31, range(20000), 4)
        se_mean = a12.std() / math.sqrt(a12.size)
        assert abs(a12.mean() - a40.mean()) <= 4.0 * math.sqrt(2.0) * se_mean
        var_se = math.sqrt(2.0 / a12.size) * a12.var()
        assert abs(a12.var() - a40.var()) <= 4.0 * math.sqrt(2.0) * var_se

    def test_stationarity_offset_invariance(self):
        block, _ = generate_paths_block(POW, 77, range(20000), 40)
        first, last = block[:, 0], block[:, -1]
        se = first.std() / math.sqrt(first.size)
        assert abs(first.mean() - last.mean()) <= 4.0 * math.sqrt(2.0) * se
        var_se = math.sqrt(2.0 / first.size) * first.var()
        assert abs(first.var() - last.var()) <= 4.0 * math.sqrt(2.0) * var_se


class TestStationaryCdf:
    def test_symmetry(self):
        assert stationary_cdf(GEO, 0.0) == 0.5
        assert stationary_cdf(POW, 0.0) == 0.5

    def test_geometric_quantile_point(self):
        x = norm_quantile(0.975) * math.sqrt(4.0 / 3.0)  # oracle-derived quantile
        assert stationary_cdf(GEO, x) == pytest.approx(0.975, abs=1e-6)

    def test_power_quantile_point_vs_paper_digits(self):
        assert stationary_cdf(POW, 1.976950) == pytest.approx(0.975, abs=1e-4)


class TestRandomEnvChain:
    def test_reduction_to_iid_gaussian(self):
        spec = RandomEnvChainSpec(0.0, 0.0, 0.0, 1.0, GEO)
        p = gen_random_env_path(spec, RngState(5, 9), 200000)
        assert p.burn_in_used == 0
        assert abs(p.values.mean()) <= 4.0 / math.sqrt(200000)
        assert abs(p.values.var() - 1.0) <= 6.0 / math.sqrt(200000)

    def test_reduction_to_ar1_moments(self):
        spec = RandomEnvChainSpec(0.5, 0.0, 0.0, 1.0, GEO)
        p = gen_random_env_path(spec, RngState(5, 10), 200000)
        # effective sample size shrinks by the AR(1) autocorrelation factor 3
        se_var = math.sqrt(2.0 / (200000 / 3.0)) * (4.0 / 3.0)
        assert abs(p.values.var() - 4.0 / 3.0) <= 3.0 * se_var
        assert p.burn_in_used == math.ceil(math.log(1e-12) / math.log(0.5))

    def test_full_chain_fourth_moment_bounded(self):
        spec = RandomEnvChainSpec(0.3, 0.5, 1.0, 1.0, GEO)
        p = gen_random_env_path(spec, RngState(5, 11), 100000)
        fourth = float(np.mean(p.values**4))
        assert np.isfinite(fourth)
        # crude analytic envelope: |X| <= (rho + sqrt(1-rho^2)|e|) e^1 / (1-kappa) growth
        assert fourth < 500.0


class TestOtherSignals:
    def test_uniform_path_range(self):
        p = gen_uniform_path(RngState(1, 0), 1000)
        assert p.values.min() > 0.0 and p.values.max() < 1.0

    def test_arctan_wraps_linear(self):
        st1, st2 = RngState(3, 4), RngState(3, 4)
        base = gen_linear_path(POW, st1, 100)
        wrapped = generate_path(ArctanOf(POW), st2, 100)
        assert np.array_equal(wrapped.values, np.arctan(base.values))

    def test_stationary_draws_match_marginals(self):
        d = stationary_draws(GEO, RngState(8, 1), 200000)
        assert abs(d.var() - 4.0 / 3.0) <= 4.0 * math.sqrt(2.0 / 200000) * (4.0 / 3.0)
        u = stationary_draws(Uniform01(), RngState(8, 2), 1000)
        assert u.min() > 0.0 and u.max() < 1.0
