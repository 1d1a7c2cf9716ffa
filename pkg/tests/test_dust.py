import math

import numpy as np
import pytest

from lensdelay.dust import (
    DustModelConfig,
    coherence_offdiag,
    layer_survival,
    loss_rate,
    simulate_tree,
    simulate_tree_batch,
    variance_bound,
)
from lensdelay.rng import stream


def _cfg(d_over_r=1024, rho=3.2e-7, dims=2, R=1e6):
    return DustModelConfig(r=1.0, d=float(d_over_r), R=R, rho_N=rho, dims=dims)


class TestLayerSurvival:
    def test_no_dust(self):
        cfg = _cfg(rho=0.0)
        assert all(layer_survival(k, cfg) == 1.0 for k in range(1, cfg.n_layers + 1))

    def test_layer_two_form(self):
        cfg = _cfg()
        x = cfg.r**2 * cfg.R * cfg.rho_N / cfg.d
        assert abs(layer_survival(2, cfg) - math.exp(-3.0 * x / 4.0)) < 1e-15

    def test_decreasing_in_depth(self):
        cfg = _cfg()
        qs = [layer_survival(k, cfg) for k in range(1, cfg.n_layers + 1)]
        assert all(a > b for a, b in zip(qs, qs[1:]))

    def test_range_check(self):
        cfg = _cfg()
        with pytest.raises(ValueError):
            layer_survival(0, cfg)
        with pytest.raises(ValueError):
            layer_survival(cfg.n_layers + 1, cfg)


class TestLossRate:
    def test_no_dust(self):
        assert loss_rate(_cfg(rho=0.0)) == 0.0

    def test_ninety_percent_loss(self):
        # choose rho with 3 r R rho / 4 = ln 10 and r << d
        cfg = DustModelConfig(r=1.0, d=2**20, R=1e9, rho_N=4.0 * math.log(10.0) / 3e9)
        assert abs(loss_rate(cfg) - 0.9) < 1e-4

    def test_product_of_layers_matches_closed_form(self):
        cfg = _cfg()
        prod = 1.0
        for k in range(1, cfg.n_layers + 1):
            prod *= layer_survival(k, cfg)
        assert abs(prod - (1.0 - loss_rate(cfg))) < 1e-12

    def test_small_particle_d_independence(self):
        # r/d <= 1e-3: halving r at fixed d changes nothing but the 3rRrho/4
        # exponent; doubling d changes the survival by < 1%
        a = DustModelConfig(r=1.0, d=2**12, R=1e6, rho_N=1e-6)
        b = DustModelConfig(r=1.0, d=2**13, R=1e6, rho_N=1e-6)
        assert abs(loss_rate(a) - loss_rate(b)) < 0.01 * max(loss_rate(a), 1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            DustModelConfig(r=2.0, d=1.0, R=1.0, rho_N=0.0)
        with pytest.raises(ValueError):
            DustModelConfig(r=1.0, d=3.0, R=1.0, rho_N=0.0)  # d/r not power of 2
        with pytest.raises(ValueError):
            DustModelConfig(r=1.0, d=4.0, R=1.0, rho_N=0.0, dims=4)


class TestVarianceBound:
    def test_paper_3d_value(self):
        bound_var = (1 + 2 * math.log2(1e7)) * 0.1 / (1e7) ** 2
        assert abs(math.sqrt(bound_var) - 2.2e-7) < 0.05e-7

    def test_smallest_tree(self):
        cfg = DustModelConfig(r=1.0, d=2.0, R=1e6, rho_N=1e-7, dims=2)
        expected = 2.0 * (1.0 - loss_rate(cfg)) / 2.0
        assert abs(variance_bound(cfg) - expected) < 1e-15

    def test_inverse_scaling_2d(self):
        a = _cfg(d_over_r=2**10)
        b = _cfg(d_over_r=2**11)
        ratio = variance_bound(a) / variance_bound(b)
        # 1/(d/r) scaling up to the log factor and survival change
        assert 1.5 < ratio < 2.5


class TestSimulateTree:
    def test_no_dust_fraction_one(self):
        result = simulate_tree(_cfg(rho=0.0), stream(31))
        assert result.unblocked_fraction == 1.0
        assert result.blocked_per_layer.sum() == 0

    def test_mean_matches_closed_form(self):
        cfg = _cfg()
        fractions = simulate_tree_batch(cfg, 20_000, stream(32))
        expected = 1.0 - loss_rate(cfg)
        se = fractions.std(ddof=1) / math.sqrt(fractions.size)
        assert abs(fractions.mean() - expected) < 3.0 * se

    def test_variance_below_bound(self):
        cfg = _cfg()
        fractions = simulate_tree_batch(cfg, 20_000, stream(33))
        assert fractions.var(ddof=1) <= variance_bound(cfg)

    def test_batch_matches_single(self):
        cfg = _cfg(d_over_r=64, rho=1e-5)
        singles = np.array([
            simulate_tree(cfg, stream(34, t)).unblocked_fraction for t in range(3000)
        ])
        batch = simulate_tree_batch(cfg, 3000, stream(35))
        assert abs(singles.mean() - batch.mean()) < 4 * singles.std() / math.sqrt(3000)

    def test_oversize_rejected(self):
        cfg = DustModelConfig(r=1.0, d=2.0**21, R=1e6, rho_N=0.0)
        with pytest.raises(ValueError):
            simulate_tree(cfg, stream(36))

    def test_randomized_sweep_variance_bound(self):
        rng = stream(37)
        for trial in range(10):
            d_over_r = 2 ** int(rng.integers(4, 12))
            rho = float(10 ** rng.uniform(-8, -5.5))
            cfg = DustModelConfig(r=1.0, d=float(d_over_r), R=1e6, rho_N=rho, dims=2)
            fractions = simulate_tree_batch(cfg, 10_000, stream(38, trial))
            assert fractions.var(ddof=1) <= variance_bound(cfg)

    def test_4ary_spot_check_3d(self):
        from lensdelay.dust import simulate_tree_4ary

        cfg = DustModelConfig(r=1.0, d=2.0**7, R=1e6, rho_N=2e-5, dims=3)
        fractions = simulate_tree_4ary(cfg, 4000, stream(39))
        expected = 1.0 - loss_rate(cfg)
        se = fractions.std(ddof=1) / math.sqrt(fractions.size)
        assert abs(fractions.mean() - expected) < 3.0 * se + 1e-4
        assert fractions.var(ddof=1) <= variance_bound(cfg)
        with pytest.raises(ValueError):
            simulate_tree_4ary(_cfg(d_over_r=2**11), 10, stream(40))


class TestCoherence:
    def test_no_decoherence(self):
        assert coherence_offdiag(0.0) == 0.5

    def test_small_sigma_series(self):
        assert abs(coherence_offdiag(0.1) - (0.5 - 0.01)) < 1e-3
        assert abs(coherence_offdiag(0.05) - (0.5 - 0.0025)) < 1e-3

    def test_mixing_tendency_and_flat_floor(self):
        # monotone decoherence; the truncated-Gaussian model floors at
        # E[sqrt(x(1-x))] over the flat distribution = pi/8, not 0
        sigmas = [0.05, 0.1, 0.2, 0.4, 1 / math.sqrt(2)]
        values = [coherence_offdiag(s) for s in sigmas]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] < 0.41
        assert abs(values[-1] - math.pi / 8) < 0.02

    def test_domain(self):
        with pytest.raises(ValueError):
            coherence_offdiag(0.8)
