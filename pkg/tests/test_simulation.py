import math

import numpy as np
import pytest

from intrinsic_credibility import simulation
from intrinsic_credibility.core import p_intrinsic, two_sided_p
from intrinsic_credibility.errors import DomainError
from intrinsic_credibility.simulation import (
    SimulationConfig,
    closed_form_flip,
    sample_replication_estimates,
    simulate_replication,
)

import oracle

SE = 0.765320185386981
TOP_FLIP = 0.01044851503805735
BOTTOM_FLIP = 0.04514381105715347


def test_frozen_flip_values():
    assert oracle.study(1, 4)["flip"] == pytest.approx(TOP_FLIP, rel=1e-14)
    assert oracle.study(1 / 3, 10 / 3)["flip"] == pytest.approx(BOTTOM_FLIP, rel=1e-14)


class TestClosedForm:
    def test_zero_estimate(self):
        assert closed_form_flip(0.0, 1.0) == 0.5

    def test_worked_example(self):
        assert closed_form_flip(2.5, SE) == pytest.approx(TOP_FLIP, rel=1e-12)
        assert closed_form_flip(11 / 6, SE) == pytest.approx(BOTTOM_FLIP, rel=1e-12)
        assert f"{closed_form_flip(11 / 6, SE):.2g}" == "0.045"

    def test_equals_half_p_intrinsic(self):
        rng = np.random.default_rng(3)
        for est, se in zip(rng.uniform(-5, 5, 200), rng.uniform(0.1, 3, 200)):
            p = two_sided_p(est / se)
            if p == 0.0 or p >= 1.0:
                continue
            assert closed_form_flip(est, se) == pytest.approx(p_intrinsic(p) / 2, rel=1e-12, abs=1e-12)

    def test_bad_se(self):
        with pytest.raises(DomainError):
            closed_form_flip(1.0, 0.0)


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(first_estimate=1.0, std_error=0.0),
        dict(first_estimate=1.0, std_error=1.0, num_draws=0),
        dict(first_estimate=1.0, std_error=1.0, num_draws=2.5),
        dict(first_estimate=1.0, std_error=1.0, seed=-1),
        dict(first_estimate=math.inf, std_error=1.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            SimulationConfig(**kwargs)

    def test_zero_estimate_rejected(self):
        with pytest.raises(DomainError):
            simulate_replication(SimulationConfig(0.0, 1.0, 100))


class TestSimulation:
    @pytest.mark.parametrize("estimate, expected", [(2.5, TOP_FLIP), (11 / 6, BOTTOM_FLIP)])
    def test_worked_example(self, estimate, expected):
        r = simulate_replication(SimulationConfig(estimate, SE, 10 ** 6, seed=11))
        assert r.closed_form == pytest.approx(expected, rel=1e-12)
        assert abs(r.flip_probability - r.closed_form) <= 3 * r.monte_carlo_se

    def test_bottom_study_four_and_a_half_percent(self):
        r = simulate_replication(SimulationConfig(11 / 6, SE, 10 ** 6, seed=5))
        assert round(r.flip_probability, 3) == 0.045

    def test_se_formula(self):
        r = simulate_replication(SimulationConfig(1.0, 1.0, 5000, seed=2))
        f = r.flip_probability
        assert r.monte_carlo_se == math.sqrt(f * (1 - f) / 5000)
        assert r.p_rep == 1 - f

    def test_overwhelming_effect(self):
        r = simulate_replication(SimulationConfig(100.0, 1.0, 10 ** 5, seed=1))
        assert r.flip_probability == 0.0

    def test_convergence_grid(self):
        rng = np.random.default_rng(21)
        for _ in range(6):
            se = rng.uniform(0.2, 3.0)
            est = rng.choice([-1, 1]) * rng.uniform(0.3, 4.0) * se
            r = simulate_replication(SimulationConfig(est, se, 2 * 10 ** 5, seed=int(rng.integers(1 << 31))))
            assert abs(r.z_score) <= 4

    def test_determinism(self):
        cfg = SimulationConfig(1.2, 0.8, 300_001, seed=99)
        assert simulate_replication(cfg) == simulate_replication(cfg)

    def test_worker_count_does_not_matter(self):
        cfg = SimulationConfig(1.2, 0.8, 300_001, seed=99)
        assert simulate_replication(cfg, workers=1) == simulate_replication(cfg, workers=5)

    def test_seed_matters(self):
        a = simulate_replication(SimulationConfig(1.2, 0.8, 10 ** 5, seed=1))
        b = simulate_replication(SimulationConfig(1.2, 0.8, 10 ** 5, seed=2))
        assert a.flip_probability != b.flip_probability

    def test_sign_symmetry(self):
        pos = simulate_replication(SimulationConfig(1.5, 1.0, 10 ** 6, seed=4))
        neg = simulate_replication(SimulationConfig(-1.5, 1.0, 10 ** 6, seed=8))
        assert pos.closed_form == neg.closed_form
        spread = math.hypot(pos.monte_carlo_se, neg.monte_carlo_se)
        assert abs(pos.flip_probability - neg.flip_probability) <= 4 * spread

    def test_negative_branch_counts_non_negative(self):
        # est2 >= 0 counts as a flip when est1 < 0
        z0 = np.array([0.0, 0.0, 0.0])
        z1 = np.array([1.0, 0.5, 2.0])
        for count in (simulation.count_flips_numpy, simulation.count_flips_numba):
            assert count(z0, z1, -1.0, 1.0) == 2
            assert count(z0, -z1, 1.0, 1.0) == 2


class TestCollapsedForm:
    def test_moments(self):
        est, se, n = 1.4, 0.6, 10 ** 6
        draws = sample_replication_estimates(SimulationConfig(est, se, n, seed=3))
        assert draws.shape == (n,)
        target_var = 2 * se ** 2
        assert abs(draws.mean() - est) <= 4 * math.sqrt(target_var / n)
        assert draws.var() == pytest.approx(target_var, rel=0.05)

    def test_same_streams_as_counter(self):
        cfg = SimulationConfig(0.9, 0.7, 200_000, seed=13)
        draws = sample_replication_estimates(cfg)
        assert np.count_nonzero(draws <= 0) / cfg.num_draws == simulate_replication(cfg).flip_probability
