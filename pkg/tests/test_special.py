import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intrinsic_credibility import special
from intrinsic_credibility.errors import DomainError
from intrinsic_credibility.special import (
    chisq1_upper_tail,
    std_normal_cdf,
    std_normal_quantile,
)

import oracle

# Frozen from oracle.py (50-digit mpmath).
Z_975 = 1.9599639845400538
Z_95 = 1.6448536269514722
CDF_1_959964 = 0.9750000009035577
TAIL_3_841459 = 0.04999999465319577
TAIL_6_8292 = 0.008967942340510016


def test_frozen_values_match_oracle():
    assert oracle.quantile(0.975) == pytest.approx(Z_975, rel=1e-15)
    assert oracle.quantile(0.95) == pytest.approx(Z_95, rel=1e-15)
    assert oracle.cdf(1.959964) == pytest.approx(CDF_1_959964, rel=1e-15)
    assert oracle.chisq1_tail(3.841459) == pytest.approx(TAIL_3_841459, rel=1e-15)
    assert oracle.chisq1_tail(6.8292) == pytest.approx(TAIL_6_8292, rel=1e-15)


class TestCdf:
    def test_median(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_known_value(self):
        assert std_normal_cdf(1.959964) == pytest.approx(CDF_1_959964, abs=1e-12)
        assert round(std_normal_cdf(1.959964), 6) == 0.975

    def test_absolute_error_against_oracle(self):
        xs = np.linspace(-8, 8, 801)
        err = max(abs(std_normal_cdf(x) - oracle.cdf(x)) for x in xs)
        assert err <= 1e-12

    def test_lower_tail_relative_accuracy(self):
        for x in (-5.0, -8.0, -12.0, -20.0):
            assert std_normal_cdf(x) == pytest.approx(oracle.cdf(x), rel=1e-13)

    @given(st.floats(-40, 40))
    def test_symmetry(self, x):
        assert abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-14

    def test_monotone(self):
        x = np.linspace(-10, 10, 20001)
        assert np.all(np.diff(special.std_normal_cdf_vec(x)) >= 0)

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_non_finite(self, bad):
        with pytest.raises(DomainError):
            std_normal_cdf(bad)


class TestQuantile:
    def test_median(self):
        assert std_normal_quantile(0.5) == 0.0

    @pytest.mark.parametrize("p, z", [(0.975, Z_975), (0.95, Z_95)])
    def test_known_values(self, p, z):
        assert std_normal_quantile(p) == pytest.approx(z, abs=1e-14)

    def test_against_oracle_all_branches(self):
        # central, intermediate tail and far tail (r > 5 once p < ~1.4e-11)
        for p in (1e-300, 1e-100, 1e-20, 1e-12, 1e-6, 0.01, 0.07, 0.3, 0.5, 0.8, 0.99, 1 - 1e-9):
            assert std_normal_quantile(p) == pytest.approx(oracle.quantile(p), rel=1e-14, abs=1e-15)

    def test_round_trip_dense(self):
        p = np.concatenate([
            np.logspace(-12, np.log10(0.5), 4000),
            1.0 - np.logspace(-12, np.log10(0.5), 4000),
            np.linspace(1e-12, 1 - 1e-12, 4001),
        ])
        back = special.std_normal_cdf_vec(special.std_normal_quantile_vec(p))
        assert np.max(np.abs(back - p)) <= 1e-10

    @settings(max_examples=300)
    @given(st.floats(-8, 8))
    def test_inverse_of_cdf(self, x):
        p = std_normal_cdf(x)
        if 1e-12 <= p <= 1 - 1e-12:
            assert abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-10

    def test_monotone(self):
        p = np.linspace(1e-9, 1 - 1e-9, 20001)
        assert np.all(np.diff(special.std_normal_quantile_vec(p)) > 0)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            std_normal_quantile(bad)

    def test_vec_nan_outside_domain(self):
        out = special.std_normal_quantile_vec(np.array([0.0, 0.5, 1.0]))
        assert np.isnan(out[0]) and out[1] == 0.0 and np.isnan(out[2])


class TestChisq1Tail:
    def test_whole_support(self):
        assert chisq1_upper_tail(0.0) == 1.0

    def test_critical_value(self):
        assert chisq1_upper_tail(3.841459) == pytest.approx(TAIL_3_841459, abs=1e-13)
        assert chisq1_upper_tail(Z_975 ** 2) == pytest.approx(0.05, abs=1e-14)

    def test_worked_example_box_tail(self):
        assert chisq1_upper_tail(6.8292) == pytest.approx(TAIL_6_8292, abs=1e-13)
        assert f"{chisq1_upper_tail(6.8292):.3g}" == "0.00897"

    def test_identity_with_cdf(self):
        for x in np.linspace(0, 64, 1281):
            assert abs(chisq1_upper_tail(x) - 2 * (1 - std_normal_cdf(math.sqrt(x)))) <= 1e-13

    def test_monotone(self):
        x = np.linspace(0, 100, 10001)
        assert np.all(np.diff(special.chisq1_upper_tail_vec(x)) <= 0)

    def test_negative(self):
        with pytest.raises(DomainError):
            chisq1_upper_tail(-1e-9)
        assert np.isnan(special.chisq1_upper_tail_vec(np.array([-1.0]))[0])
