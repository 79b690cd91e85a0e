import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from dgplab.montecarlo import (
    EmpiricalCdf,
    InsufficientSamplesError,
    abs_above,
    abs_at_most,
    at_most,
    dkw_epsilon,
    ks_one_sample,
    ks_two_sample,
    prob_estimate,
    quantile_grid,
)
from dgplab.products import ProductConfig, sample_products, surrogate_cdf, surrogate_product_law
from dgplab.rng import substream
from dgplab.signedlog import SignedLog


@settings(max_examples=50)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200), st.floats(-1e6, 1e6))
def test_ecdf_matches_counting(vals, t):
    f = EmpiricalCdf(np.array(vals))
    assert f(t) == pytest.approx(np.mean(np.array(vals) <= t))


def test_ecdf_extremes_and_monotone():
    x = substream(0).standard_normal(5000)
    f = EmpiricalCdf(x)
    assert f(-1e300) == 0.0
    assert f(1e300) == 1.0
    t = np.linspace(-4, 4, 200)
    assert np.all(np.diff(f(t)) >= 0)
    assert f(SignedLog.from_real(0.0)) == pytest.approx(np.mean(x <= 0))


def test_dkw_values():
    assert dkw_epsilon(10**6) == pytest.approx(math.sqrt(math.log(2000) / 2e6))
    assert dkw_epsilon(10**6) < 0.002


def test_two_sample_identical_and_symmetric():
    a = SignedLog.from_real(substream(1).standard_normal(20_000))
    b = SignedLog.from_real(substream(2).standard_normal(30_000))
    assert ks_two_sample(a, a).distance == 0.0
    assert ks_two_sample(a, b).distance == ks_two_sample(b, a).distance


def test_two_sample_iid_within_slack():
    n = 10**6
    a = substream(3).standard_normal(n)
    b = substream(4).standard_normal(n)
    rep = ks_two_sample(a, b)
    assert rep.passed and rep.distance <= rep.slack
    assert rep.grid_points <= 512


def test_two_sample_monotone_invariance():
    rng = substream(5)
    la, lb = rng.normal(0, 1, 5000), rng.normal(0.1, 1, 5000)
    pos_a, pos_b = SignedLog(np.ones(5000), la), SignedLog(np.ones(5000), lb)
    real_a, real_b = np.exp(la), np.exp(lb)
    assert ks_two_sample(pos_a, pos_b).distance == ks_two_sample(real_a, real_b).distance


def test_detects_difference():
    rep = ks_two_sample(substream(6).normal(0, 1, 10_000), substream(7).normal(1, 1, 10_000))
    assert not rep.passed
    assert rep.verdict == "fail"
    assert rep.to_dict()["verdict"] == "fail"


def test_insufficient_samples():
    with pytest.raises(InsufficientSamplesError):
        ks_two_sample(np.zeros(999), np.zeros(5000))
    with pytest.raises(InsufficientSamplesError):
        prob_estimate(np.zeros(10), abs_at_most(1.0))


def test_one_sample_against_surrogate():
    cfg = ProductConfig(1, 1.0, 2)
    law = surrogate_product_law(cfg)
    x = SignedLog.from_real(np.exp(substream(8).normal(law.mu, law.sd, 200_000)))
    rep = ks_one_sample(x, lambda t: surrogate_cdf(law, False, t))
    assert rep.passed


def test_prob_estimate():
    assert prob_estimate(np.ones(1000), abs_at_most(2.0)) == (1.0, 0.0)
    s = sample_products(ProductConfig(1, 3.0), 10**6, 1)
    p, se = prob_estimate(s, abs_at_most(0.5))
    assert abs(p - (2 * special.ndtr(1 / 6) - 1)) < 3 * se
    s30 = sample_products(ProductConfig(30, 1.0), 10**6, 2)
    assert prob_estimate(s30, abs_at_most(0.5))[0] >= 0.99
    assert prob_estimate(s30, abs_above(0.5))[0] <= 0.01


def test_prob_estimate_nested_consistency():
    est = [prob_estimate(sample_products(ProductConfig(5, 2.0), n, 3), abs_at_most(0.5))
           for n in (10**4, 10**5, 10**6)]
    for (p1, s1), (p2, s2) in zip(est, est[1:]):
        assert abs(p1 - p2) <= 3 * math.hypot(s1, s2)


def test_at_most_event():
    x = np.array([-2.0, -0.5, 0.0, 0.3, 4.0])
    s = SignedLog.from_real(x)
    for t in (-1.0, 0.0, 0.3, 5.0):
        assert np.array_equal(at_most(t)(s), x <= t)


def test_quantile_grid_sorted():
    g = quantile_grid([substream(9).standard_normal(3000)], 64)
    assert np.all(np.diff(g.to_real()) >= 0)
