import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from dgplab import specfun as sf
from dgplab.specfun import CONSTANTS, DomainError, SeriesTruncation


def test_constants():
    assert CONSTANTS.zeta2 == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert CONSTANTS.zeta4 == pytest.approx(math.pi**4 / 90, rel=1e-15)
    assert 0.5772156 < CONSTANTS.euler_gamma < 0.5772157
    assert CONSTANTS.zeta3 == pytest.approx(1.2020569031595942, rel=1e-15)
    assert CONSTANTS.sqrt_pi == pytest.approx(math.sqrt(math.pi), rel=1e-15)


def test_truncation_validated():
    assert SeriesTruncation().k_max == 10
    with pytest.raises(DomainError):
        SeriesTruncation(0)


@pytest.mark.parametrize("order", range(5))
def test_gamma_half_derivative_vs_quadrature(order):
    assert abs(sf.gamma_half_derivative(order) - oracles.gamma_log_moment(order)) < 1e-8


def test_gamma_half_derivative_first_order():
    g = CONSTANTS.euler_gamma
    assert sf.gamma_half_derivative(0) == pytest.approx(1.7724539, abs=1e-7)
    assert sf.gamma_half_derivative(1) == pytest.approx(-math.sqrt(math.pi) * (g + 2 * math.log(2)))


@pytest.mark.parametrize("order", [-1, 5, 2.5])
def test_gamma_half_derivative_domain(order):
    with pytest.raises(DomainError):
        sf.gamma_half_derivative(order)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("sigma", [0.8, 1.0, 2.0, 3.0, 10.0])
def test_t_function_vs_finite_difference(n, sigma):
    x = 1 / (math.sqrt(2) * sigma)
    assert sf.t_function(n, sigma) == pytest.approx(oracles.t_oracle(n, x), rel=1e-3)


# frozen from the mpmath oracle
@pytest.mark.parametrize("n, expected", [(3, 0.37244439153799574), (4, 0.1796049553477099),
                                         (5, 0.07116330981612247)])
def test_t_function_frozen_sigma1(n, expected):
    assert sf.t_function(n, 1.0) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_t_function_domain(n):
    with pytest.raises(DomainError):
        sf.t_function(n, 0.7)
    with pytest.raises(DomainError):
        sf.t_residue(n, -1.0)
    with pytest.raises(DomainError):
        sf.t_function(6, 1.0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_series_remainder_shrinks(n):
    diffs = [abs(sf.t_function(n, 1.5, SeriesTruncation(k)) - sf.t_function(n, 1.5, SeriesTruncation(k + 1)))
             for k in range(1, 10)]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_truncation_error_bounded_by_first_omitted_term():
    x = 1 / math.sqrt(2)
    full = sf.t_function(3, 1.0, SeriesTruncation(30))
    short = sf.t_function(3, 1.0, SeriesTruncation(1))
    omitted = x**1.5 / (2 * 2.5**2)
    assert abs(full - short) <= omitted


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("sigma", [0.8, 1.0, 3.0])
def test_incomplete_gamma_derivative_vs_oracle(order, sigma):
    x = 1 / (math.sqrt(2) * sigma)
    ref = oracles.incgamma_s_derivative(order, x)
    assert sf.incomplete_gamma_s_derivative(order, sigma) == pytest.approx(ref, rel=1e-4)


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("sigma", [0.8, 1.0, 3.0])
def test_incomplete_gamma_additivity(order, sigma):
    lower = sf.lower_incomplete_gamma_s_derivative(order, sigma)
    upper = sf.incomplete_gamma_s_derivative(order, sigma)
    assert abs(lower + upper - sf.gamma_half_derivative(order)) < 1e-8


def test_incomplete_gamma_first_order_structure():
    x = 1 / math.sqrt(2)
    expected = math.log(x) * sf.upper_gamma_half(x) + x * sf.t_function(3, 1.0)
    assert sf.incomplete_gamma_s_derivative(1, 1.0) == pytest.approx(expected, rel=1e-14)


def test_erf_values():
    assert sf.erf(0.0) == 0.0
    assert abs(sf.erf(1.0) - oracles.erf_quad(1.0)) < 1e-12
    xs = np.linspace(-6, 6, 13)
    assert np.allclose(sf.erf(xs), -sf.erf(-xs), atol=0, rtol=0)


@given(st.floats(-6, 6))
def test_erf_odd(x):
    assert sf.erf(x) == -sf.erf(-x)


def test_shifted_series_leading_coefficient():
    a = sf.shifted_t_series_coefficients(3)
    assert a[0] == pytest.approx(4 / 9 * 2**-0.25, rel=1e-14)
    assert round(a[0], 3) == 0.374
    assert round(a[1], 3) == -0.095


def test_shifted_residue_n3_matches_display_form():
    b = sf.PSI_HALF_NEG + math.log(math.sqrt(2))
    expected = math.sqrt(math.pi / 2) * (b**2 + math.pi**2 / 2)
    assert sf.shifted_t_residue(3, 1.0) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.75, 50.0))
def test_t_function_positive(sigma):
    for n in (3, 4, 5):
        assert sf.t_function(n, sigma) > 0
