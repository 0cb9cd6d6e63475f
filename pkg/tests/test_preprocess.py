import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from statsmodels.tsa.stattools import adfuller

from tsdhsic.errors import SeriesTooShort, SingularRegression, SpecError
from tsdhsic.preprocess import ADF_CRITICAL_5PCT, adf_test, block_average, difference, zscore


@pytest.mark.parametrize("lag", [0, 1, 3])
def test_adf_matches_statsmodels(rng, lag):
    for _ in range(5):
        x = np.cumsum(rng.normal(size=300)) * rng.choice([0.2, 1.0]) + rng.normal(size=300)
        ours = adf_test(x, lag_order=lag)
        ref = adfuller(x, maxlag=lag, regression="c", autolag=None)
        assert ours.test_statistic == pytest.approx(ref[0], rel=1e-9, abs=1e-9)
        assert ours.nobs == ref[3]


def test_adf_critical_value_close_to_statsmodels(rng):
    ref = adfuller(rng.normal(size=100000), maxlag=0, regression="c", autolag=None)
    assert ADF_CRITICAL_5PCT == pytest.approx(ref[4]["5%"], abs=1e-3)


def test_adf_monte_carlo():
    walks = [adf_test(np.cumsum(np.random.default_rng(s).normal(size=500))).stationary for s in range(200)]
    assert np.mean(walks) <= 0.10
    ar = []
    for s in range(200):
        e = np.random.default_rng(10_000 + s).normal(size=500)
        x = np.empty(500)
        x[0] = e[0]
        for t in range(1, 500):
            x[t] = 0.2 * x[t - 1] + e[t]
        ar.append(adf_test(x).stationary)
    assert np.mean(ar) >= 0.90


def test_adf_trend_is_not_stationary(rng):
    x = np.arange(500.0) + 1e-3 * rng.normal(size=500)
    assert not adf_test(x).stationary


def test_adf_errors():
    with pytest.raises(SeriesTooShort):
        adf_test(np.arange(5.0))
    with pytest.raises(SingularRegression):
        adf_test(np.ones(50))
    with pytest.raises(SpecError):
        adf_test(np.zeros((3, 3)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.1, 50), st.floats(-100, 100))
def test_adf_affine_invariance(seed, scale, shift):
    x = np.cumsum(np.random.default_rng(seed).normal(size=120))
    a, b = adf_test(x).test_statistic, adf_test(scale * x + shift).test_statistic
    assert a == pytest.approx(b, rel=1e-6, abs=1e-8)


def test_difference():
    np.testing.assert_array_equal(difference([1.0, 4.0, 9.0, 16.0]), [3.0, 5.0, 7.0])
    np.testing.assert_array_equal(difference(np.arange(10.0), 3), np.full(7, 3.0))
    with pytest.raises(SeriesTooShort):
        difference([1.0, 2.0], 2)
    with pytest.raises(SpecError):
        difference([1.0, 2.0], 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=8, max_size=60), st.integers(1, 3), st.integers(1, 3))
def test_difference_commutes(values, p, q):
    x = np.array(values)
    np.testing.assert_allclose(difference(difference(x, p), q), difference(difference(x, q), p), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=60), st.integers(1, 7))
def test_block_average_matches_loop(values, block):
    if len(values) < block:
        with pytest.raises(SeriesTooShort):
            block_average(values, block)
        return
    expected = [sum(values[i:i + block]) / block for i in range(0, len(values) - block + 1, block)]
    np.testing.assert_allclose(block_average(values, block), expected, rtol=1e-12, atol=1e-9)


def test_zscore(rng):
    z = zscore(rng.normal(3.0, 2.0, size=500))
    assert z.mean() == pytest.approx(0.0, abs=1e-12)
    assert z.std() == pytest.approx(1.0)
    np.testing.assert_array_equal(zscore([2.0, 2.0, 2.0]), [0.0, 0.0, 0.0])
