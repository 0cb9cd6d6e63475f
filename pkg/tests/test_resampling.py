import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import single_panel
from tsdhsic.errors import DegenerateLength, EmptyNull, ModeMismatch, SpecError
from tsdhsic.estimator import dhsic_multi_realisation, dhsic_single_realisation, panel_grams
from tsdhsic.kernel import KernelConfig, gaussian_gram
from tsdhsic.panel import TimeSeriesPanel
from tsdhsic.resampling import (
    NullDistribution,
    TestConfig,
    empirical_threshold,
    joint_independence_test,
    permutation_indices,
    permutation_null,
    permutation_p_value,
    shift_null,
    shift_offsets,
)
from tsdhsic.synthgen import GeneratorSpec, generate

KC = KernelConfig()


def sort_and_index(values, alpha):
    ordered = sorted(values)
    return ordered[math.ceil(round((1 - alpha) * len(ordered), 9)) - 1]


def test_threshold_examples():
    null = NullDistribution(np.arange(1.0, 101.0), "shift", 0)
    assert empirical_threshold(null, 0.05) == 95.0
    assert empirical_threshold(null, 0.5) == 50.0


def test_threshold_matches_sort_oracle():
    panel = generate(GeneratorSpec("case1", T=200, dep_coef=0.5, seed=4))
    null = shift_null(panel, KC, TestConfig(num_null=1000, seed=1))
    for alpha in (0.01, 0.05, 0.1, 0.33):
        assert empirical_threshold(null, alpha) == sort_and_index(null.samples.tolist(), alpha)


def test_threshold_errors():
    with pytest.raises(EmptyNull):
        empirical_threshold(NullDistribution(np.array([]), "shift", 0), 0.05)


def test_config_validation():
    for bad in ({"alpha": 0.0}, {"alpha": 1.0}, {"num_null": 0}, {"method": "wild"}, {"seed": -1}):
        with pytest.raises(SpecError):
            TestConfig(**bad)


def test_shift_offsets_range_and_fixed_first():
    offs = shift_offsets(10, 3, TestConfig(num_null=500, seed=3))
    assert np.all(offs[:, 0] == 0)
    assert offs[:, 1:].min() >= 1 and offs[:, 1:].max() <= 9
    assert set(np.unique(offs[:, 1:])) == set(range(1, 10))
    all_moved = shift_offsets(10, 3, TestConfig(num_null=50, seed=3, fix_first=False))
    assert np.all(all_moved >= 1)


def test_null_prefix_property():
    small = shift_offsets(50, 3, TestConfig(num_null=20, seed=9))
    large = shift_offsets(50, 3, TestConfig(num_null=200, seed=9))
    np.testing.assert_array_equal(small, large[:20])
    p_small = permutation_indices(8, 3, TestConfig(num_null=20, seed=9))
    p_large = permutation_indices(8, 3, TestConfig(num_null=200, seed=9))
    np.testing.assert_array_equal(p_small, p_large[:20])


def test_shift_null_constant_is_zero():
    panel = single_panel(np.ones(30), np.full(30, 2.0))
    null = shift_null(panel, KC, TestConfig(num_null=50))
    np.testing.assert_allclose(null.samples, 0.0, atol=1e-15)


def test_shift_null_deterministic(rng):
    panel = single_panel(rng.normal(size=80), rng.normal(size=80), rng.normal(size=80))
    cfg = TestConfig(num_null=100, seed=11)
    a = shift_null(panel, KC, cfg).samples
    b = shift_null(panel, KC, cfg).samples
    assert a.tobytes() == b.tobytes()


def test_shift_null_errors(rng):
    with pytest.raises(DegenerateLength):
        shift_null(single_panel(rng.normal(size=3), rng.normal(size=3)), KC, TestConfig(num_null=5))
    with pytest.raises(ModeMismatch):
        shift_null(TimeSeriesPanel(("a", "b"), (rng.normal(size=(3, 5)),) * 2), KC, TestConfig(num_null=5))
    with pytest.raises(ModeMismatch):
        permutation_null(single_panel(rng.normal(size=9), rng.normal(size=9)), KC, TestConfig(num_null=5))


def test_shifted_grams_are_reindexed_originals(rng):
    T = 40
    x, y, z = rng.normal(size=(3, T))
    grams = panel_grams(single_panel(x, y, z), KC, single=True)
    sigma = grams.bandwidths[1]
    for c in (1, 7, 39):
        idx = (np.arange(T) + c) % T
        rolled = np.roll(y, -c)
        np.testing.assert_allclose(gaussian_gram(rolled, sigma), grams.grams[1][np.ix_(idx, idx)], atol=1e-15)


def test_shift_statistics_match_recomputed_panels(rng):
    T = 60
    x, y, z = rng.normal(size=(3, T))
    grams = panel_grams(single_panel(x, y, z), KC, single=True)
    offsets = np.array([[0, 5, 17], [0, 59, 1], [3, 30, 44]])
    fast = grams.shift_statistics(offsets)
    for row, value in zip(offsets, fast):
        rolled = single_panel(*(np.roll(s, -c) for s, c in zip((x, y, z), row)))
        assert value == pytest.approx(dhsic_single_realisation(rolled).value, abs=1e-12)


def test_permutation_statistics_match_recomputed_panels(rng):
    n = 15
    data = [rng.normal(size=(n, 4)) for _ in range(3)]
    panel = TimeSeriesPanel(("a", "b", "c"), tuple(data))
    grams = panel_grams(panel, KC, single=False)
    index = permutation_indices(n, 3, TestConfig(num_null=4, seed=2))
    for idx, value in zip(index, grams.statistics(index)):
        permuted = TimeSeriesPanel(("a", "b", "c"), tuple(x[i] for x, i in zip(data, idx)))
        assert value == pytest.approx(dhsic_multi_realisation(permuted).value, abs=1e-12)


def test_permutation_small_n():
    panel = TimeSeriesPanel(("a", "b"), (np.array([[0.0], [1.0]]), np.array([[0.0], [2.0]])))
    null = permutation_null(panel, KC, TestConfig(num_null=40, seed=1))
    assert len(null) == 40
    # two orders only: identity (observed value) or swapped
    assert len(np.unique(np.round(null.samples, 12))) <= 2


def test_copy_is_rejected_single():
    x = np.random.default_rng(5).normal(size=100)
    result = joint_independence_test(single_panel(x, x.copy()), KC, TestConfig(num_null=500, seed=1))
    assert result.method == "shift"
    assert result.reject and result.statistic > result.threshold


def test_copy_is_rejected_multi(rng):
    x = rng.normal(size=(30, 10))
    result = joint_independence_test(TimeSeriesPanel(("x", "y"), (x, x.copy())), KC, TestConfig(num_null=500))
    assert result.method == "permute" and result.reject


def test_constant_panel_not_rejected():
    result = joint_independence_test(single_panel(np.ones(40), np.zeros(40)), KC, TestConfig(num_null=100))
    assert result.statistic == pytest.approx(0.0, abs=1e-15)
    assert not result.reject
    assert result.p_value == 1.0


def test_method_mismatch(rng):
    multi = TimeSeriesPanel(("a", "b"), (rng.normal(size=(5, 4)),) * 2)
    with pytest.raises(ModeMismatch):
        joint_independence_test(multi, KC, TestConfig(method="shift"))


def test_calibration_shift():
    rejections = 0
    for k in range(200):
        panel = generate(GeneratorSpec("case3", T=100, ar_coef=0.5, seed=k))
        rejections += joint_independence_test(panel, KC, TestConfig(num_null=100, seed=10_000 + k)).reject
    assert abs(rejections / 200 - 0.05) <= 1.96 * math.sqrt(0.05 * 0.95 / 200)


def test_calibration_permute():
    rejections = 0
    for k in range(200):
        r = np.random.default_rng([7, k])
        panel = TimeSeriesPanel(("a", "b", "c"), tuple(r.normal(size=(3, 40, 20))))
        rejections += joint_independence_test(panel, KC, TestConfig(num_null=100, seed=k)).reject
    assert abs(rejections / 200 - 0.05) <= 1.96 * math.sqrt(0.05 * 0.95 / 200)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=300),
       st.floats(0.001, 0.999), st.floats(0.001, 0.999))
def test_threshold_monotone_in_alpha(values, a1, a2):
    lo, hi = sorted((a1, a2))
    null = NullDistribution(np.array(values), "permute", 0)
    assert empirical_threshold(null, lo) >= empirical_threshold(null, hi)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=300), st.floats(0, 12))
def test_p_value_bounds(values, stat):
    null = NullDistribution(np.array(values), "permute", 0)
    p = permutation_p_value(null, stat)
    assert 1 / (len(values) + 1) <= p <= 1
    assert p == (1 + sum(v >= stat for v in values)) / (len(values) + 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.sampled_from([0.05, 0.1, 0.2, 0.5]), st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_p_value_threshold_consistency(mult, alpha, seed, stat):
    num = round(mult / alpha)
    null = NullDistribution(np.random.default_rng(seed).random(num), "shift", 0)
    if permutation_p_value(null, stat) <= alpha:
        assert stat >= empirical_threshold(null, alpha)
