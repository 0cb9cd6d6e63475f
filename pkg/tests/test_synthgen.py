import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tsdhsic.errors import BandOutOfRange, SpecError
from tsdhsic.synthgen import (
    KINDS,
    GeneratorSpec,
    extract_phase,
    freqmix_phase_panel,
    gen_freqmix,
    generate,
)


def wrap(phase):
    return np.angle(np.exp(1j * phase))


def circular_variance(phase):
    return 1.0 - abs(np.mean(np.exp(1j * phase)))


def test_ar_variance_and_autocorrelation():
    panel = generate(GeneratorSpec("case3", T=20000, ar_coef=0.5, seed=1))
    for name in panel.names:
        x = panel[name][0]
        assert x.var() == pytest.approx(4 / 3, rel=0.05)
        assert np.corrcoef(x[:-1], x[1:])[0, 1] == pytest.approx(0.5, abs=0.03)


def test_case2_zero_coupling_matches_case3():
    a = generate(GeneratorSpec("case2", T=200, dep_coef=0.0, seed=3))
    b = generate(GeneratorSpec("case3", T=200, seed=3))
    assert a.equals(b)


def test_case2_pairwise_correlation():
    panel = generate(GeneratorSpec("case2", T=5000, dep_coef=0.5, seed=2))
    assert np.corrcoef(panel["X"][0], panel["Z"][0])[0, 1] > 0.2


def test_case1_no_pairwise_correlation():
    panel = generate(GeneratorSpec("case1", T=20000, dep_coef=1.0, seed=2))
    for u, v in itertools.combinations(panel.names, 2):
        assert abs(np.corrcoef(panel[u][0], panel[v][0])[0, 1]) < 0.03
    x, y, z = (panel[n][0] for n in panel.names)
    assert np.corrcoef(np.sign(x * y), z)[0, 1] > 0.2


@pytest.mark.parametrize("kind", KINDS)
def test_determinism(kind):
    spec = GeneratorSpec(kind, T=120, N=3 if kind in ("xor",) or kind.startswith("ns_") else 1,
                         dep_coef=0.5, seed=17)
    assert generate(spec).equals(generate(spec))
    assert not generate(spec).equals(generate(spec.with_seed(18)))


def test_realisations_are_independent_streams():
    one = generate(GeneratorSpec("ns_linear", T=10, N=1, dep_coef=1.0, seed=5))
    many = generate(GeneratorSpec("ns_linear", T=10, N=4, dep_coef=1.0, seed=5))
    for name in one.names:
        np.testing.assert_array_equal(one[name][0], many[name][0])


def test_spec_validation():
    for bad in ({"kind": "nope"}, {"kind": "case1", "T": 0}, {"kind": "case1", "N": 0},
                {"kind": "case3", "ar_coef": 1.0}, {"kind": "xor", "extra": {"flip": 0.7}},
                {"kind": "freqmix", "extra": {"f9": 1.0}}):
        with pytest.raises(SpecError):
            GeneratorSpec(**bad)


def test_ns_linear_single_step_has_no_coupling():
    panel = generate(GeneratorSpec("ns_linear", T=1, N=4000, dep_coef=5.0, seed=1))
    x, z = panel["X"][:, 0], panel["Z"][:, 0]
    assert abs(np.corrcoef(x, z)[0, 1]) < 0.05


def test_ns_linear_coupling_later():
    panel = generate(GeneratorSpec("ns_linear", T=5, N=2000, dep_coef=1.0, seed=1))
    assert np.corrcoef(panel["X"][:, -1], panel["Z"][:, -1])[0, 1] > 0.3


def test_freqmix_spectral_lines():
    spec = GeneratorSpec("freqmix", T=2000, seed=0, extra={"phase_noise": 0.0, "noise": 0.0})
    sig = gen_freqmix(spec)
    power = np.abs(np.fft.rfft(sig.mixed)) ** 2
    freqs = np.fft.rfftfreq(sig.mixed.size, 1 / sig.fs)
    power[0] = 0.0
    top = freqs[np.argsort(power)[-6:]]
    assert set(np.round(top, 6)) == {7.0, 11.0, 14.0, 18.0, 25.0, 36.0}
    assert sig.emergent_frequencies == (11.0, 25.0)


def test_freqmix_pure_square():
    spec = GeneratorSpec("freqmix", T=300, seed=4, extra={"linear": 0.0, "amp2": 0.0, "noise": 0.0})
    sig = gen_freqmix(spec)
    np.testing.assert_allclose(sig.mixed, sig.root1 ** 2, atol=1e-14)


@pytest.mark.parametrize("freq", [5.0, 7.0, 18.0, 25.0])
def test_phase_of_pure_tone_advances_uniformly(freq):
    fs, n = 100.0, 2000
    t = np.arange(n) / fs
    phase = extract_phase(np.cos(2 * np.pi * freq * t + 0.3), freq, 1.5, fs)[100:-100]
    step = wrap(np.diff(phase) - 2 * np.pi * freq / fs)
    assert np.median(np.abs(step)) < 0.01
    assert np.all((phase > -np.pi) & (phase <= np.pi))


def test_phase_band_errors():
    with pytest.raises(BandOutOfRange):
        extract_phase(np.zeros(100), 1.0, 1.5, 100.0)
    with pytest.raises(BandOutOfRange):
        extract_phase(np.zeros(100), 49.0, 1.5, 100.0)


def test_phase_relations_of_emergents():
    panel = freqmix_phase_panel(GeneratorSpec("freqmix", T=1000, seed=2))
    p7, p11, p18, p25 = (panel[n][0] for n in ("p7", "p11", "p18", "p25"))
    assert circular_variance(wrap(p25 - p7 - p18)) < 0.1
    assert circular_variance(wrap(p11 + p7 - p18)) < 0.1
    assert circular_variance(wrap(p25 - p7)) > 0.5


def test_xor_noiseless_parity():
    panel = generate(GeneratorSpec("xor", T=20, N=50, seed=1, extra={"flip": 0.0}))
    x, y, w, z = (panel[n] for n in panel.names)
    np.testing.assert_array_equal((x + y + w + z) % 2, 0)


def test_xor_pairwise_balanced():
    """Z is uniform given any pair of inputs; compared against exact enumeration."""
    eps = 0.05
    exact = {}
    for bits in itertools.product((0, 1), repeat=3):
        parity = sum(bits) % 2
        exact[bits] = eps if parity == 0 else 1 - eps
    for i, j in itertools.combinations(range(3), 2):
        for u, v in itertools.product((0, 1), repeat=2):
            cond = [exact[b] for b in exact if b[i] == u and b[j] == v]
            assert np.mean(cond) == pytest.approx(0.5)
    panel = generate(GeneratorSpec("xor", T=20, N=5000, seed=3, extra={"flip": eps}))
    x, y, z = panel["X"].ravel(), panel["Y"].ravel(), panel["Z"].ravel()
    for u, v in itertools.product((0.0, 1.0), repeat=2):
        sel = (x == u) & (y == v)
        assert z[sel].mean() == pytest.approx(0.5, abs=0.02)


def test_xor_flip_rate():
    panel = generate(GeneratorSpec("xor", T=20, N=5000, seed=4, extra={"flip": 0.1}))
    parity = sum(panel[n] for n in ("X", "Y", "W")) % 2
    assert np.mean(parity != panel["Z"]) == pytest.approx(0.1, abs=0.01)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["case1", "case2", "case3"]), st.integers(2, 80), st.integers(0, 2**31 - 1),
       st.floats(0, 2))
def test_stationary_shapes_and_determinism(kind, T, seed, dep):
    spec = GeneratorSpec(kind, T=T, dep_coef=dep, seed=seed)
    panel = generate(spec)
    assert panel.names == ("X", "Y", "Z") and panel.lengths == (T,) * 3
    assert panel.equals(generate(spec))
