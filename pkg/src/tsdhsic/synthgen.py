"""Seeded generators for the synthetic benchmark panels.

Each realisation draws from its own stream derived from ``(seed, r)``, so
realisations are independent by construction and any single one can be
regenerated alone.

Stationary AR toys (``case1``-``case3``) discard a burn-in of
``BURN_IN`` steps started from zero. Nonstationary families start from an
independent N(0, 1) state at ``t = 0``, which is part of the observed
window: with ``T = 1`` only that independent state is seen.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy.signal import hilbert, lfilter

from .errors import BandOutOfRange, SpecError
from .panel import TimeSeriesPanel

BURN_IN = 100
KINDS = ("case1", "case2", "case3", "ns_linear", "ns_nonlinear", "ns_complex", "ns_pure3way", "freqmix", "xor")

_DEFAULT_AR = {"case1": 0.5, "case2": 0.5, "case3": 0.5, "ns_pure3way": 0.8}

FREQMIX_DEFAULTS = {
    "f1": 7.0,
    "f2": 18.0,
    "fs": 100.0,
    "amp1": 1.0,
    "amp2": 1.0,
    "noise": 0.05,
    # mixing polynomial linear * s + quadratic * s^2 of s = r1 + r2
    "linear": 1.0,
    "quadratic": 1.0,
    # per-sample std (rad) of a random walk in each root's phase
    "phase_noise": 0.1,
    "half_bandwidth": 1.5,
    "pad": 100,
}
XOR_DEFAULTS = {"flip": 0.05, "input_flip": None}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    T: int = 300
    N: int = 1
    dep_coef: float = 0.0
    ar_coef: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if int(self.T) < 1 or int(self.N) < 1:
            raise SpecError(f"T and N must be >= 1, got T={self.T}, N={self.N}")
        object.__setattr__(self, "T", int(self.T))
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "dep_coef", float(self.dep_coef))
        if self.kind in ("case1", "case2") and self.T < 2:
            raise SpecError(f"{self.kind} needs T >= 2")
        if self.kind in ("case1", "case2", "case3", "ns_pure3way") and not -1 < self.ar < 1:
            raise SpecError(f"ar_coef must lie in (-1, 1), got {self.ar}")
        known = {"freqmix": FREQMIX_DEFAULTS, "xor": XOR_DEFAULTS}.get(self.kind, {})
        unknown = set(self.extra) - set(known)
        if unknown:
            raise SpecError(f"unknown parameters for {self.kind}: {sorted(unknown)}")
        if self.kind == "freqmix":
            p = self.params
            if not (0 < p["f1"] < p["fs"] / 2 and 0 < p["f2"] < p["fs"] / 2):
                raise SpecError("freqmix frequencies must lie in (0, fs/2)")
            if p["fs"] <= 2 * (p["f1"] + p["f2"]):
                raise SpecError(f"fs={p['fs']} aliases the sum frequency {p['f1'] + p['f2']}")
        if self.kind == "xor":
            p = self.params
            for key in ("flip", "input_flip"):
                if not 0 <= p[key] <= 0.5:
                    raise SpecError(f"xor {key} must lie in [0, 0.5], got {p[key]}")

    @property
    def ar(self) -> float:
        if self.ar_coef is not None:
            return float(self.ar_coef)
        return _DEFAULT_AR.get(self.kind, 0.5)

    @property
    def params(self) -> dict[str, Any]:
        """``extra`` merged over the kind's defaults."""
        if self.kind == "freqmix":
            merged = {**FREQMIX_DEFAULTS, **self.extra}
        elif self.kind == "xor":
            merged = {**XOR_DEFAULTS, **self.extra}
            if merged["input_flip"] is None:
                merged["input_flip"] = merged["flip"]
        else:
            merged = dict(self.extra)
        return merged

    def with_seed(self, seed: int) -> GeneratorSpec:
        return replace(self, seed=int(seed))


def realisation_rng(seed: int, r: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(r,))))


def _ar1(a: float, drive: np.ndarray) -> np.ndarray:
    """``y_t = a y_{t-1} + drive_t`` from ``y = 0`` before the first step."""
    return lfilter([1.0], [1.0, -a], drive)


def _stationary(spec: GeneratorSpec, coupling: str | None) -> TimeSeriesPanel:
    a = spec.ar
    steps = BURN_IN + spec.T
    out = np.empty((3, spec.N, spec.T))
    for r in range(spec.N):
        rng = realisation_rng(spec.seed, r)
        eps, eta, zeta = rng.standard_normal((3, steps))
        x = _ar1(a, eps)
        y = _ar1(a, eta)
        drive = zeta
        if coupling == "sign":
            theta = rng.standard_normal(steps)
            drive = zeta + spec.dep_coef * np.abs(theta) * np.sign(x * y)
        elif coupling == "sum" and spec.dep_coef != 0.0:
            drive = zeta + spec.dep_coef * (x + y)
        z = _ar1(a, drive)
        out[:, r] = np.stack([x, y, z])[:, BURN_IN:]
    return TimeSeriesPanel(("X", "Y", "Z"), tuple(out))


def gen_case1(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Three-way dependence without pairwise dependence.

    ``Z_t = Z_{t-1}/2 + d |theta_t| sign(X_t Y_t) + zeta_t`` with X, Y
    independent AR(1/2).
    """
    return _stationary(spec, "sign")


def gen_case2(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Pairwise plus three-way dependence: ``Z_t = Z_{t-1}/2 + d (X_t + Y_t) + zeta_t``."""
    return _stationary(spec, "sum")


def gen_case3(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Three independent AR(a) series."""
    return _stationary(spec, None)


def _logistic_ramp(t: np.ndarray) -> np.ndarray:
    return 5.0 / (1.0 + np.exp(-(t - 10.0) / 2.0))


def gen_nonstationary(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Multi-realisation trend families.

    All kinds share the recursion

        X_t = a X_{t-1} + f_X(t) + eps_t
        Y_t = a Y_{t-1} + f_Y(t) + eta_t
        Z_t = a Z_{t-1} + f_Z(t) + c(t) (X_t + Y_t) + zeta_t

    from an independent N(0, 1) state at ``t = 0``, with ``a = 1`` except
    for ``ns_pure3way``. Trends and couplings per kind:

    * ``ns_linear``: ``f = t``, ``c = d``.
    * ``ns_nonlinear``: ``f = t sin(t/3)``, ``c = d``.
    * ``ns_complex``: logistic ramp ``5 / (1 + exp(-(t - 10)/2))``, ``c = d (1 + sin(t)/2)``.
    * ``ns_pure3way``: ``f_X = t sin t``, ``f_Y = t cos t``, ``f_Z = 0``, ``c = d t``, ``a = ar_coef`` (0.8).
    """
    kind, T, d = spec.kind, spec.T, spec.dep_coef
    t = np.arange(T, dtype=float)
    a = 1.0
    if kind == "ns_linear":
        tx = ty = tz = t
        coupling = d * np.ones(T)
    elif kind == "ns_nonlinear":
        tx = ty = tz = t * np.sin(t / 3.0)
        coupling = d * np.ones(T)
    elif kind == "ns_complex":
        tx = ty = tz = _logistic_ramp(t)
        coupling = d * (1.0 + 0.5 * np.sin(t))
    elif kind == "ns_pure3way":
        a = spec.ar
        tx, ty, tz = t * np.sin(t), t * np.cos(t), np.zeros(T)
        coupling = d * t
    else:
        raise SpecError(f"{kind!r} is not a nonstationary kind")
    out = np.empty((3, spec.N, T))
    for r in range(spec.N):
        rng = realisation_rng(spec.seed, r)
        start = rng.standard_normal(3)
        eps, eta, zeta = rng.standard_normal((3, T))
        x, y, z = np.empty(T), np.empty(T), np.empty(T)
        x[0], y[0], z[0] = start
        for k in range(1, T):
            x[k] = a * x[k - 1] + tx[k] + eps[k]
            y[k] = a * y[k - 1] + ty[k] + eta[k]
            z[k] = a * z[k - 1] + tz[k] + coupling[k] * (x[k] + y[k]) + zeta[k]
        out[:, r] = x, y, z
    return TimeSeriesPanel(("X", "Y", "Z"), tuple(out))


@dataclass(frozen=True)
class FreqMixSignal:
    fs: float
    f1: float
    f2: float
    root1: np.ndarray
    root2: np.ndarray
    mixed: np.ndarray

    @property
    def emergent_frequencies(self) -> tuple[float, float]:
        return abs(self.f2 - self.f1), self.f1 + self.f2


def gen_freqmix(spec: GeneratorSpec, length: int | None = None, r: int = 0) -> FreqMixSignal:
    """Two noisy sinusoidal roots and their quadratic mix.

    The mix is ``linear * s + quadratic * s^2`` with ``s = r1 + r2``. The
    square alone only has lines at DC, 2 f1, 2 f2, |f2 - f1| and f1 + f2; the
    linear part keeps the roots f1 and f2 in the mixed signal. Each root has
    a uniform random initial phase and, when ``phase_noise > 0``, a Gaussian
    random walk added to its phase.
    """
    p = spec.params
    n = spec.T if length is None else int(length)
    rng = realisation_rng(spec.seed, r)
    t = np.arange(n) / p["fs"]
    roots = []
    for f, amp in ((p["f1"], p["amp1"]), (p["f2"], p["amp2"])):
        phase0 = rng.uniform(-np.pi, np.pi)
        walk = np.cumsum(rng.normal(0.0, p["phase_noise"], n)) if p["phase_noise"] > 0 else np.zeros(n)
        noise = rng.normal(0.0, p["noise"], n) if p["noise"] > 0 else np.zeros(n)
        roots.append(amp * np.cos(2 * np.pi * f * t + phase0 + walk) + noise)
    total = roots[0] + roots[1]
    mixed = p["linear"] * total + p["quadratic"] * total**2
    return FreqMixSignal(p["fs"], p["f1"], p["f2"], roots[0], roots[1], mixed)


def bandpass_mask(freqs: np.ndarray, center_freq: float, half_bandwidth: float) -> np.ndarray:
    """Flat inside ``half_bandwidth / 2`` of the centre, cosine taper to zero at ``half_bandwidth``."""
    dist = np.abs(freqs - center_freq)
    inner = half_bandwidth / 2.0
    mask = np.zeros_like(freqs)
    mask[dist <= inner] = 1.0
    ramp = (dist > inner) & (dist < half_bandwidth)
    mask[ramp] = np.cos(0.5 * np.pi * (dist[ramp] - inner) / (half_bandwidth - inner)) ** 2
    return mask


def extract_phase(signal, center_freq: float, half_bandwidth: float = 1.5, fs: float = 100.0) -> np.ndarray:
    """Instantaneous phase in ``(-pi, pi]`` of the band around ``center_freq``.

    Zero-phase FFT band-pass, then the analytic signal, then its argument.
    """
    if not (center_freq - half_bandwidth > 0 and center_freq + half_bandwidth < fs / 2):
        raise BandOutOfRange(
            f"band {center_freq} +/- {half_bandwidth} Hz must lie inside (0, {fs / 2}) Hz"
        )
    x = np.asarray(signal, dtype=float)
    spectrum = np.fft.rfft(x)
    spectrum *= bandpass_mask(np.fft.rfftfreq(x.size, 1.0 / fs), center_freq, half_bandwidth)
    narrow = np.fft.irfft(spectrum, x.size)
    phase = np.angle(hilbert(narrow))
    phase[phase <= -np.pi] = np.pi
    return phase


def freqmix_phase_panel(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Instantaneous phases of both roots and both emergents from the mix.

    Variables are named ``p<freq>`` in increasing frequency, e.g. ``p7,
    p11, p18, p25`` for the default roots. ``pad`` extra samples are
    generated on each side and cut after filtering to drop edge effects.
    """
    p = spec.params
    pad = int(p["pad"])
    f1, f2 = p["f1"], p["f2"]
    freqs = sorted({f1, f2, abs(f2 - f1), f1 + f2})
    rows = {f: [] for f in freqs}
    for r in range(spec.N):
        sig = gen_freqmix(spec, length=spec.T + 2 * pad, r=r)
        for f in freqs:
            rows[f].append(extract_phase(sig.mixed, f, p["half_bandwidth"], p["fs"])[pad:pad + spec.T])
    names = tuple(f"p{f:g}" for f in freqs)
    return TimeSeriesPanel(names, tuple(np.array(rows[f]) for f in freqs))


def gen_xor(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Boolean chains X, Y, W and the noisy parity Z, encoded as 0.0 / 1.0.

    X, Y, W start uniform and flip with probability ``input_flip`` per step;
    ``Z_t`` is ``X_t xor Y_t xor W_t`` flipped with probability ``flip``.
    """
    p = spec.params
    T = spec.T
    out = np.empty((4, spec.N, T))
    for r in range(spec.N):
        rng = realisation_rng(spec.seed, r)
        start = rng.integers(0, 2, size=3)
        flips = rng.random((3, T)) < p["input_flip"]
        flips[:, 0] = False
        inputs = (start[:, None] + np.cumsum(flips, axis=1)) % 2
        parity = inputs.sum(axis=0) % 2
        z = (parity + (rng.random(T) < p["flip"])) % 2
        out[:3, r] = inputs
        out[3, r] = z
    return TimeSeriesPanel(("X", "Y", "W", "Z"), tuple(out.astype(float)))


def generate(spec: GeneratorSpec) -> TimeSeriesPanel:
    """Panel for any kind; ``freqmix`` yields the four-phase panel."""
    if spec.kind == "case1":
        return gen_case1(spec)
    if spec.kind == "case2":
        return gen_case2(spec)
    if spec.kind == "case3":
        return gen_case3(spec)
    if spec.kind.startswith("ns_"):
        return gen_nonstationary(spec)
    if spec.kind == "freqmix":
        return freqmix_phase_panel(spec)
    return gen_xor(spec)
