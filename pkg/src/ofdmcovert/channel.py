"""Impairment models: AWGN, multipath Rayleigh fading, static CFO.

All functions are pure (input buffer untouched) and deterministic for a given
seed. Fading taps live on the 50 ns sample grid of the 20 MHz baseband.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .phy.params import SAMPLE_RATE_HZ

# Exponential power-delay profiles, identified by their RMS delay spread.
RMS_DELAY_NS = {"B": 15.0, "D": 50.0, "E": 100.0}
FADING_MODELS = tuple(sorted(RMS_DELAY_NS))
N_SINUSOIDS = 16
SAMPLE_NS = 1e9 / SAMPLE_RATE_HZ


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def tap_powers(model: str) -> np.ndarray:
    """Normalized exponential PDP for the model, one tap per sample."""
    try:
        rms_ns = RMS_DELAY_NS[model]
    except KeyError:
        raise ValueError(f"unknown fading model {model!r}; pick one of {FADING_MODELS}") from None
    n_taps = math.ceil(4.0 * rms_ns / SAMPLE_NS) + 1
    p = np.exp(-np.arange(n_taps) * SAMPLE_NS / rms_ns)
    return p / p.sum()


def apply_fading(iq: np.ndarray, model: str, seed, max_doppler_hz: float = 15.0) -> np.ndarray:
    """Tapped-delay-line Rayleigh channel with sum-of-sinusoids Doppler.

    Each tap is a sum of N_SINUSOIDS complex oscillators with random arrival
    angles, giving a Rayleigh envelope with a Jakes-like spectrum; with
    max_doppler_hz = 0 every tap is constant over the buffer (block fading).
    Expected output power equals input power.
    """
    rng = _rng(seed)
    x = np.asarray(iq, dtype=np.complex128)
    powers = tap_powers(model)
    t = np.arange(len(x)) / SAMPLE_RATE_HZ
    y = np.zeros_like(x)
    for d, p in enumerate(powers):
        angles = rng.uniform(0.0, 2.0 * np.pi, N_SINUSOIDS)
        phases = rng.uniform(0.0, 2.0 * np.pi, N_SINUSOIDS)
        if max_doppler_hz > 0:
            arg = 2.0 * np.pi * max_doppler_hz * np.cos(angles)[:, None] * t[None, :]
            gain = np.exp(1j * (arg + phases[:, None])).sum(axis=0) / np.sqrt(N_SINUSOIDS)
        else:
            gain = np.full(len(x), np.exp(1j * phases).sum() / np.sqrt(N_SINUSOIDS))
        shifted = np.concatenate([np.zeros(d, dtype=np.complex128), x[: len(x) - d]]) if d else x
        y += np.sqrt(p) * gain * shifted
    return y


def apply_static_cfo(iq: np.ndarray, cfo_hz: float) -> np.ndarray:
    """Constant carrier frequency offset; offsets compose additively."""
    x = np.asarray(iq, dtype=np.complex128)
    n = np.arange(len(x))
    return x * np.exp(2j * np.pi * cfo_hz * n / SAMPLE_RATE_HZ)


def signal_extent(iq: np.ndarray) -> tuple[int, int]:
    """[first, last] sample index carrying signal (ignores zero padding)."""
    x = np.asarray(iq)
    mag = np.abs(x)
    live = np.flatnonzero(mag > mag.max() * 1e-8)
    if len(live) == 0:
        return 0, len(x) - 1
    return int(live[0]), int(live[-1])


def apply_awgn(iq: np.ndarray, snr_db: float | None, seed) -> np.ndarray:
    """Add complex white noise at the requested SNR.

    Signal power is measured over the signal extent so zero padding does not
    bias the level. snr_db None (or +inf) is the identity.
    """
    x = np.asarray(iq, dtype=np.complex128)
    if snr_db is None or math.isinf(snr_db):
        return x.copy()
    rng = _rng(seed)
    lo, hi = signal_extent(x)
    power = np.mean(np.abs(x[lo : hi + 1]) ** 2)
    sigma2 = power * 10.0 ** (-snr_db / 10.0)
    noise = rng.normal(scale=np.sqrt(sigma2 / 2.0), size=(len(x), 2))
    return x + noise[:, 0] + 1j * noise[:, 1]


@dataclass
class ChannelSpec:
    """One impairment stack: fading model (or A = none), noise, oscillator CFO."""

    model: str = "A"
    snr_db: float | None = 25.0
    cfo_hz: float = 0.0
    max_doppler_hz: float = 15.0

    def __post_init__(self) -> None:
        if self.model not in ("A",) + FADING_MODELS:
            raise ValueError(f"unknown channel model {self.model!r}")


def apply_channel(iq: np.ndarray, spec: ChannelSpec, seed) -> np.ndarray:
    """Fading -> CFO -> AWGN, with SNR measured after fading."""
    rng = _rng(seed)
    y = np.asarray(iq, dtype=np.complex128)
    if spec.model != "A":
        y = apply_fading(y, spec.model, rng, spec.max_doppler_hz)
    if spec.cfo_hz:
        y = apply_static_cfo(y, spec.cfo_hz)
    return apply_awgn(y, spec.snr_db, rng)
