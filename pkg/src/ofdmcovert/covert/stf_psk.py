"""Covert PSK on the short training field.

The whole 160-sample STF is rotated by one of M phases. A legacy receiver
only uses the STF for AGC, timing and coarse CFO, all of which are immune to
a constant rotation, so the frame decodes normally. The receiver recovers
the rotation by comparing STF spectra against the channel estimate.
"""

from __future__ import annotations

import numpy as np

from ..phy import ofdm
from ..phy.mapping import gray_decode, gray_encode
from ..phy.params import STF_SEQUENCE, STF_SUBCARRIERS
from .spec import CovertResult, StfPsk

# 64-sample measurement windows inside the periodic STF, relative to frame
# start. Offsets are multiples of 16 so the per-bin phase ramp vanishes on
# the multiple-of-4 STF subcarriers; 16 and 96 keep the windows disjoint and
# clear of channel memory from before the frame.
_WINDOW_OFFSETS = (16, 96)


def _bits_to_index(bits: np.ndarray, m_order: int) -> int:
    bits = np.asarray(bits, dtype=np.int64)
    width = int(m_order).bit_length() - 1
    if len(bits) != width:
        raise ValueError(f"expected {width} payload bits for order {m_order}, got {len(bits)}")
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return gray_decode(value)


def _index_to_bits(index: int, m_order: int) -> np.ndarray:
    width = int(m_order).bit_length() - 1
    value = int(gray_encode(index))
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def embed(iq: np.ndarray, bits: np.ndarray, spec: StfPsk) -> np.ndarray:
    """Rotate the short training field; returns a new buffer."""
    index = _bits_to_index(bits, spec.m_order)
    phase = 2.0 * np.pi * index / spec.m_order
    out = np.array(iq, dtype=np.complex128, copy=True)
    out[:160] *= np.exp(1j * phase)
    return out


def _pilot_phase_ramp(pilot_phase_rad: np.ndarray) -> tuple[float, float] | None:
    """Fit the per-symbol pilot common phase as an affine ramp over time.

    The channel estimate comes from the long training field, so any residual
    CFO shows up as a phase ramp between it and everything else, including the
    STF measurement windows. The pilot trace (SIGNAL symbol plus data symbols)
    tracks exactly that ramp; fitting it and extrapolating back to the STF
    removes the dominant noise term from the rotation estimate. Returns
    (intercept, slope-per-sample) with time measured from frame start, or
    None when there are too few points to fit.
    """
    phases = np.unwrap(np.asarray(pilot_phase_rad, dtype=np.float64))
    if len(phases) < 2:
        return None
    # FFT-window centers: SIGNAL at 320 + 48, data symbol n at 400 + 80n + 48.
    times = np.concatenate(([368.0], 448.0 + 80.0 * np.arange(len(phases) - 1)))
    slope, intercept = np.polyfit(times, phases, 1)
    return float(intercept), float(slope)


def measure(
    iq: np.ndarray,
    frame_start: int,
    channel_estimate: np.ndarray,
    pilot_phase_rad: np.ndarray | None = None,
) -> tuple[float, float]:
    """Estimate the STF rotation in [0, 2pi) and a coherence score in [0, 1].

    Each window's spectrum is matched against the channel estimate times the
    reference sequence; the rotation is the angle of the ratio, combined
    across windows and subcarriers with maximum-ratio weights. When the
    per-symbol pilot phase trace is supplied, its fitted ramp is subtracted
    so residual CFO does not masquerade as rotation.
    """
    reference = ofdm.take(np.asarray(channel_estimate), STF_SUBCARRIERS) * ofdm.take(
        ofdm.place(STF_SEQUENCE, np.arange(-26, 27)), STF_SUBCARRIERS
    )
    ramp = None if pilot_phase_rad is None else _pilot_phase_ramp(pilot_phase_rad)
    z = 0.0 + 0.0j
    rx_energy = 0.0
    for offset in _WINDOW_OFFSETS:
        window = np.asarray(iq[frame_start + offset : frame_start + offset + 64])
        spectrum = ofdm.take(ofdm.to_freq(window), STF_SUBCARRIERS)
        partial = np.sum(spectrum * np.conj(reference))
        if ramp is not None:
            intercept, slope = ramp
            partial *= np.exp(-1j * (intercept + slope * (offset + 32.0)))
        z += partial
        rx_energy += np.sum(np.abs(spectrum) ** 2)
    ref_energy = len(_WINDOW_OFFSETS) * np.sum(np.abs(reference) ** 2)
    if rx_energy <= 0.0 or ref_energy <= 0.0:
        raise ValueError("short training field carries no energy; cannot measure rotation")
    coherence = float(np.abs(z) / np.sqrt(rx_energy * ref_energy))
    return float(np.angle(z)) % (2.0 * np.pi), coherence


def extract(
    iq: np.ndarray,
    frame_start: int,
    channel_estimate: np.ndarray,
    spec: StfPsk,
    pilot_phase_rad: np.ndarray | None = None,
) -> CovertResult:
    phase, coherence = measure(iq, frame_start, channel_estimate, pilot_phase_rad)
    step = 2.0 * np.pi / spec.m_order
    index = int(np.round(phase / step)) % spec.m_order
    # Distance from the decision cell edge, in radians; worst case 0.
    residual = abs((phase - index * step + np.pi) % (2.0 * np.pi) - np.pi)
    margin = step / 2.0 - residual
    bits = _index_to_bits(index, spec.m_order)
    confidence = np.full(len(bits), margin * coherence)
    return CovertResult(bits=bits, confidence=confidence)
