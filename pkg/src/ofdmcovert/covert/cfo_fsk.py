"""Covert FSK on the carrier frequency offset.

Each data symbol gets a phase-continuous frequency shift of +delta or
-delta, one payload bit per symbol. The shift rides on top of whatever
oscillator offset the radio already has; a legacy receiver's pilot tracking
absorbs it as ordinary CFO jitter.

The decoder works on the per-symbol CFO trace measured by the receiver
(cyclic-prefix correlation). A centered moving average of the trace serves
as the slicing threshold, which cancels the static oscillator offset and any
slow drift without needing calibration; the payload is whitened so the
average sits between the two levels even for biased payloads. Symbols near
the frame edges see a one-sided average, so a few bits on each side are
discarded rather than decoded.
"""

from __future__ import annotations

import numpy as np

from ..phy.bits import DEFAULT_SCRAMBLER_SEED, lfsr_sequence
from ..phy.params import DATA_OFFSET, N_SYMBOL, SAMPLE_RATE_HZ
from .spec import CfoFsk, CovertResult


def whitening_sequence(n: int) -> np.ndarray:
    """Public whitening bits (fixed LFSR seed, known to both ends)."""
    return lfsr_sequence(n, seed=DEFAULT_SCRAMBLER_SEED)


def centered_moving_average(x: np.ndarray, taps: int) -> np.ndarray:
    """Moving average with edge windows renormalized by their sample count."""
    x = np.asarray(x, dtype=np.float64)
    # convolve(mode="same") returns max(len(x), taps) samples, so a window
    # wider than the input must shrink to keep the output aligned with x.
    kernel = np.ones(min(taps, len(x)))
    sums = np.convolve(x, kernel, mode="same")
    counts = np.convolve(np.ones(len(x)), kernel, mode="same")
    return sums / counts


def payload_slice(spec: CfoFsk, bits: np.ndarray) -> np.ndarray:
    """The part of an embedded payload the decoder actually returns."""
    d = spec.edge_discard
    return np.asarray(bits)[d : len(bits) - d]


def embed(iq: np.ndarray, bits: np.ndarray, spec: CfoFsk, n_data_symbols: int) -> np.ndarray:
    """Frequency-shift the data region symbol by symbol; returns a new buffer."""
    bits = np.asarray(bits, dtype=np.uint8)
    if len(bits) != n_data_symbols:
        raise ValueError(f"need one bit per data symbol ({n_data_symbols}), got {len(bits)}")
    if n_data_symbols < spec.min_symbols:
        raise ValueError(f"frame too short for CFO keying: {n_data_symbols} < {spec.min_symbols}")
    if len(iq) != DATA_OFFSET + n_data_symbols * N_SYMBOL:
        raise ValueError("buffer length does not match the stated symbol count")
    chips = bits ^ whitening_sequence(len(bits)) if spec.whiten else bits
    signs = 2.0 * chips.astype(np.float64) - 1.0
    if spec.invert:
        signs = -signs
    freq = np.repeat(signs * spec.delta_hz, N_SYMBOL)
    # Phase at sample n accumulates the shifts of samples 0..n-1, keeping the
    # waveform continuous across bit boundaries.
    phase = 2.0 * np.pi * np.concatenate([[0.0], np.cumsum(freq)[:-1]]) / SAMPLE_RATE_HZ
    out = np.array(iq, dtype=np.complex128, copy=True)
    out[DATA_OFFSET:] *= np.exp(1j * phase)
    return out


def extract(per_symbol_cfo_hz: np.ndarray, spec: CfoFsk) -> CovertResult:
    """Slice the measured per-symbol CFO trace back into payload bits.

    Returns the trimmed payload (edge_discard bits dropped per side); compare
    against payload_slice() of the embedded bits.
    """
    trace = np.asarray(per_symbol_cfo_hz, dtype=np.float64)
    n = len(trace)
    if n < spec.min_symbols:
        raise ValueError(f"trace has {n} symbols; need at least {spec.min_symbols}")
    residual = trace - centered_moving_average(trace, spec.threshold_taps)
    chips = (residual > 0.0).astype(np.uint8)
    if spec.invert:
        chips = 1 - chips
    bits = chips ^ whitening_sequence(n) if spec.whiten else chips
    d = spec.edge_discard
    return CovertResult(bits=bits[d : n - d], confidence=np.abs(residual[d : n - d]))
