"""Covert mini-symbols in place of cyclic-prefix samples.

The cyclic prefix only exists to absorb multipath spill; the receiver FFT
window never covers it. Overwriting the leading CP samples of each data
symbol therefore leaves the legitimate decode intact as long as the channel
delay spread stays shorter than the untouched CP tail.

The replacement samples are themselves tiny OFDM symbols: an N-point IFFT
(N in {16, 8, 4, 2}) over QAM-loaded bins, at the same average power as the
surrounding waveform. A block-level guard ("cpcp") can cyclically extend
the mini-symbol block to buy back some multipath protection at the cost of
capacity.
"""

from __future__ import annotations

import numpy as np

from ..phy import ofdm
from ..phy.mapping import bit_margins, demap_hard, map_bits
from ..phy.params import ACTIVE_SUBCARRIERS, DATA_OFFSET, N_FFT, N_SYMBOL
from .spec import CovertResult, CpReplace

# Mini-symbols match the mean sample power of a 52-subcarrier data symbol
# before transmit scaling, so the CP region does not stick out in amplitude.
_POWER_TARGET = 52.0 / (N_FFT * N_FFT)


def _gain(spec: CpReplace) -> float:
    return spec.covert_fft * np.sqrt(_POWER_TARGET / len(spec.usable_bins))


def _fft_order_bins(spec: CpReplace) -> np.ndarray:
    return np.asarray(spec.usable_bins, dtype=np.int64) % spec.covert_fft


# MMSE diagonal loading relative to the mean channel power. Keeps the
# inverse bounded through fading nulls; biases amplitudes by ~1%.
_EQ_REGULARIZER = 0.01
# Channel-estimate smoothing span (in sounded bins) before inversion. The
# per-bin training noise would otherwise pass straight into the inverse.
_EQ_SMOOTH_TAPS = 5


def equalizer_response(channel_estimate: np.ndarray) -> np.ndarray:
    """Centered 64-bin MMSE inverse of the legacy channel estimate.

    The mini-symbols spread energy across whole legacy bands, including DC
    and the guard bins the training never sounds, so those gaps are filled
    by interpolating the smoothed sounded bins (the channel is smooth at
    that scale; beyond the band edges the last sounded value is held).
    """
    h = np.asarray(channel_estimate)
    positions = ACTIVE_SUBCARRIERS + N_FFT // 2
    grid = np.arange(N_FFT)
    sounded = ofdm.take(h, ACTIVE_SUBCARRIERS)
    kernel = np.ones(_EQ_SMOOTH_TAPS)
    counts = np.convolve(np.ones(len(sounded)), kernel, mode="same")
    sounded = np.convolve(sounded, kernel, mode="same") / counts
    mean_power = float(np.mean(np.abs(sounded) ** 2))
    if mean_power < 1e-24:
        raise ValueError("channel estimate carries no energy at the active subcarriers")
    filled = np.interp(grid, positions, sounded.real) + 1j * np.interp(
        grid, positions, sounded.imag
    )
    return np.conj(filled) / (np.abs(filled) ** 2 + _EQ_REGULARIZER * mean_power)


def _block_filter(inverse_response: np.ndarray, spec: CpReplace) -> np.ndarray:
    """The inverse response sampled on the covert payload's FFT grid.

    The payload (the replaced region past the guard, R samples) is equalized
    as its own R-point circular block; its bin j sits at legacy subcarrier
    b * 64/R where b is the centered alias of j. R need not divide 64, so
    the response is interpolated. Returned in FFT bin order.
    """
    r = spec.replaced_samples - spec.cpcp_len
    b = (np.arange(r) + r // 2) % r - r // 2
    positions = b * (N_FFT / r) + N_FFT // 2
    grid = np.arange(N_FFT)
    return np.interp(positions, grid, inverse_response.real) + 1j * np.interp(
        positions, grid, inverse_response.imag
    )


def embed(iq: np.ndarray, bits: np.ndarray, spec: CpReplace, n_data_symbols: int) -> np.ndarray:
    """Overwrite the leading CP samples of every data symbol; returns a copy.

    Re-running embed on the result with the same bits is a no-op: the
    replacement is a write, not an addition.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    expected = n_data_symbols * spec.bits_per_cp
    if len(bits) != expected:
        raise ValueError(f"expected {expected} covert bits, got {len(bits)}")
    n = spec.covert_fft
    points = map_bits(bits, spec.modulation).reshape(n_data_symbols, spec.n_mini_symbols, -1)
    spectra = np.zeros((n_data_symbols, spec.n_mini_symbols, n), dtype=np.complex128)
    spectra[:, :, _fft_order_bins(spec)] = points * _gain(spec)
    body = np.fft.ifft(spectra, axis=2).reshape(n_data_symbols, -1)
    if spec.cpcp_len:
        body = np.concatenate([body[:, -spec.cpcp_len :], body], axis=1)
    out = np.array(iq, dtype=np.complex128, copy=True)
    view = out[DATA_OFFSET : DATA_OFFSET + n_data_symbols * N_SYMBOL].reshape(n_data_symbols, N_SYMBOL)
    view[:, : spec.replaced_samples] = body
    return out


def extract(
    corrected: np.ndarray,
    frame_start: int,
    n_data_symbols: int,
    channel_estimate: np.ndarray,
    pilot_phase_rad: np.ndarray,
    spec: CpReplace,
) -> CovertResult:
    """Equalize each covert payload circularly, FFT the minis, demap the QAM.

    The guard samples are discarded first, exactly like a cyclic prefix:
    the remaining payload is treated as an R-point circular block and
    MMSE-deconvolved with the legacy channel estimate sampled on the block
    grid. The circular model is exact once the guard covers the channel
    memory; without a guard, the mismatch (previous-symbol spill plus
    wrap-around error) corrupts the block.
    """
    start = frame_start + DATA_OFFSET
    corrected = np.asarray(corrected)
    filt = _block_filter(equalizer_response(channel_estimate), spec)
    payload = spec.replaced_samples - spec.cpcp_len
    index = (
        start
        + spec.cpcp_len
        + N_SYMBOL * np.arange(n_data_symbols)[:, None]
        + np.arange(payload)[None, :]
    )
    equalized = np.fft.ifft(np.fft.fft(corrected[index], axis=1) * filt[None, :], axis=1)
    minis = equalized.reshape(n_data_symbols, spec.n_mini_symbols, spec.covert_fft)
    spectra = np.fft.fft(minis, axis=2)
    values = spectra[:, :, _fft_order_bins(spec)] / _gain(spec)
    values = values * np.exp(-1j * np.asarray(pilot_phase_rad))[:, None, None]
    flat = values.reshape(-1)
    return CovertResult(
        bits=demap_hard(flat, spec.modulation),
        confidence=bit_margins(flat, spec.modulation),
    )
