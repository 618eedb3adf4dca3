"""Frequency grid <-> time domain conversion."""

from __future__ import annotations

import numpy as np

from .params import N_CP, N_FFT


def to_time(centered: np.ndarray) -> np.ndarray:
    """64 centered subcarrier values (index 0 = k=-32) -> 64 time samples."""
    return np.fft.ifft(np.fft.ifftshift(centered))


def to_freq(samples: np.ndarray) -> np.ndarray:
    """64 time samples -> centered subcarrier values."""
    return np.fft.fftshift(np.fft.fft(samples))


def add_cp(symbol64: np.ndarray) -> np.ndarray:
    """Prepend the last N_CP samples; no windowing, the copy is exact."""
    return np.concatenate([symbol64[-N_CP:], symbol64])


def place(values: np.ndarray, subcarriers: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """Scatter values onto centered subcarrier indices of a 64-bin vector."""
    if out is None:
        out = np.zeros(N_FFT, dtype=np.complex128)
    out[np.asarray(subcarriers) + N_FFT // 2] = values
    return out


def take(centered: np.ndarray, subcarriers: np.ndarray) -> np.ndarray:
    """Gather centered-bin values at the given subcarrier indices."""
    return centered[..., np.asarray(subcarriers) + N_FFT // 2]


def modulate_symbol(centered: np.ndarray) -> np.ndarray:
    """One 64-bin grid row -> one 80-sample OFDM symbol with cyclic prefix."""
    return add_cp(to_time(centered))


def modulate(grid: np.ndarray) -> np.ndarray:
    """(n_sym, 64) centered grid -> concatenated 80-sample symbols."""
    body = np.fft.ifft(np.fft.ifftshift(grid, axes=-1), axis=-1)
    with_cp = np.concatenate([body[:, -N_CP:], body], axis=-1)
    return with_cp.reshape(-1)


def symbol_fft(samples: np.ndarray, start: int) -> np.ndarray:
    """FFT of the 64-sample window of the symbol starting at `start`.

    `start` points at the first CP sample; the window skips the prefix.
    """
    return to_freq(samples[start + N_CP : start + N_CP + N_FFT])
