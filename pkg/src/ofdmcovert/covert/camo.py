"""Covert data on camouflage subcarriers.

Four extra subcarriers (+/-27, +/-28) carry ordinary QAM alongside each data
symbol. Those bins are outside the legacy 52-subcarrier occupancy but inside
the 56-subcarrier footprint of newer PHYs, so the frame's spectrum looks
like a normal wide-occupancy transmission; the long training field is
extended accordingly so a cooperating receiver can equalize them. A legacy
receiver never looks at the bins and decodes the frame as usual.
"""

from __future__ import annotations

import numpy as np

from ..phy import ofdm
from ..phy.mapping import N_BPSC, bit_margins, demap_hard, map_bits
from ..phy.params import DATA_OFFSET, EXTRA_SUBCARRIERS, N_SYMBOL
from .spec import Camo, CovertResult


def embed_grid(grid: np.ndarray, bits: np.ndarray, spec: Camo) -> None:
    """Write covert QAM onto the extra bins of every data row, in place.

    `grid` is the full frame grid; row 0 (the SIGNAL symbol) stays legacy so
    rate/length parsing is unaffected.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    n_sym = grid.shape[0] - 1
    expected = n_sym * spec.bits_per_symbol
    if len(bits) != expected:
        raise ValueError(f"expected {expected} covert bits, got {len(bits)}")
    points = map_bits(bits, spec.modulation).reshape(n_sym, len(EXTRA_SUBCARRIERS))
    grid[1:, np.asarray(EXTRA_SUBCARRIERS) + grid.shape[1] // 2] = points


def extract(
    corrected: np.ndarray,
    frame_start: int,
    n_data_symbols: int,
    channel_estimate_ht: np.ndarray,
    pilot_phase_rad: np.ndarray,
    spec: Camo,
) -> CovertResult:
    """Equalize the extra bins of each data symbol and demap.

    `channel_estimate_ht` must come from the extended training field (it is
    the only place the extra bins are sounded); `pilot_phase_rad` is the
    legacy per-data-symbol common phase, reused here since the extra bins
    share the same oscillator.
    """
    start = frame_start + DATA_OFFSET
    region = np.asarray(corrected[start : start + n_data_symbols * N_SYMBOL])
    body = region.reshape(n_data_symbols, N_SYMBOL)[:, N_SYMBOL - 64 :]
    spectra = np.fft.fftshift(np.fft.fft(body, axis=1), axes=1)
    h = ofdm.take(np.asarray(channel_estimate_ht), EXTRA_SUBCARRIERS)
    if np.any(np.abs(h) == 0.0):
        raise ValueError("channel estimate is zero on the camouflage bins")
    symbols = ofdm.take(spectra, EXTRA_SUBCARRIERS) / h
    symbols *= np.exp(-1j * np.asarray(pilot_phase_rad))[:, None]
    flat = symbols.reshape(-1)
    return CovertResult(
        bits=demap_hard(flat, spec.modulation),
        confidence=bit_margins(flat, spec.modulation),
    )
