"""Gray-coded constellation mapping and hard demapping.

Level tables index by the per-axis bit group value; e.g. for 16-QAM the two
I bits 0b10 select +3 before normalization. All constellations are scaled to
unit average power.
"""

from __future__ import annotations

import numpy as np

_LEVELS_2 = np.array([-1.0, 1.0])                                   # bpsk/qpsk axis
_LEVELS_4 = np.array([-3.0, -1.0, 3.0, 1.0])                        # 16qam axis, Gray
_LEVELS_8 = np.array([-7.0, -5.0, -1.0, -3.0, 7.0, 5.0, 1.0, 3.0])  # 64qam axis, Gray

KMOD = {"bpsk": 1.0, "qpsk": np.sqrt(2.0), "16qam": np.sqrt(10.0), "64qam": np.sqrt(42.0)}
N_BPSC = {"bpsk": 1, "qpsk": 2, "16qam": 4, "64qam": 6}


def _group_values(bits: np.ndarray, width: int) -> np.ndarray:
    """MSB-first integer value of consecutive `width`-bit groups."""
    groups = bits.reshape(-1, width)
    weights = 1 << np.arange(width - 1, -1, -1)
    return groups @ weights


def map_bits(bits: np.ndarray, modulation: str) -> np.ndarray:
    """Bits -> unit-average-power constellation points."""
    bits = np.asarray(bits, dtype=np.int64)
    n_bpsc = N_BPSC[modulation]
    if len(bits) % n_bpsc:
        raise ValueError(f"bit count {len(bits)} not a multiple of {n_bpsc}")
    if modulation == "bpsk":
        return (2.0 * bits - 1.0).astype(np.complex128)
    half = n_bpsc // 2
    pairs = bits.reshape(-1, n_bpsc)
    axis = {2: _LEVELS_2, 4: _LEVELS_4, 6: _LEVELS_8}[n_bpsc]
    i = axis[_group_values(pairs[:, :half].reshape(-1), half)]
    q = axis[_group_values(pairs[:, half:].reshape(-1), half)]
    return (i + 1j * q) / KMOD[modulation]


def _demap_axis_2(x: np.ndarray) -> np.ndarray:
    return (x > 0).astype(np.uint8).reshape(-1, 1)


def _demap_axis_4(x: np.ndarray) -> np.ndarray:
    b0 = x > 0
    b1 = np.abs(x) < 2.0
    return np.stack([b0, b1], axis=1).astype(np.uint8)


def _demap_axis_8(x: np.ndarray) -> np.ndarray:
    ax = np.abs(x)
    b0 = x > 0
    b1 = ax < 4.0
    b2 = (ax > 2.0) & (ax < 6.0)
    return np.stack([b0, b1, b2], axis=1).astype(np.uint8)


def demap_hard(symbols: np.ndarray, modulation: str) -> np.ndarray:
    """Nearest-point hard decisions back to bits."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    if modulation == "bpsk":
        return (symbols.real > 0).astype(np.uint8)
    scaled = symbols * KMOD[modulation]
    demap = {"qpsk": _demap_axis_2, "16qam": _demap_axis_4, "64qam": _demap_axis_8}[modulation]
    i_bits = demap(scaled.real)
    q_bits = demap(scaled.imag)
    return np.concatenate([i_bits, q_bits], axis=1).reshape(-1)


def nearest_points(symbols: np.ndarray, modulation: str) -> np.ndarray:
    """Constellation points closest to each input (for EVM measurement)."""
    return map_bits(demap_hard(symbols, modulation), modulation)


def _margins_axis(x: np.ndarray, half: int) -> np.ndarray:
    ax = np.abs(x)
    if half == 1:
        return ax.reshape(-1, 1)
    if half == 2:
        return np.stack([ax, np.abs(ax - 2.0)], axis=1)
    return np.stack([ax, np.abs(ax - 4.0), np.minimum(np.abs(ax - 2.0), np.abs(ax - 6.0))], axis=1)


def bit_margins(symbols: np.ndarray, modulation: str) -> np.ndarray:
    """Distance of each hard bit decision to its slicing threshold.

    Same bit order as demap_hard; units are pre-normalization axis levels, so
    values are only meaningful relative to each other.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    if modulation == "bpsk":
        return np.abs(symbols.real)
    scaled = symbols * KMOD[modulation]
    half = N_BPSC[modulation] // 2
    return np.concatenate(
        [_margins_axis(scaled.real, half), _margins_axis(scaled.imag, half)], axis=1
    ).reshape(-1)


def gray_encode(value: int | np.ndarray) -> int | np.ndarray:
    return value ^ (value >> 1)


def gray_decode(value: int) -> int:
    out = 0
    while value:
        out ^= value
        value >>= 1
    return out
