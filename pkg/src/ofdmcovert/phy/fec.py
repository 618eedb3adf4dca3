"""Convolutional coding: K=7 (133, 171) encoder, puncturing, Viterbi decoding."""

from __future__ import annotations

import numpy as np

from .._kernels import viterbi_decode as _viterbi_kernel
from .params import Mcs

G_A = np.array([1, 0, 1, 1, 0, 1, 1], dtype=np.uint8)   # 133 octal
G_B = np.array([1, 1, 1, 1, 0, 0, 1], dtype=np.uint8)   # 171 octal

# Puncturing patterns over the serialized (a0, b0, a1, b1, ...) stream.
PUNCTURE_MASK = {
    (1, 2): np.array([1, 1], dtype=bool),
    (2, 3): np.array([1, 1, 1, 0], dtype=bool),
    (3, 4): np.array([1, 1, 1, 0, 0, 1], dtype=bool),
}


def conv_encode(bits: np.ndarray) -> np.ndarray:
    """Rate-1/2 mother code; output interleaves the two generator streams."""
    bits = np.asarray(bits, dtype=np.uint8)
    a = np.convolve(bits, G_A)[: len(bits)] % 2
    b = np.convolve(bits, G_B)[: len(bits)] % 2
    out = np.empty(2 * len(bits), dtype=np.uint8)
    out[0::2] = a
    out[1::2] = b
    return out


def _mask_for(mcs_rate: tuple[int, int], n: int) -> np.ndarray:
    mask = PUNCTURE_MASK[mcs_rate]
    if n % len(mask):
        raise ValueError(f"stream length {n} not aligned to puncture period {len(mask)}")
    return np.tile(mask, n // len(mask))


def puncture(coded: np.ndarray, rate: tuple[int, int]) -> np.ndarray:
    if rate == (1, 2):
        return coded
    return coded[_mask_for(rate, len(coded))]


def depuncture(soft: np.ndarray, rate: tuple[int, int]) -> np.ndarray:
    """Re-insert stolen positions as zero-confidence erasures."""
    soft = np.asarray(soft, dtype=np.float64)
    if rate == (1, 2):
        return soft
    mask = PUNCTURE_MASK[rate]
    period = len(mask)
    kept = int(mask.sum())
    if len(soft) % kept:
        raise ValueError(f"punctured length {len(soft)} not aligned to pattern ({kept} of {period})")
    full = np.zeros(len(soft) // kept * period, dtype=np.float64)
    full[_mask_for(rate, len(full))] = soft
    return full


def encode(bits: np.ndarray, mcs: Mcs) -> np.ndarray:
    return puncture(conv_encode(bits), (mcs.coding_num, mcs.coding_den))


def decode(soft: np.ndarray, mcs: Mcs) -> np.ndarray:
    """Soft-input Viterbi decode of a punctured stream.

    `soft` holds one value per received coded bit, sign = bit (positive is 1).
    Returns the full decoded vector, tail bits included.
    """
    full = depuncture(soft, (mcs.coding_num, mcs.coding_den))
    sa = np.ascontiguousarray(full[0::2])
    sb = np.ascontiguousarray(full[1::2])
    return _viterbi_kernel(sa, sb)


def decode_hard(coded_bits: np.ndarray, mcs: Mcs) -> np.ndarray:
    return decode(2.0 * np.asarray(coded_bits, dtype=np.float64) - 1.0, mcs)
