"""Two-permutation block interleaver, one OFDM symbol per block."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _permutation(n_cbps: int, n_bpsc: int) -> np.ndarray:
    """Output position j for each input index k.

    First permutation spreads adjacent coded bits across subcarriers; the
    second rotates bit positions within a subcarrier so neighbours alternate
    between more and less significant constellation bits.
    """
    s = max(n_bpsc // 2, 1)
    k = np.arange(n_cbps)
    i = (n_cbps // 16) * (k % 16) + k // 16
    j = s * (i // s) + (i + n_cbps - (16 * i // n_cbps)) % s
    return j


def interleave(bits: np.ndarray, n_cbps: int, n_bpsc: int) -> np.ndarray:
    bits = np.asarray(bits)
    if len(bits) != n_cbps:
        raise ValueError(f"expected one symbol of {n_cbps} bits, got {len(bits)}")
    out = np.empty_like(bits)
    out[_permutation(n_cbps, n_bpsc)] = bits
    return out


def deinterleave(bits: np.ndarray, n_cbps: int, n_bpsc: int) -> np.ndarray:
    bits = np.asarray(bits)
    if len(bits) != n_cbps:
        raise ValueError(f"expected one symbol of {n_cbps} bits, got {len(bits)}")
    return bits[_permutation(n_cbps, n_bpsc)]


def interleave_stream(bits: np.ndarray, n_cbps: int, n_bpsc: int) -> np.ndarray:
    """Interleave a multi-symbol stream symbol by symbol."""
    bits = np.asarray(bits)
    if len(bits) % n_cbps:
        raise ValueError("stream length not a multiple of n_cbps")
    blocks = bits.reshape(-1, n_cbps)
    out = np.empty_like(blocks)
    out[:, _permutation(n_cbps, n_bpsc)] = blocks
    return out.reshape(-1)


def deinterleave_stream(bits: np.ndarray, n_cbps: int, n_bpsc: int) -> np.ndarray:
    bits = np.asarray(bits)
    if len(bits) % n_cbps:
        raise ValueError("stream length not a multiple of n_cbps")
    return bits.reshape(-1, n_cbps)[:, _permutation(n_cbps, n_bpsc)].reshape(-1)
