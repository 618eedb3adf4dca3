"""Bit-level plumbing: packing, the frame scrambler, and the FCS."""

from __future__ import annotations

import binascii

import numpy as np

DEFAULT_SCRAMBLER_SEED = 0b1111111


def bytes_to_bits(data: bytes) -> np.ndarray:
    """Serialize octets LSB-first, matching the over-the-air bit order."""
    arr = np.frombuffer(data, dtype=np.uint8)
    return np.unpackbits(arr, bitorder="little").astype(np.uint8)


def bits_to_bytes(bits: np.ndarray) -> bytes:
    if len(bits) % 8:
        raise ValueError("bit count must be a multiple of 8")
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes()


def bits_from_int(value: int, width: int) -> np.ndarray:
    """LSB-first bit vector of `value`."""
    return np.array([(value >> i) & 1 for i in range(width)], dtype=np.uint8)


def int_from_bits(bits: np.ndarray) -> int:
    return int(sum(int(b) << i for i, b in enumerate(bits)))


def lfsr_sequence(n: int, seed: int = DEFAULT_SCRAMBLER_SEED) -> np.ndarray:
    """First `n` output bits of the x^7 + x^4 + 1 LFSR.

    State is held as 7 bits (x1..x7); each step outputs x7 xor x4 and feeds
    it back into x1. The all-ones seed gives the 127-periodic sequence
    starting 00001110 11110010...
    """
    if not 1 <= seed <= 127:
        raise ValueError("seed must be a 7-bit non-zero value")
    state = [(seed >> i) & 1 for i in range(7)]      # state[i] = x_{i+1}
    out = np.empty(n, dtype=np.uint8)
    for i in range(n):
        fb = state[6] ^ state[3]
        out[i] = fb
        state = [fb] + state[:6]
    return out


def scramble(bits: np.ndarray, seed: int = DEFAULT_SCRAMBLER_SEED) -> np.ndarray:
    """XOR the bit stream with the LFSR output. Involutory for a fixed seed."""
    bits = np.asarray(bits, dtype=np.uint8)
    return bits ^ lfsr_sequence(len(bits), seed)


def recover_scrambler_seed(scrambled: np.ndarray) -> int | None:
    """Recover the seed from a scrambled all-zero SERVICE prefix.

    The first 7 transmitted SERVICE bits are zeros, so the received
    descrambler input starts with 7 raw LFSR output bits. Searching the 127
    possible states is cheap and needs no algebra.
    """
    head = np.asarray(scrambled[:7], dtype=np.uint8)
    for seed in range(1, 128):
        if np.array_equal(lfsr_sequence(7, seed), head):
            return seed
    return None


def fcs(data: bytes) -> int:
    """IEEE CRC-32 over `data` (reflected 0x04C11DB7, init/final 0xFFFFFFFF)."""
    return binascii.crc32(data) & 0xFFFFFFFF


def append_fcs(data: bytes) -> bytes:
    return data + fcs(data).to_bytes(4, "little")


def check_fcs(frame: bytes) -> bool:
    if len(frame) < 4:
        return False
    return fcs(frame[:-4]) == int.from_bytes(frame[-4:], "little")
