"""Frame descriptor, data-field bit layout, and the SIGNAL header."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bits as bitops
from .params import (
    MAX_PSDU_BYTES,
    MIN_PSDU_BYTES,
    RATE_BITS_TO_MBPS,
    SERVICE_BITS,
    TAIL_BITS,
    Mcs,
    mcs_by_rate,
)
from ..errors import SignalFieldError


@dataclass
class Frame:
    """A PSDU (FCS included) plus the rate it should be sent at."""

    psdu: bytes
    rate_mbps: int
    scrambler_seed: int = bitops.DEFAULT_SCRAMBLER_SEED

    def __post_init__(self) -> None:
        if not MIN_PSDU_BYTES <= len(self.psdu) <= MAX_PSDU_BYTES:
            raise ValueError(
                f"PSDU length {len(self.psdu)} outside [{MIN_PSDU_BYTES}, {MAX_PSDU_BYTES}]"
            )

    @property
    def mcs(self) -> Mcs:
        return mcs_by_rate(self.rate_mbps)

    @property
    def n_data_symbols(self) -> int:
        return n_data_symbols(len(self.psdu), self.mcs)


def n_data_symbols(psdu_len: int, mcs: Mcs) -> int:
    """Symbols needed for SERVICE + payload + tail, rounded up."""
    return math.ceil((SERVICE_BITS + 8 * psdu_len + TAIL_BITS) / mcs.n_dbps)


def data_field_bits(frame: Frame) -> np.ndarray:
    """Scrambled data-field bits (SERVICE + PSDU + tail + pad).

    The whole field is scrambled, then the six tail positions are forced back
    to zero so the decoder trellis terminates.
    """
    mcs = frame.mcs
    n_sym = n_data_symbols(len(frame.psdu), mcs)
    n_bits = n_sym * mcs.n_dbps
    field = np.zeros(n_bits, dtype=np.uint8)
    payload = bitops.bytes_to_bits(frame.psdu)
    field[SERVICE_BITS : SERVICE_BITS + len(payload)] = payload
    scrambled = bitops.scramble(field, frame.scrambler_seed)
    tail_at = SERVICE_BITS + len(payload)
    scrambled[tail_at : tail_at + TAIL_BITS] = 0
    return scrambled


def parse_data_field(descrambler_input: np.ndarray, psdu_len: int) -> bytes | None:
    """Descramble a decoded data field and slice out the PSDU bytes.

    Returns None when the scrambler seed cannot be recovered from the
    SERVICE prefix (too many bit errors).
    """
    seed = bitops.recover_scrambler_seed(descrambler_input)
    if seed is None:
        return None
    clear = bitops.scramble(descrambler_input, seed)
    payload = clear[SERVICE_BITS : SERVICE_BITS + 8 * psdu_len]
    return bitops.bits_to_bytes(payload)


def build_signal_bits(rate_mbps: int, psdu_len: int) -> np.ndarray:
    """24-bit SIGNAL content: RATE, reserved, LENGTH (LSB first), parity, tail."""
    mcs = mcs_by_rate(rate_mbps)
    if not 1 <= psdu_len <= 4095:
        raise ValueError("LENGTH field is 12 bits")
    out = np.zeros(24, dtype=np.uint8)
    out[0:4] = mcs.rate_bits
    out[5:17] = bitops.bits_from_int(psdu_len, 12)
    out[17] = out[0:17].sum() % 2
    return out


def parse_signal_bits(sig: np.ndarray) -> tuple[int, int]:
    """Decode (rate_mbps, length) from 24 SIGNAL bits, checking parity."""
    sig = np.asarray(sig, dtype=np.uint8)
    if sig[0:18].sum() % 2:
        raise SignalFieldError("SIGNAL parity check failed")
    if sig[4] != 0 or sig[18:24].any():
        raise SignalFieldError("SIGNAL reserved/tail bits non-zero")
    rate_bits = tuple(int(b) for b in sig[0:4])
    if rate_bits not in RATE_BITS_TO_MBPS:
        raise SignalFieldError(f"unknown RATE code {rate_bits}")
    length = bitops.int_from_bits(sig[5:17])
    if length == 0:
        raise SignalFieldError("zero LENGTH")
    return RATE_BITS_TO_MBPS[rate_bits], length
