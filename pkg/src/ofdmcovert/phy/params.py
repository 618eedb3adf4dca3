"""Numerology and rate tables for the 20 MHz OFDM baseband.

Everything here is a module-level constant so the rest of the package can
treat the air interface as fixed: 64-point FFT, 16-sample cyclic prefix,
312.5 kHz subcarrier spacing, 4 us symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SAMPLE_RATE_HZ = 20e6
N_FFT = 64
N_CP = 16
N_SYMBOL = N_FFT + N_CP          # 80 samples, 4 us
SYMBOL_TIME_S = N_SYMBOL / SAMPLE_RATE_HZ
SUBCARRIER_SPACING_HZ = SAMPLE_RATE_HZ / N_FFT

# Subcarrier indices are "centered": k in [-32, 31], DC = 0.
DATA_SUBCARRIERS = np.array(
    [k for k in range(-26, 27) if k != 0 and abs(k) != 7 and abs(k) != 21],
    dtype=np.int64,
)
PILOT_SUBCARRIERS = np.array([-21, -7, 7, 21], dtype=np.int64)
ACTIVE_SUBCARRIERS = np.array(sorted(set(DATA_SUBCARRIERS) | set(PILOT_SUBCARRIERS)), dtype=np.int64)
PILOT_BASE = np.array([1, 1, 1, -1], dtype=np.float64)

# Extended (802.11n-like) occupancy used by the camouflage covert channel.
EXTRA_SUBCARRIERS = np.array([-28, -27, 27, 28], dtype=np.int64)
ACTIVE_SUBCARRIERS_HT = np.array(
    sorted(set(ACTIVE_SUBCARRIERS) | set(EXTRA_SUBCARRIERS)), dtype=np.int64
)

N_DATA_SUBCARRIERS = len(DATA_SUBCARRIERS)
N_PILOTS = len(PILOT_SUBCARRIERS)

assert N_DATA_SUBCARRIERS == 48
assert len(ACTIVE_SUBCARRIERS) == 52
assert len(ACTIVE_SUBCARRIERS_HT) == 56

PREAMBLE_LEN = 320               # 160 short + 160 long training samples
SIG_OFFSET = PREAMBLE_LEN        # SIGNAL symbol follows the preamble
DATA_OFFSET = PREAMBLE_LEN + N_SYMBOL

SERVICE_BITS = 16
TAIL_BITS = 6
FCS_LEN_BYTES = 4
MIN_PSDU_BYTES = 14
MAX_PSDU_BYTES = 2338


@dataclass(frozen=True)
class Mcs:
    """One row of the rate table."""

    rate_mbps: int
    modulation: str
    n_bpsc: int                  # coded bits per subcarrier
    coding_num: int              # coding rate numerator / denominator
    coding_den: int
    rate_bits: tuple[int, int, int, int]   # SIGNAL field RATE code

    @property
    def n_cbps(self) -> int:
        return self.n_bpsc * N_DATA_SUBCARRIERS

    @property
    def n_dbps(self) -> int:
        return self.n_cbps * self.coding_num // self.coding_den

    @property
    def coding_rate(self) -> float:
        return self.coding_num / self.coding_den


MCS_TABLE: dict[int, Mcs] = {
    6: Mcs(6, "bpsk", 1, 1, 2, (1, 1, 0, 1)),
    9: Mcs(9, "bpsk", 1, 3, 4, (1, 1, 1, 1)),
    12: Mcs(12, "qpsk", 2, 1, 2, (0, 1, 0, 1)),
    18: Mcs(18, "qpsk", 2, 3, 4, (0, 1, 1, 1)),
    24: Mcs(24, "16qam", 4, 1, 2, (1, 0, 0, 1)),
    36: Mcs(36, "16qam", 4, 3, 4, (1, 0, 1, 1)),
    48: Mcs(48, "64qam", 6, 2, 3, (0, 0, 0, 1)),
    54: Mcs(54, "64qam", 6, 3, 4, (0, 0, 1, 1)),
}

RATE_BITS_TO_MBPS = {mcs.rate_bits: mbps for mbps, mcs in MCS_TABLE.items()}

BITS_PER_SYMBOL = {"bpsk": 1, "qpsk": 2, "16qam": 4, "64qam": 6}


def mcs_by_rate(rate_mbps: int) -> Mcs:
    try:
        return MCS_TABLE[rate_mbps]
    except KeyError:
        raise ValueError(f"unsupported rate {rate_mbps} Mbit/s; pick one of {sorted(MCS_TABLE)}") from None


def subcarrier_to_bin(k: int | np.ndarray) -> int | np.ndarray:
    """Centered subcarrier index -> FFT bin index."""
    return k % N_FFT


# Short training sequence, frequency domain, centered k = -26..26.
# Energy on 12 subcarriers (multiples of 4), scaled so the sequence power
# matches a 52-subcarrier data symbol: 12 * |sqrt(13/6)*(1+1j)|^2 == 52.
_S = np.sqrt(13.0 / 6.0)
STF_SEQUENCE = np.zeros(53, dtype=np.complex128)
for _k, _sign in [(-24, 1), (-20, -1), (-16, 1), (-12, -1), (-8, -1), (-4, 1),
                  (4, -1), (8, -1), (12, 1), (16, 1), (20, 1), (24, 1)]:
    STF_SEQUENCE[_k + 26] = _sign * _S * (1 + 1j)
STF_SUBCARRIERS = np.array([k for k in range(-26, 27) if STF_SEQUENCE[k + 26] != 0], dtype=np.int64)
assert len(STF_SUBCARRIERS) == 12

# Long training sequence, frequency domain, centered k = -26..26 (DC = 0).
LTF_SEQUENCE = np.array(
    [1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1]
    + [0]
    + [1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1],
    dtype=np.complex128,
)

# Extended long training sequence (56 subcarriers): the legacy sequence plus
# {1, 1} on k = -28, -27 and {-1, -1} on k = 27, 28.
HT_LTF_SEQUENCE = np.concatenate(
    [np.array([1, 1], dtype=np.complex128), LTF_SEQUENCE, np.array([-1, -1], dtype=np.complex128)]
)


def pilot_polarity(n_symbols: int) -> np.ndarray:
    """Per-symbol pilot polarity sequence p_0, p_1, ... (+/-1).

    Generated by the frame scrambler LFSR seeded all-ones; output bit 1 maps
    to polarity -1. Index 0 multiplies the SIGNAL symbol pilots.
    """
    from .bits import lfsr_sequence

    bits = lfsr_sequence(n_symbols, seed=0b1111111)
    return 1.0 - 2.0 * bits.astype(np.float64)
