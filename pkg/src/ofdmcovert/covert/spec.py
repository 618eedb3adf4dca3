"""Covert-channel configuration types and capacity arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..phy.mapping import N_BPSC
from ..phy.params import EXTRA_SUBCARRIERS, N_CP


@dataclass(frozen=True)
class StfPsk:
    """Rotate the whole short training field by one of `m_order` phases."""

    m_order: int = 64

    def __post_init__(self) -> None:
        m = self.m_order
        if m < 2 or m > 256 or m & (m - 1):
            raise ValueError("m_order must be a power of two in [2, 256]")

    @property
    def bits_per_frame(self) -> int:
        return int(self.m_order).bit_length() - 1


@dataclass(frozen=True)
class CfoFsk:
    """Shift each data symbol by +/- delta_hz, one bit per symbol."""

    delta_hz: float = 10e3
    invert: bool = False       # False: bit 1 -> +delta
    whiten: bool = True        # XOR payload with the public LFSR sequence

    # Decoder shape: 20-tap moving-average threshold, 6 edge bits dropped
    # per side, so a usable frame needs at least 60 symbols.
    threshold_taps: int = 20
    edge_discard: int = 6
    min_symbols: int = 60


@dataclass(frozen=True)
class Camo:
    """Extra data subcarriers at +/-27, +/-28 under an extended preamble."""

    modulation: str = "64qam"

    @property
    def bits_per_symbol(self) -> int:
        return len(EXTRA_SUBCARRIERS) * N_BPSC[self.modulation]


@dataclass(frozen=True)
class CpReplace:
    """Replace cyclic-prefix samples with small-IFFT covert mini-symbols."""

    fraction: str = "full"     # "full": 16 CP samples, "half": first 8
    modulation: str = "bpsk"
    covert_fft: int = 16
    cpcp_len: int = 0          # block-level guard prefix inside the CP

    def __post_init__(self) -> None:
        if self.fraction not in ("full", "half"):
            raise ValueError("fraction must be 'full' or 'half'")
        if self.covert_fft not in (16, 8, 4, 2):
            raise ValueError("covert_fft must be one of 16, 8, 4, 2")
        if self.cpcp_len < 0 or self.cpcp_len >= self.replaced_samples:
            raise ValueError("cpcp_len must be in [0, replaced_samples)")
        if (self.replaced_samples - self.cpcp_len) % self.covert_fft:
            raise ValueError(
                f"{self.replaced_samples} replaced samples minus {self.cpcp_len} guard "
                f"do not divide into {self.covert_fft}-sample mini-symbols"
            )

    @property
    def replaced_samples(self) -> int:
        return N_CP if self.fraction == "full" else N_CP // 2

    @property
    def n_mini_symbols(self) -> int:
        return (self.replaced_samples - self.cpcp_len) // self.covert_fft

    @property
    def usable_bins(self) -> tuple[int, ...]:
        """Centered covert-FFT bin indices that carry payload.

        The 16-point layout drops DC and the three outermost bins (12 usable);
        smaller layouts drop DC only.
        """
        n = self.covert_fft
        bins = [c for c in range(-n // 2, n // 2) if c != 0]
        if n == 16:
            bins = [c for c in bins if abs(c) <= 6]
        return tuple(bins)

    @property
    def bits_per_cp(self) -> int:
        return self.n_mini_symbols * len(self.usable_bins) * N_BPSC[self.modulation]


CovertSpec = Union[StfPsk, CfoFsk, Camo, CpReplace]


def capacity_bits(spec: CovertSpec, n_data_symbols: int) -> int:
    """Payload bits one frame carries under `spec`."""
    if isinstance(spec, StfPsk):
        return spec.bits_per_frame
    if isinstance(spec, CfoFsk):
        if n_data_symbols < spec.min_symbols:
            raise ValueError(
                f"frame has {n_data_symbols} data symbols; the CFO channel needs >= {spec.min_symbols}"
            )
        return n_data_symbols
    if isinstance(spec, Camo):
        return n_data_symbols * spec.bits_per_symbol
    if isinstance(spec, CpReplace):
        return n_data_symbols * spec.bits_per_cp
    raise TypeError(f"unknown covert spec {spec!r}")


@dataclass
class CovertResult:
    """Extraction output: bits, a per-bit soft confidence, optional BER."""

    bits: np.ndarray
    confidence: np.ndarray
    ber: float | None = None
    n_errors: int | None = None
    n_compared: int | None = None

    def score_against(self, reference: np.ndarray) -> "CovertResult":
        reference = np.asarray(reference, dtype=np.uint8)
        if len(reference) != len(self.bits):
            raise ValueError("reference length does not match extracted bits")
        errors = int(np.sum(reference != self.bits))
        self.n_errors = errors
        self.n_compared = len(reference)
        self.ber = errors / len(reference) if len(reference) else 0.0
        return self
