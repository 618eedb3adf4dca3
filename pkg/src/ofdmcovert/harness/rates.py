"""Covert throughput arithmetic.

Rates follow the resource-share rule: a covert channel that borrows a
fraction of the host waveform's resources is credited with that fraction of
the host bit rate. The STF channel signals once per frame, so its rate is
bits-per-frame times the frame rate; the headline operating point uses the
62,500 frames/s gross rate of back-to-back header-only bursts.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..covert.spec import Camo, CfoFsk, CovertSpec, CpReplace, StfPsk
from ..phy.frames import n_data_symbols
from ..phy.params import (
    EXTRA_SUBCARRIERS,
    N_DATA_SUBCARRIERS,
    N_FFT,
    N_SYMBOL,
    PREAMBLE_LEN,
    SAMPLE_RATE_HZ,
    SYMBOL_TIME_S,
    mcs_by_rate,
)

# Shortest useful burst: training fields plus the SIGNAL symbol. One PSK
# rotation rides on every such burst.
HEADER_ONLY_FRAME_RATE_HZ = SAMPLE_RATE_HZ / PREAMBLE_LEN


def frame_duration_s(rate_mbps: int, psdu_bytes: int) -> float:
    n_sym = n_data_symbols(psdu_bytes, mcs_by_rate(rate_mbps))
    return (PREAMBLE_LEN + N_SYMBOL * (1 + n_sym)) / SAMPLE_RATE_HZ


def covert_rate_bps(
    spec: CovertSpec,
    rate_mbps: int = 54,
    psdu_bytes: int = 1500,
    frames_per_second: float | None = None,
) -> float:
    """Steady-state covert throughput.

    frames_per_second only matters for the per-frame STF channel; when not
    given, the frame rate of back-to-back frames at (rate_mbps, psdu_bytes)
    is used.
    """
    if isinstance(spec, StfPsk):
        fps = frames_per_second or 1.0 / frame_duration_s(rate_mbps, psdu_bytes)
        return spec.bits_per_frame * fps
    if isinstance(spec, CfoFsk):
        return 1.0 / SYMBOL_TIME_S
    if isinstance(spec, Camo):
        return rate_mbps * 1e6 * len(EXTRA_SUBCARRIERS) / N_DATA_SUBCARRIERS
    if isinstance(spec, CpReplace):
        return rate_mbps * 1e6 * spec.replaced_samples / N_FFT
    raise TypeError(f"unknown covert spec {spec!r}")


@dataclass
class RateRow:
    label: str
    host_rate_mbps: int
    covert_rate_bps: float


def reference_rates() -> list[RateRow]:
    """Throughput of the covert channels at their headline operating points."""
    rows = [
        RateRow(
            "stf-psk, 64 phases, header-only burst rate",
            36,
            covert_rate_bps(StfPsk(m_order=64), 36, 14, frames_per_second=HEADER_ONLY_FRAME_RATE_HZ),
        ),
        RateRow("cfo-fsk, one bit per symbol", 54, covert_rate_bps(CfoFsk(), 54)),
        RateRow("camouflage subcarriers", 54, covert_rate_bps(Camo(), 54)),
        RateRow("cp-replace, full prefix", 54, covert_rate_bps(CpReplace(fraction="full"), 54)),
        RateRow(
            "cp-replace, half prefix",
            54,
            covert_rate_bps(CpReplace(fraction="half", covert_fft=2, cpcp_len=2), 54),
        ),
    ]
    return rows
