"""Frame synthesis: header, payload encoding, and covert embedding hooks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..covert import camo, cfo_fsk, cp_replace, stf_psk
from ..covert.spec import Camo, CfoFsk, CovertSpec, CpReplace, StfPsk, capacity_bits
from . import fec, frames, interleaver, ofdm, preamble
from .mapping import map_bits
from .params import (
    DATA_SUBCARRIERS,
    N_FFT,
    PILOT_BASE,
    PILOT_SUBCARRIERS,
    pilot_polarity,
)

# Deterministic output scaling: unit mean sample power for a nominal
# 52-subcarrier symbol. A constant (rather than measured power) keeps the
# untouched samples of a frame bit-identical whether or not a covert channel
# is embedded.
TX_SCALE = N_FFT / np.sqrt(52.0)


@dataclass
class TxBuild:
    """A synthesized frame plus the intermediates tests and sweeps need."""

    iq: np.ndarray
    grid: np.ndarray                       # (1 + n_sym, 64) centered bins
    data_coded_bits: np.ndarray            # post-puncturing reference stream
    covert_bits: np.ndarray | None = None
    covert: CovertSpec | None = None
    frame: frames.Frame | None = None


def _assemble_row(row: np.ndarray, data_points: np.ndarray, polarity: float) -> None:
    ofdm.place(data_points, DATA_SUBCARRIERS, out=row)
    ofdm.place(PILOT_BASE * polarity, PILOT_SUBCARRIERS, out=row)


def build_frame(
    frame: frames.Frame,
    covert: CovertSpec | None = None,
    covert_bits: np.ndarray | None = None,
) -> TxBuild:
    """Encode a frame to baseband IQ, optionally carrying a covert payload."""
    if (covert is None) != (covert_bits is None):
        raise ValueError("covert spec and covert bits must be given together")
    mcs = frame.mcs
    n_sym = frame.n_data_symbols
    polarity = pilot_polarity(1 + n_sym)
    grid = np.zeros((1 + n_sym, N_FFT), dtype=np.complex128)

    sig_coded = fec.conv_encode(frames.build_signal_bits(frame.rate_mbps, len(frame.psdu)))
    sig_points = map_bits(interleaver.interleave(sig_coded, 48, 1), "bpsk")
    _assemble_row(grid[0], sig_points, polarity[0])

    coded = fec.encode(frames.data_field_bits(frame), mcs)
    points = map_bits(
        interleaver.interleave_stream(coded, mcs.n_cbps, mcs.n_bpsc), mcs.modulation
    ).reshape(n_sym, len(DATA_SUBCARRIERS))
    for i in range(n_sym):
        _assemble_row(grid[1 + i], points[i], polarity[1 + i])

    if covert is not None:
        covert_bits = np.asarray(covert_bits, dtype=np.uint8)
        expected = capacity_bits(covert, n_sym)
        if len(covert_bits) != expected:
            raise ValueError(f"covert payload must be {expected} bits, got {len(covert_bits)}")
    if isinstance(covert, Camo):
        camo.embed_grid(grid, covert_bits, covert)

    iq = np.concatenate([preamble.build_preamble(ht_ltf=isinstance(covert, Camo)), ofdm.modulate(grid)])
    if isinstance(covert, StfPsk):
        iq = stf_psk.embed(iq, covert_bits, covert)
    elif isinstance(covert, CpReplace):
        iq = cp_replace.embed(iq, covert_bits, covert, n_sym)
    elif isinstance(covert, CfoFsk):
        iq = cfo_fsk.embed(iq, covert_bits, covert, n_sym)

    return TxBuild(
        iq=iq * TX_SCALE,
        grid=grid,
        data_coded_bits=coded,
        covert_bits=covert_bits,
        covert=covert,
        frame=frame,
    )


def transmit(
    psdu: bytes,
    rate_mbps: int,
    covert: CovertSpec | None = None,
    covert_bits: np.ndarray | None = None,
) -> np.ndarray:
    """PSDU bytes -> IQ samples; covert payload optional."""
    return build_frame(frames.Frame(psdu, rate_mbps), covert, covert_bits).iq
