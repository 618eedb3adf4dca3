"""Physical-layer covert channels riding on the OFDM waveform.

Four carriers, one payload mechanism each:

- stf_psk:    one phase rotation of the short training field per frame
- cfo_fsk:    per-symbol frequency shifts keyed on payload bits
- camo:       extra QAM subcarriers disguised as wide-occupancy traffic
- cp_replace: mini OFDM symbols written over cyclic-prefix samples
"""

from __future__ import annotations

import numpy as np

from ..phy import rx as _rx
from . import camo, cfo_fsk, cp_replace, stf_psk
from .spec import (
    Camo,
    CfoFsk,
    CovertResult,
    CovertSpec,
    CpReplace,
    StfPsk,
    capacity_bits,
)

__all__ = [
    "Camo",
    "CfoFsk",
    "CovertResult",
    "CovertSpec",
    "CpReplace",
    "StfPsk",
    "camo",
    "capacity_bits",
    "cfo_fsk",
    "covert_reference",
    "cp_replace",
    "extract_covert",
    "stf_psk",
]


def extract_covert(diag: "_rx.RxDiagnostics", spec: CovertSpec) -> CovertResult:
    """Pull the covert payload out of a demodulated frame's diagnostics."""
    if isinstance(spec, StfPsk):
        return stf_psk.extract(
            diag.corrected,
            diag.frame_start,
            diag.channel_estimate,
            spec,
            diag.pilot_phase_rad,
        )
    if isinstance(spec, CfoFsk):
        return cfo_fsk.extract(diag.per_symbol_cfo_hz, spec)
    if isinstance(spec, Camo):
        channel_ht = _rx.estimate_channel(diag.corrected, diag.frame_start, ht=True)
        return camo.extract(
            diag.corrected,
            diag.frame_start,
            diag.n_data_symbols,
            channel_ht,
            diag.pilot_phase_rad[1:],
            spec,
        )
    if isinstance(spec, CpReplace):
        return cp_replace.extract(
            diag.corrected,
            diag.frame_start,
            diag.n_data_symbols,
            diag.channel_estimate,
            diag.pilot_phase_rad[1:],
            spec,
        )
    raise TypeError(f"unknown covert spec {spec!r}")


def covert_reference(spec: CovertSpec, embedded_bits: np.ndarray) -> np.ndarray:
    """The slice of an embedded payload the extractor is expected to return.

    Identity for every channel except CFO keying, which drops its edge bits.
    """
    if isinstance(spec, CfoFsk):
        return cfo_fsk.payload_slice(spec, embedded_bits)
    return np.asarray(embedded_bits)
