"""Training field construction: 160 short + 160 long samples."""

from __future__ import annotations

import numpy as np

from . import ofdm
from .params import HT_LTF_SEQUENCE, LTF_SEQUENCE, N_FFT, STF_SEQUENCE


def stf_time() -> np.ndarray:
    """160 short-training samples: 10 repetitions of the 16-sample pattern.

    The sequence only occupies subcarriers that are multiples of 4, so the
    64-point IFFT is 16-periodic and the field is its periodic extension.
    """
    sym = ofdm.to_time(ofdm.place(STF_SEQUENCE, np.arange(-26, 27)))
    return np.tile(sym[:16], 10)


def ltf_time(ht: bool = False) -> np.ndarray:
    """160 long-training samples: 32-sample guard + two identical symbols."""
    if ht:
        sym = ofdm.to_time(ofdm.place(HT_LTF_SEQUENCE, np.arange(-28, 29)))
    else:
        sym = ofdm.to_time(ofdm.place(LTF_SEQUENCE, np.arange(-26, 27)))
    return np.concatenate([sym[-32:], sym, sym])


def ltf_symbol(ht: bool = False) -> np.ndarray:
    """The 64-sample long-training symbol (cross-correlation template)."""
    return ltf_time(ht)[32 : 32 + N_FFT]


def build_preamble(ht_ltf: bool = False) -> np.ndarray:
    return np.concatenate([stf_time(), ltf_time(ht=ht_ltf)])
