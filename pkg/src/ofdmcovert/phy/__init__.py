"""Baseband PHY: 64-point OFDM with 52 active subcarriers at 20 MHz."""

from __future__ import annotations

from . import bits, fec, frames, interleaver, mapping, ofdm, params, preamble
from .rx import (
    ReceiverConfig,
    RxDiagnostics,
    detect_frame,
    estimate_channel,
    per_symbol_cfo,
    receive,
)
from .tx import TX_SCALE, TxBuild, build_frame, transmit

__all__ = [
    "ReceiverConfig",
    "RxDiagnostics",
    "TX_SCALE",
    "TxBuild",
    "bits",
    "build_frame",
    "detect_frame",
    "estimate_channel",
    "fec",
    "frames",
    "interleaver",
    "mapping",
    "ofdm",
    "params",
    "per_symbol_cfo",
    "preamble",
    "receive",
    "transmit",
]
