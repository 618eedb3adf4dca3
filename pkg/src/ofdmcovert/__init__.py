"""Software OFDM baseband with physical-layer covert channels.

A 20 MHz 802.11a/g-style modem (64-point FFT, 52 active subcarriers, rates
6 to 54 Mbit/s), four covert channels hiding data in its physical layer
(training-field phase, carrier-offset keying, camouflage subcarriers, and
cyclic-prefix replacement), matching detectors, channel impairment models,
and a Monte Carlo harness to measure all of it.
"""

from __future__ import annotations

from . import channel, covert, detect, harness, iqio, phy
from ._kernels import BACKEND as KERNEL_BACKEND
from .channel import ChannelSpec, apply_awgn, apply_channel, apply_fading, apply_static_cfo
from .covert import (
    Camo,
    CfoFsk,
    CovertResult,
    CovertSpec,
    CpReplace,
    StfPsk,
    capacity_bits,
    covert_reference,
    extract_covert,
)
from .errors import FrameNotFoundError, SignalFieldError
from .harness import ExperimentConfig, run_point, run_sweep, run_trial
from .iqio import IqBuffer, read_iq, write_iq
from .phy import (
    ReceiverConfig,
    RxDiagnostics,
    TxBuild,
    build_frame,
    detect_frame,
    estimate_channel,
    receive,
    transmit,
)
from .phy.frames import Frame

__version__ = "0.1.0"

__all__ = [
    "Camo",
    "CfoFsk",
    "ChannelSpec",
    "CovertResult",
    "CovertSpec",
    "CpReplace",
    "ExperimentConfig",
    "Frame",
    "FrameNotFoundError",
    "IqBuffer",
    "KERNEL_BACKEND",
    "ReceiverConfig",
    "RxDiagnostics",
    "SignalFieldError",
    "StfPsk",
    "TxBuild",
    "apply_awgn",
    "apply_channel",
    "apply_fading",
    "apply_static_cfo",
    "build_frame",
    "capacity_bits",
    "channel",
    "covert",
    "covert_reference",
    "detect",
    "detect_frame",
    "estimate_channel",
    "extract_covert",
    "harness",
    "iqio",
    "phy",
    "read_iq",
    "receive",
    "run_point",
    "run_sweep",
    "run_trial",
    "transmit",
    "write_iq",
]
