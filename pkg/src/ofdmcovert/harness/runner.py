"""Monte Carlo trial loop and result aggregation.

Per-trial randomness comes from numpy's seed-sequence spawning: trial i of
an experiment seeded s uses default_rng([s, i]), so any point of a sweep can
be reproduced in isolation and results are independent of execution order.

A frame that is never detected, or whose header fails to parse, counts as
lost: every payload bit (legitimate and covert) is scored as an error, which
matches how a one-way link would experience it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..channel import apply_channel
from ..covert import capacity_bits, covert_reference, extract_covert
from ..errors import FrameNotFoundError, SignalFieldError
from ..phy import bits as bitops
from ..phy import ofdm, rx, tx
from ..phy.frames import Frame
from ..phy.params import ACTIVE_SUBCARRIERS, FCS_LEN_BYTES
from .config import ExperimentConfig, covert_label


@dataclass
class TrialReport:
    detected: bool
    sig_ok: bool
    fcs_ok: bool
    frame_ok: bool
    raw_errors: int
    raw_bits: int
    coded_errors: int
    coded_bits: int
    covert_errors: int
    covert_bits: int
    evm_db: float
    cfo_hz: float


@dataclass
class PointSummary:
    model: str
    snr_db: float | None
    mcs: int
    covert_kind: str
    covert_param: str
    trials: int
    raw_ber: float
    coded_ber: float
    covert_ber: float | None
    fer: float
    ci_low: float
    ci_high: float


CSV_COLUMNS = [
    "model",
    "snr_db",
    "mcs",
    "covert_kind",
    "covert_param",
    "trials",
    "raw_ber",
    "coded_ber",
    "covert_ber",
    "fer",
    "ci_low",
    "ci_high",
]


def wilson_interval(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Score interval for a binomial proportion; well behaved at k=0."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _genie_channel() -> np.ndarray:
    flat = np.full(len(ACTIVE_SUBCARRIERS), tx.TX_SCALE, dtype=np.complex128)
    return ofdm.place(flat, ACTIVE_SUBCARRIERS)


def make_frame(config: ExperimentConfig, rng: np.random.Generator) -> Frame:
    """Random payload with a valid check sequence appended."""
    body = rng.bytes(config.psdu_bytes - FCS_LEN_BYTES)
    return Frame(bitops.append_fcs(body), config.rate_mbps)


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialReport:
    rng = np.random.default_rng([config.seed, trial_index])
    frame = make_frame(config, rng)
    n_sym = frame.n_data_symbols

    covert_bits = None
    reference = np.zeros(0, dtype=np.uint8)
    if config.covert is not None:
        # Covert payload comes from its own stream so the legitimate side of
        # a trial (frame content, fading, noise) is identical with the covert
        # channel on or off; embedding comparisons are then paired.
        covert_rng = np.random.default_rng([config.seed, trial_index, 1])
        covert_bits = covert_rng.integers(0, 2, capacity_bits(config.covert, n_sym), dtype=np.uint8)
        reference = covert_reference(config.covert, covert_bits)

    build = tx.build_frame(frame, config.covert, covert_bits)
    buffer = np.concatenate(
        [
            np.zeros(config.pre_pad, dtype=np.complex128),
            build.iq,
            np.zeros(config.post_pad, dtype=np.complex128),
        ]
    )
    received = apply_channel(buffer, config.channel, rng)

    raw_total = len(build.data_coded_bits)
    coded_total = 8 * len(frame.psdu)
    lost = TrialReport(
        detected=False,
        sig_ok=False,
        fcs_ok=False,
        frame_ok=False,
        raw_errors=raw_total,
        raw_bits=raw_total,
        coded_errors=coded_total,
        coded_bits=coded_total,
        covert_errors=len(reference),
        covert_bits=len(reference),
        evm_db=math.nan,
        cfo_hz=math.nan,
    )

    kwargs = {}
    if config.genie:
        kwargs = {
            "known_channel": _genie_channel(),
            "known_frame_start": config.pre_pad,
            "known_cfo_hz": config.channel.cfo_hz,
            "known_signal": (config.rate_mbps, config.psdu_bytes),
            "pilot_tracking": False,
        }
    try:
        diag = rx.receive(received, **kwargs)
    except FrameNotFoundError:
        return lost
    except SignalFieldError:
        lost.detected = True
        return lost

    if len(diag.raw_bits) == raw_total:
        raw_errors = int(np.sum(diag.raw_bits != build.data_coded_bits))
    else:
        raw_errors = raw_total  # header parsed to the wrong rate or length
    if diag.psdu is not None and len(diag.psdu) == len(frame.psdu):
        coded_errors = int(
            np.sum(bitops.bytes_to_bits(diag.psdu) != bitops.bytes_to_bits(frame.psdu))
        )
    else:
        coded_errors = coded_total

    covert_errors = len(reference)
    if config.covert is not None:
        try:
            result = extract_covert(diag, config.covert).score_against(reference)
            covert_errors = result.n_errors
        except ValueError:
            pass  # unmeasurable frame; scored as fully errored

    return TrialReport(
        detected=True,
        sig_ok=True,
        fcs_ok=diag.fcs_ok,
        frame_ok=diag.fcs_ok,
        raw_errors=raw_errors,
        raw_bits=raw_total,
        coded_errors=coded_errors,
        coded_bits=coded_total,
        covert_errors=covert_errors,
        covert_bits=len(reference),
        evm_db=diag.evm_db,
        cfo_hz=diag.cfo_hz,
    )


def run_point(config: ExperimentConfig) -> PointSummary:
    """Run all trials of one configuration and aggregate."""
    raw_err = raw_tot = coded_err = coded_tot = cov_err = cov_tot = ok = 0
    for i in range(config.n_trials):
        t = run_trial(config, i)
        raw_err += t.raw_errors
        raw_tot += t.raw_bits
        coded_err += t.coded_errors
        coded_tot += t.coded_bits
        cov_err += t.covert_errors
        cov_tot += t.covert_bits
        ok += int(t.frame_ok)
    kind, param = covert_label(config.covert)
    if cov_tot:
        ci = wilson_interval(cov_err, cov_tot)
        covert_ber = cov_err / cov_tot
    else:
        ci = wilson_interval(coded_err, coded_tot)
        covert_ber = None
    return PointSummary(
        model=config.channel.model,
        snr_db=config.channel.snr_db,
        mcs=config.rate_mbps,
        covert_kind=kind,
        covert_param=param,
        trials=config.n_trials,
        raw_ber=raw_err / raw_tot if raw_tot else 0.0,
        coded_ber=coded_err / coded_tot if coded_tot else 0.0,
        covert_ber=covert_ber,
        fer=1.0 - ok / config.n_trials if config.n_trials else 0.0,
        ci_low=ci[0],
        ci_high=ci[1],
    )


def _replace_channel(config: ExperimentConfig, **changes) -> ExperimentConfig:
    data = config.to_dict()
    data["channel"].update(changes)
    return ExperimentConfig.from_dict(data)


def run_sweep(
    base: ExperimentConfig,
    snr_values: Sequence[float | None],
    models: Sequence[str] | None = None,
) -> list[PointSummary]:
    """Grid of (model, SNR) points around a base configuration."""
    rows = []
    for model in models or [base.channel.model]:
        for snr in snr_values:
            rows.append(run_point(_replace_channel(base, model=model, snr_db=snr)))
    return rows


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.10g}"
    return str(value)


def write_csv(path: str | Path, rows: Iterable[PointSummary]) -> None:
    """Stable plain-text results: identical runs produce identical bytes."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_format(getattr(row, col)) for col in CSV_COLUMNS])
