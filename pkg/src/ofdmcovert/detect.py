"""Covert-channel detectors.

Layer-1 detectors inspect one frame's samples or spectra for artifacts of
each embedding; the layer-2 monitor watches delivery statistics over many
frames. Every detector returns a small report with its raw statistic, so
thresholds can be studied separately from the verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import welch

from .covert.cfo_fsk import centered_moving_average
from .covert.stf_psk import measure as _measure_stf_rotation
from .phy import ofdm
from .phy.params import (
    DATA_OFFSET,
    DATA_SUBCARRIERS,
    EXTRA_SUBCARRIERS,
    N_CP,
    N_FFT,
    N_SYMBOL,
    SAMPLE_RATE_HZ,
)


@dataclass
class DetectorConfig:
    """Operating points; the defaults are calibrated on clean 25 dB frames."""

    stf_phase_sigma_rad: float = 0.02      # rotation estimator noise floor
    stf_phase_nsigma: float = 3.0
    cfo_resid_std_hz: float = 1000.0       # CFO-trace residual, clean frame
    cfo_score_threshold: float = 10.0      # variance ratio to call covert
    cfo_threshold_taps: int = 20
    conformance_margin_db: float = -10.0   # edge-bin power vs data bins
    cp_similarity_threshold: float = 0.5
    l2_z_threshold: float = 3.0
    # Spectral mask breakpoints (offset MHz, limit dBr), evaluated only up to
    # the 10 MHz Nyquist edge of the 20 MHz baseband capture.
    mask_points: tuple = ((9.0, 0.0), (11.0, -20.0), (20.0, -28.0), (30.0, -40.0))


@dataclass
class StfPhaseReport:
    rotation_rad: float          # wrapped to (-pi, pi]
    threshold_rad: float
    coherence: float
    flagged: bool


@dataclass
class CfoPatternReport:
    score: float                 # residual variance over the clean reference
    flagged: bool


@dataclass
class ConformanceReport:
    margin_db: float             # edge-bin power relative to data bins
    sig_is_legacy: bool
    flagged: bool                # legacy header AND occupied edge bins


@dataclass
class CpSimilarityReport:
    per_symbol: np.ndarray       # normalized CP-to-tail correlation
    mean_similarity: float
    flagged: bool


@dataclass
class SpectralMaskReport:
    worst_margin_db: float       # min over evaluated bins of (limit - level)
    compliant: bool


@dataclass
class L2Report:
    z_scores: np.ndarray         # adjacent-window two-proportion tests
    score: float                 # max |z|
    alarm: bool


def l1_stf_phase(
    corrected: np.ndarray,
    frame_start: int,
    channel_estimate: np.ndarray,
    config: DetectorConfig | None = None,
    pilot_phase_rad: np.ndarray | None = None,
) -> StfPhaseReport:
    """Flag frames whose short training field is rotated against the channel.

    The channel estimate comes from the long training field, so a rotation
    applied only to the STF shows up as a phase mismatch between the two.
    Passing the pilot phase trace sharpens the measurement (residual CFO is
    fitted out), which the calibrated default threshold assumes.
    """
    cfg = config or DetectorConfig()
    phase, coherence = _measure_stf_rotation(
        corrected, frame_start, channel_estimate, pilot_phase_rad
    )
    wrapped = (phase + np.pi) % (2.0 * np.pi) - np.pi
    threshold = cfg.stf_phase_nsigma * cfg.stf_phase_sigma_rad
    return StfPhaseReport(
        rotation_rad=float(wrapped),
        threshold_rad=threshold,
        coherence=coherence,
        flagged=bool(abs(wrapped) > threshold),
    )


def l1_cfo_pattern(
    per_symbol_cfo_hz: np.ndarray, config: DetectorConfig | None = None
) -> CfoPatternReport:
    """Flag frames whose symbol-rate CFO jitter exceeds oscillator physics.

    A real oscillator drifts slowly; keyed frequency shifts leave the trace
    alternating around its local mean. The statistic is the variance of the
    trace around a moving average, normalized by the clean-receiver value.
    """
    cfg = config or DetectorConfig()
    trace = np.asarray(per_symbol_cfo_hz, dtype=np.float64)
    residual = trace - centered_moving_average(trace, cfg.cfo_threshold_taps)
    score = float(np.var(residual) / cfg.cfo_resid_std_hz**2)
    return CfoPatternReport(score=score, flagged=bool(score > cfg.cfo_score_threshold))


def l1_subcarrier_conformance(
    grid_fft: np.ndarray, sig_is_legacy: bool = True, config: DetectorConfig | None = None
) -> ConformanceReport:
    """Flag legacy-marked frames with energy on the +/-27, +/-28 bins.

    Wide-occupancy PHYs legitimately use those bins, so a frame whose header
    announces a non-legacy format is never flagged; the contradiction between
    claimed format and occupancy is the tell.
    """
    cfg = config or DetectorConfig()
    spectra = np.atleast_2d(np.asarray(grid_fft))
    p_edge = float(np.mean(np.abs(ofdm.take(spectra, EXTRA_SUBCARRIERS)) ** 2))
    p_data = float(np.mean(np.abs(ofdm.take(spectra, DATA_SUBCARRIERS)) ** 2))
    margin_db = 10.0 * math.log10(p_edge / p_data) if p_edge > 0 else -math.inf
    return ConformanceReport(
        margin_db=margin_db,
        sig_is_legacy=sig_is_legacy,
        flagged=bool(sig_is_legacy and margin_db > cfg.conformance_margin_db),
    )


def l1_cp_similarity(
    corrected: np.ndarray,
    frame_start: int,
    n_data_symbols: int,
    config: DetectorConfig | None = None,
) -> CpSimilarityReport:
    """Flag frames whose cyclic prefixes stop matching their symbol tails."""
    cfg = config or DetectorConfig()
    start = frame_start + DATA_OFFSET
    seg = np.asarray(corrected[start : start + n_data_symbols * N_SYMBOL])
    seg = seg.reshape(n_data_symbols, N_SYMBOL)
    cp = seg[:, :N_CP]
    tail = seg[:, N_FFT:]
    num = np.abs(np.sum(cp * np.conj(tail), axis=1))
    den = np.sqrt(np.sum(np.abs(cp) ** 2, axis=1) * np.sum(np.abs(tail) ** 2, axis=1)) + 1e-30
    sim = num / den
    mean_sim = float(np.mean(sim))
    return CpSimilarityReport(
        per_symbol=sim,
        mean_similarity=mean_sim,
        flagged=bool(mean_sim < cfg.cp_similarity_threshold),
    )


def _mask_limit_db(offset_mhz: np.ndarray, points) -> np.ndarray:
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    return np.interp(offset_mhz, xs, ys)


def l1_spectral_mask(iq: np.ndarray, config: DetectorConfig | None = None) -> SpectralMaskReport:
    """Check the transmit PSD against the out-of-band emission mask.

    The capture is 20 MHz wide, so only the mask segment between the 9 MHz
    breakpoint and the Nyquist edge is observable.
    """
    cfg = config or DetectorConfig()
    x = np.asarray(iq, dtype=np.complex128)
    freqs, psd = welch(x, fs=SAMPLE_RATE_HZ, nperseg=256, detrend=False, return_onesided=False)
    psd_db = 10.0 * np.log10(psd + 1e-30)
    offset_mhz = np.abs(freqs) / 1e6
    ref_db = float(np.max(psd_db[offset_mhz <= 8.5]))
    eval_bins = (offset_mhz > 9.0) & (offset_mhz <= 10.0)
    level_dbr = psd_db[eval_bins] - ref_db
    limit_dbr = _mask_limit_db(offset_mhz[eval_bins], cfg.mask_points)
    margins = limit_dbr - level_dbr
    worst = float(np.min(margins))
    return SpectralMaskReport(worst_margin_db=worst, compliant=bool(worst >= 0.0))


def two_proportion_z(k1: int, n1: int, k2: int, n2: int) -> float:
    """z statistic for H0: the two success rates are equal."""
    if n1 == 0 or n2 == 0:
        return 0.0
    p1, p2 = k1 / n1, k2 / n2
    pooled = (k1 + k2) / (n1 + n2)
    var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)
    if var <= 0.0:
        return 0.0
    return (p1 - p2) / math.sqrt(var)


def z_to_p_value(z: float) -> float:
    """Two-sided normal tail probability."""
    return math.erfc(abs(z) / math.sqrt(2.0))


def l2_monitor(
    frame_ok: np.ndarray, window: int = 100, config: DetectorConfig | None = None
) -> L2Report:
    """Alarm on delivery-rate shifts between adjacent observation windows.

    Covert embeddings that cost link margin (prefix replacement in delay
    spread, large frequency keying) depress the frame success rate when they
    switch on; a two-proportion z test between consecutive windows picks up
    the step without a model of the absolute rate.
    """
    cfg = config or DetectorConfig()
    ok = np.asarray(frame_ok).astype(np.int64)
    n_windows = len(ok) // window
    if n_windows < 2:
        raise ValueError(f"need at least two windows of {window} frames, got {len(ok)} frames")
    counts = ok[: n_windows * window].reshape(n_windows, window).sum(axis=1)
    z = np.array(
        [
            two_proportion_z(int(counts[i]), window, int(counts[i + 1]), window)
            for i in range(n_windows - 1)
        ]
    )
    score = float(np.max(np.abs(z)))
    return L2Report(z_scores=z, score=score, alarm=bool(score > cfg.l2_z_threshold))
