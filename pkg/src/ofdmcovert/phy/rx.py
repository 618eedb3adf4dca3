"""Receiver chain: detection, synchronization, equalization, decoding.

Detection uses the 16-sample periodicity of the short training field (a
normalized lag-16 autocorrelation plateau), then refines timing with a
cross-correlation against the known long training symbol. CFO is estimated
coarse from the STF lag-16 phase and fine from the LTF lag-64 phase.

receive() optionally takes genie-aid parameters (known channel, timing,
CFO, pilot tracking off) so simulations can measure the matched-filter
bound without synchronization noise in the measurement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import FrameNotFoundError, SignalFieldError
from . import bits as bitops
from . import fec, frames, interleaver, ofdm, preamble
from .mapping import demap_hard, nearest_points
from .params import (
    ACTIVE_SUBCARRIERS,
    ACTIVE_SUBCARRIERS_HT,
    DATA_OFFSET,
    DATA_SUBCARRIERS,
    HT_LTF_SEQUENCE,
    LTF_SEQUENCE,
    N_CP,
    N_FFT,
    N_SYMBOL,
    PILOT_BASE,
    PILOT_SUBCARRIERS,
    SAMPLE_RATE_HZ,
    SIG_OFFSET,
    Mcs,
    mcs_by_rate,
    pilot_polarity,
)


@dataclass
class ReceiverConfig:
    detect_threshold: float = 0.4    # normalized STF autocorrelation plateau level
    detect_run: int = 48             # samples the plateau must hold
    autocorr_window: int = 48        # lag-16 correlation integration length
    ltf_search_min: int = 64         # LTF template search range, relative to
    ltf_search_max: int = 288        # the detected plateau onset
    cfo_skip: int = 8                # leading CP samples ignored by the CFO trace
                                     # (first half of the prefix, where multipath
                                     # from the previous symbol lands)


@dataclass
class RxDiagnostics:
    """Everything the receiver learned about one frame."""

    frame_start: int
    cfo_hz: float
    channel_estimate: np.ndarray          # 64 centered bins (zeros where unsounded)
    rate_mbps: int
    psdu_len: int
    n_data_symbols: int
    pilot_phase_rad: np.ndarray           # per symbol, index 0 = SIGNAL
    per_symbol_cfo_hz: np.ndarray         # data symbols, from CP correlation
    raw_bits: np.ndarray                  # hard demapped coded stream (deinterleaved)
    decoded_field_bits: np.ndarray        # Viterbi output, still scrambled
    psdu: bytes | None                    # None when descrambling failed
    fcs_ok: bool
    evm_db: float
    sig_fft: np.ndarray                   # raw SIGNAL spectrum, pre-equalization
    grid_fft: np.ndarray                  # raw data spectra (n_sym, 64), pre-EQ
    corrected: np.ndarray                 # CFO-corrected sample buffer

    @property
    def mcs(self) -> Mcs:
        return mcs_by_rate(self.rate_mbps)


def _autocorr_metric(x: np.ndarray, window: int) -> np.ndarray:
    """Normalized lag-16 autocorrelation magnitude per candidate offset."""
    prod = x[16:] * np.conj(x[:-16])
    power = np.abs(x) ** 2

    def _sliding(v: np.ndarray) -> np.ndarray:
        c = np.concatenate((np.zeros(1, dtype=v.dtype), np.cumsum(v)))
        return c[window:] - c[:-window]

    p = _sliding(prod)
    e1 = _sliding(power[:-16])
    e2 = _sliding(power[16:])
    return np.abs(p) / np.sqrt(e1 * e2 + 1e-30)


def detect_frame(iq: np.ndarray, config: ReceiverConfig | None = None) -> tuple[int, float]:
    """Locate a frame and estimate its CFO; raises FrameNotFoundError."""
    cfg = config or ReceiverConfig()
    x = np.asarray(iq, dtype=np.complex128)
    if len(x) < DATA_OFFSET + N_SYMBOL:
        raise FrameNotFoundError("buffer shorter than one minimal frame")

    metric = _autocorr_metric(x, cfg.autocorr_window)
    above = metric > cfg.detect_threshold
    run = np.concatenate([[0], np.cumsum(above)])
    full = np.flatnonzero(run[cfg.detect_run :] - run[: -cfg.detect_run] == cfg.detect_run)
    if len(full) == 0:
        raise FrameNotFoundError("no short-training plateau above threshold")
    onset = int(full[0])

    prod = x[16:] * np.conj(x[:-16])
    z1 = prod[onset : onset + 96].sum()
    coarse = float(np.angle(z1)) * SAMPLE_RATE_HZ / (2.0 * np.pi * 16.0)
    y = x * np.exp(-2j * np.pi * coarse * np.arange(len(x)) / SAMPLE_RATE_HZ)

    template = np.concatenate([preamble.ltf_symbol(), preamble.ltf_symbol()])
    lo = onset + cfg.ltf_search_min
    hi = min(onset + cfg.ltf_search_max, len(y) - len(template))
    if hi <= lo:
        raise FrameNotFoundError("buffer too short for long-training search")
    corr = np.abs(np.correlate(y[lo : hi + len(template)], template, mode="valid"))
    t1 = lo + int(np.argmax(corr))
    frame_start = t1 - 192
    if frame_start < 0:
        raise FrameNotFoundError("long-training peak before buffer start")

    z2 = np.sum(y[t1 + 64 : t1 + 128] * np.conj(y[t1 : t1 + 64]))
    fine = float(np.angle(z2)) * SAMPLE_RATE_HZ / (2.0 * np.pi * 64.0)
    return frame_start, coarse + fine


def estimate_channel(corrected: np.ndarray, frame_start: int, ht: bool = False) -> np.ndarray:
    """Per-subcarrier gain from the two long training symbols.

    Returns 64 centered bins; unsounded bins stay zero. The estimate absorbs
    the transmit scaling, so equalized points land on the unit constellation.
    """
    t1 = frame_start + 192
    f1 = ofdm.to_freq(corrected[t1 : t1 + 64])
    f2 = ofdm.to_freq(corrected[t1 + 64 : t1 + 128])
    if ht:
        subcarriers, ref = ACTIVE_SUBCARRIERS_HT, HT_LTF_SEQUENCE
        ref_active = ref[np.asarray(ACTIVE_SUBCARRIERS_HT) + 28]
    else:
        subcarriers, ref = ACTIVE_SUBCARRIERS, LTF_SEQUENCE
        ref_active = ref[np.asarray(ACTIVE_SUBCARRIERS) + 26]
    avg = (ofdm.take(f1, subcarriers) + ofdm.take(f2, subcarriers)) / 2.0
    return ofdm.place(avg / ref_active, subcarriers)


def per_symbol_cfo(
    corrected: np.ndarray, frame_start: int, n_data_symbols: int, skip: int = 6
) -> np.ndarray:
    """Residual CFO per data symbol from CP-to-tail correlation at lag 64.

    The first `skip` CP samples are ignored; they carry multipath spill from
    the previous symbol (or covert replacement data) rather than a clean
    copy of the symbol tail.
    """
    start = frame_start + DATA_OFFSET
    seg = np.asarray(corrected[start : start + n_data_symbols * N_SYMBOL])
    seg = seg.reshape(n_data_symbols, N_SYMBOL)
    z = np.sum(seg[:, skip + N_FFT : N_SYMBOL] * np.conj(seg[:, skip:N_CP]), axis=1)
    return np.angle(z) * SAMPLE_RATE_HZ / (2.0 * np.pi * N_FFT)


def _safe(h: np.ndarray) -> np.ndarray:
    out = np.array(h, copy=True)
    out[np.abs(out) < 1e-12] = 1e-12
    return out


def _common_phase(spectrum: np.ndarray, channel: np.ndarray, polarity: float) -> float:
    ref = ofdm.take(channel, PILOT_SUBCARRIERS) * (PILOT_BASE * polarity)
    z = np.sum(ofdm.take(spectrum, PILOT_SUBCARRIERS) * np.conj(ref))
    return float(np.angle(z))


def receive(
    iq: np.ndarray,
    config: ReceiverConfig | None = None,
    known_channel: np.ndarray | None = None,
    known_frame_start: int | None = None,
    known_cfo_hz: float | None = None,
    known_signal: tuple[int, int] | None = None,
    pilot_tracking: bool = True,
) -> RxDiagnostics:
    """Demodulate one frame out of a sample buffer.

    Raises FrameNotFoundError when no preamble is found and SignalFieldError
    when the header does not parse; both mean the frame is lost. A bad FCS is
    not an error: the diagnostics report fcs_ok=False and carry whatever bits
    were decoded.

    The known_* parameters are genie aids for simulation: each one replaces
    the corresponding estimation or decoding step with ground truth, so
    payload error rates can be measured without synchronization or header
    noise. known_signal is (rate_mbps, psdu_len).
    """
    cfg = config or ReceiverConfig()
    x = np.asarray(iq, dtype=np.complex128)

    if known_frame_start is not None:
        frame_start = known_frame_start
        cfo = known_cfo_hz if known_cfo_hz is not None else detect_frame(x, cfg)[1]
    else:
        frame_start, cfo = detect_frame(x, cfg)
        if known_cfo_hz is not None:
            cfo = known_cfo_hz

    y = x * np.exp(-2j * np.pi * cfo * np.arange(len(x)) / SAMPLE_RATE_HZ) if cfo else x.copy()
    channel = known_channel if known_channel is not None else estimate_channel(y, frame_start)
    h_data = _safe(ofdm.take(channel, DATA_SUBCARRIERS))

    sig_fft = ofdm.symbol_fft(y, frame_start + SIG_OFFSET)
    polarity = pilot_polarity(1)  # SIGNAL polarity; data polarities come after length is known
    phi0 = _common_phase(sig_fft, channel, polarity[0]) if pilot_tracking else 0.0
    if known_signal is not None:
        rate_mbps, psdu_len = known_signal
    else:
        sig_eq = ofdm.take(sig_fft, DATA_SUBCARRIERS) / h_data * np.exp(-1j * phi0)
        sig_soft = 2.0 * demap_hard(sig_eq, "bpsk").astype(np.float64) - 1.0
        sig_bits = fec.decode(interleaver.deinterleave(sig_soft, 48, 1), mcs_by_rate(6))
        rate_mbps, psdu_len = frames.parse_signal_bits(sig_bits)

    mcs = mcs_by_rate(rate_mbps)
    n_sym = frames.n_data_symbols(psdu_len, mcs)
    end = frame_start + DATA_OFFSET + n_sym * N_SYMBOL
    if end > len(y):
        raise SignalFieldError(f"SIGNAL claims {n_sym} data symbols; buffer ends early")

    seg = y[frame_start + DATA_OFFSET : end].reshape(n_sym, N_SYMBOL)
    grid_fft = np.fft.fftshift(np.fft.fft(seg[:, N_CP:], axis=1), axes=1)

    polarity = pilot_polarity(1 + n_sym)
    phases = np.zeros(1 + n_sym)
    phases[0] = phi0
    if pilot_tracking:
        for i in range(n_sym):
            phases[1 + i] = _common_phase(grid_fft[i], channel, polarity[1 + i])

    eq = ofdm.take(grid_fft, DATA_SUBCARRIERS) / h_data[None, :]
    eq = eq * np.exp(-1j * phases[1:])[:, None]
    flat = eq.reshape(-1)
    hard = demap_hard(flat, mcs.modulation)
    raw_bits = interleaver.deinterleave_stream(hard, mcs.n_cbps, mcs.n_bpsc)
    decoded = fec.decode(2.0 * raw_bits.astype(np.float64) - 1.0, mcs)
    psdu = frames.parse_data_field(decoded, psdu_len)
    fcs_ok = psdu is not None and bitops.check_fcs(psdu)

    ideal = nearest_points(flat, mcs.modulation)
    err = np.mean(np.abs(flat - ideal) ** 2)
    evm_db = float(10.0 * np.log10(err / np.mean(np.abs(ideal) ** 2))) if err > 0 else -np.inf

    return RxDiagnostics(
        frame_start=frame_start,
        cfo_hz=float(cfo),
        channel_estimate=np.asarray(channel),
        rate_mbps=rate_mbps,
        psdu_len=psdu_len,
        n_data_symbols=n_sym,
        pilot_phase_rad=phases,
        per_symbol_cfo_hz=per_symbol_cfo(y, frame_start, n_sym, cfg.cfo_skip),
        raw_bits=raw_bits,
        decoded_field_bits=decoded,
        psdu=psdu,
        fcs_ok=fcs_ok,
        evm_db=evm_db,
        sig_fft=sig_fft,
        grid_fft=grid_fft,
        corrected=y,
    )
