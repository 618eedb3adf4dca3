"""Layer-1 and layer-2 covert-channel detector tests."""

import numpy as np
import pytest

from ofdmcovert.channel import apply_awgn
from ofdmcovert.covert import Camo, CfoFsk, CpReplace, StfPsk, capacity_bits
from ofdmcovert.detect import (
    DetectorConfig,
    l1_cfo_pattern,
    l1_cp_similarity,
    l1_spectral_mask,
    l1_stf_phase,
    l1_subcarrier_conformance,
    l2_monitor,
    two_proportion_z,
    z_to_p_value,
)
from ofdmcovert.phy import transmit
from ofdmcovert.phy.frames import Frame
from ofdmcovert.phy.rx import receive


def pad(iq, before=380, after=220, seed=0):
    rng = np.random.default_rng(seed)
    total = before + len(iq) + after
    buf = 1e-4 * (rng.standard_normal(total) + 1j * rng.standard_normal(total))
    buf = buf.astype(np.complex128)
    buf[before : before + len(iq)] += iq
    return buf


def demod(iq, snr_db=25.0, seed=1):
    return receive(apply_awgn(pad(iq, seed=seed), snr_db, seed=seed + 7))


def marked_frame(covert, seed=0, n=996, rate=24):
    psdu = np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()
    n_sym = Frame(psdu, rate).n_data_symbols
    bits = np.random.default_rng(seed + 99).integers(
        0, 2, capacity_bits(covert, n_sym), dtype=np.uint8
    )
    return transmit(psdu, rate, covert=covert, covert_bits=bits)


def plain_frame(seed=0, n=996, rate=24):
    psdu = np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()
    return transmit(psdu, rate)


class TestStfPhase:
    def test_clean_frame_not_flagged(self):
        diag = demod(plain_frame(seed=1))
        rep = l1_stf_phase(
            diag.corrected, diag.frame_start, diag.channel_estimate,
            pilot_phase_rad=diag.pilot_phase_rad,
        )
        assert not rep.flagged
        assert abs(rep.rotation_rad) < rep.threshold_rad
        assert rep.coherence > 0.95

    def test_default_threshold(self):
        assert DetectorConfig().stf_phase_nsigma * DetectorConfig().stf_phase_sigma_rad == pytest.approx(0.06)

    def test_minimum_rotation_flagged(self):
        """Even the smallest nonzero 64-PSK cell (2 pi / 64) trips the test."""
        psdu = np.random.default_rng(2).integers(0, 256, 996, dtype=np.uint8).tobytes()
        from ofdmcovert.covert.stf_psk import _index_to_bits, embed

        iq = transmit(psdu, 24)
        marked = embed(iq, _index_to_bits(1, 64), StfPsk(64))
        diag = demod(marked, seed=3)
        rep = l1_stf_phase(
            diag.corrected, diag.frame_start, diag.channel_estimate,
            pilot_phase_rad=diag.pilot_phase_rad,
        )
        assert rep.flagged
        assert abs(rep.rotation_rad) == pytest.approx(2 * np.pi / 64, abs=0.03)

    def test_zero_index_passes(self):
        """Index 0 applies no rotation; the detector cannot see it."""
        from ofdmcovert.covert.stf_psk import _index_to_bits, embed

        iq = embed(plain_frame(seed=4), _index_to_bits(0, 64), StfPsk(64))
        diag = demod(iq, seed=5)
        rep = l1_stf_phase(
            diag.corrected, diag.frame_start, diag.channel_estimate,
            pilot_phase_rad=diag.pilot_phase_rad,
        )
        assert not rep.flagged


class TestCfoPattern:
    def test_clean_frame_low_score(self):
        diag = demod(plain_frame(seed=6))
        rep = l1_cfo_pattern(diag.per_symbol_cfo_hz)
        assert not rep.flagged
        assert rep.score < 5.0

    def test_keyed_frame_flagged(self):
        diag = demod(marked_frame(CfoFsk(delta_hz=5e3), seed=7))
        rep = l1_cfo_pattern(diag.per_symbol_cfo_hz)
        assert rep.flagged
        assert rep.score > 10.0

    def test_scales_with_delta(self):
        d_small = demod(marked_frame(CfoFsk(delta_hz=5e3), seed=8), seed=9)
        d_large = demod(marked_frame(CfoFsk(delta_hz=20e3), seed=8), seed=9)
        assert l1_cfo_pattern(d_large.per_symbol_cfo_hz).score > l1_cfo_pattern(
            d_small.per_symbol_cfo_hz
        ).score


class TestConformance:
    def test_legacy_frame_passes(self):
        diag = demod(plain_frame(seed=10))
        rep = l1_subcarrier_conformance(diag.grid_fft)
        assert not rep.flagged
        assert rep.margin_db < -20

    def test_camouflage_frame_flagged(self):
        diag = demod(marked_frame(Camo("16qam"), seed=11, n=496))
        rep = l1_subcarrier_conformance(diag.grid_fft)
        assert rep.flagged
        assert rep.margin_db > -3

    def test_declared_wide_format_not_flagged(self):
        """The contradiction needs a legacy header; an honest wide frame passes."""
        diag = demod(marked_frame(Camo("16qam"), seed=12, n=496))
        rep = l1_subcarrier_conformance(diag.grid_fft, sig_is_legacy=False)
        assert not rep.flagged


class TestCpSimilarity:
    def test_clean_prefixes_similar(self):
        diag = demod(plain_frame(seed=13))
        rep = l1_cp_similarity(diag.corrected, diag.frame_start, diag.n_data_symbols)
        assert not rep.flagged
        assert rep.mean_similarity > 0.95
        assert len(rep.per_symbol) == diag.n_data_symbols

    def test_full_replacement_flagged(self):
        diag = demod(marked_frame(CpReplace("full", "qpsk", 16), seed=14))
        rep = l1_cp_similarity(diag.corrected, diag.frame_start, diag.n_data_symbols)
        assert rep.flagged
        assert rep.mean_similarity < 0.4

    def test_ordering_clean_half_full(self):
        d_clean = demod(plain_frame(seed=15), seed=16)
        d_half = demod(marked_frame(CpReplace("half", "qpsk", 8), seed=15), seed=16)
        d_full = demod(marked_frame(CpReplace("full", "qpsk", 8), seed=15), seed=16)
        s = lambda d: l1_cp_similarity(d.corrected, d.frame_start, d.n_data_symbols).mean_similarity
        assert s(d_full) < s(d_half) < s(d_clean)


class TestSpectralMask:
    def test_legacy_frame_compliant(self):
        rep = l1_spectral_mask(plain_frame(seed=17))
        assert rep.compliant
        assert rep.worst_margin_db > 5

    def test_replacement_shrinks_margin_but_complies(self):
        legacy = l1_spectral_mask(plain_frame(seed=18))
        replaced = l1_spectral_mask(marked_frame(CpReplace("full", "qpsk", 16), seed=18))
        assert replaced.compliant
        assert replaced.worst_margin_db < legacy.worst_margin_db

    def test_flat_noise_violates(self):
        rng = np.random.default_rng(19)
        noise = rng.standard_normal(20000) + 1j * rng.standard_normal(20000)
        rep = l1_spectral_mask(noise.astype(np.complex128))
        assert not rep.compliant


class TestStatistics:
    def test_two_proportion_z_frozen(self):
        """10/100 vs 20/100: z = -0.1 / sqrt(0.15 * 0.85 * 0.02)."""
        assert two_proportion_z(10, 100, 20, 100) == pytest.approx(-1.9803, abs=1e-4)

    def test_z_symmetry(self):
        assert two_proportion_z(20, 100, 10, 100) == pytest.approx(1.9803, abs=1e-4)

    def test_degenerate_cases(self):
        assert two_proportion_z(0, 0, 5, 10) == 0.0
        assert two_proportion_z(0, 50, 0, 50) == 0.0
        assert two_proportion_z(50, 50, 50, 50) == 0.0

    def test_p_value_reference(self):
        assert z_to_p_value(1.96) == pytest.approx(0.05, abs=2e-3)
        assert z_to_p_value(0.0) == pytest.approx(1.0)
        assert z_to_p_value(-1.96) == z_to_p_value(1.96)


class TestL2Monitor:
    def test_steady_rate_no_alarm(self):
        ok = np.ones(500, dtype=bool)
        rep = l2_monitor(ok)
        assert not rep.alarm
        assert rep.score == 0.0
        assert len(rep.z_scores) == 4

    def test_step_change_alarms(self):
        """Toggling a lossy embedding on shows up as a delivery-rate step."""
        rng = np.random.default_rng(20)
        ok = np.concatenate([
            rng.random(200) < 0.95,
            rng.random(200) < 0.55,
        ])
        rep = l2_monitor(ok)
        assert rep.alarm
        assert rep.score > 3.0

    def test_noise_wiggle_stays_quiet(self):
        rng = np.random.default_rng(21)
        ok = rng.random(1000) < 0.9
        rep = l2_monitor(ok)
        assert not rep.alarm

    def test_too_few_frames_rejected(self):
        with pytest.raises(ValueError):
            l2_monitor(np.ones(150, dtype=bool), window=100)
