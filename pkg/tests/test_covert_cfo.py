"""Covert FSK keyed on per-symbol carrier frequency offsets."""

import numpy as np
import pytest

from ofdmcovert.channel import apply_awgn, apply_static_cfo
from ofdmcovert.covert import CfoFsk, capacity_bits, covert_reference, extract_covert
from ofdmcovert.covert.cfo_fsk import (
    centered_moving_average,
    embed,
    payload_slice,
    whitening_sequence,
)
from ofdmcovert.phy import transmit
from ofdmcovert.phy.frames import Frame
from ofdmcovert.phy.params import DATA_OFFSET, N_SYMBOL, SAMPLE_RATE_HZ
from ofdmcovert.phy.rx import receive


def pad(iq, before=400, after=200, seed=0):
    rng = np.random.default_rng(seed)
    total = before + len(iq) + after
    buf = 1e-4 * (rng.standard_normal(total) + 1j * rng.standard_normal(total))
    buf = buf.astype(np.complex128)
    buf[before : before + len(iq)] += iq
    return buf


def long_frame(seed=0, n=996, rate=24):
    psdu = np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()
    return psdu, Frame(psdu, rate).n_data_symbols


class TestHelpers:
    def test_moving_average_flat_signal(self):
        x = np.full(50, 3.0)
        np.testing.assert_allclose(centered_moving_average(x, 20), x)

    def test_moving_average_edge_normalization(self):
        """Edge windows average only the samples that exist."""
        x = np.arange(10.0)
        out = centered_moving_average(x, 4)
        # position 0 sees samples 0..1 (kernel extends past the left edge)
        assert out[0] == pytest.approx(np.mean(x[:2]))
        assert out[5] == pytest.approx(np.mean(x[3:7]))

    def test_whitening_is_public_and_fixed(self):
        np.testing.assert_array_equal(whitening_sequence(16), whitening_sequence(16))
        assert whitening_sequence(127).mean() == pytest.approx(64 / 127)

    def test_capacity_requires_min_symbols(self):
        spec = CfoFsk()
        assert capacity_bits(spec, 84) == 84
        with pytest.raises(ValueError):
            capacity_bits(spec, 59)

    def test_payload_slice_trims_edges(self):
        spec = CfoFsk()
        bits = np.arange(80)
        np.testing.assert_array_equal(payload_slice(spec, bits), bits[6:74])


class TestEmbed:
    def test_preamble_and_header_untouched(self):
        psdu, n_sym = long_frame(1)
        iq = transmit(psdu, 24)
        bits = np.random.default_rng(2).integers(0, 2, n_sym, dtype=np.uint8)
        out = embed(iq, bits, CfoFsk(), n_sym)
        np.testing.assert_array_equal(out[:DATA_OFFSET], iq[:DATA_OFFSET])
        assert not np.allclose(out[DATA_OFFSET:], iq[DATA_OFFSET:])

    def test_magnitude_preserved(self):
        """Keying is pure phase modulation; envelope is untouched."""
        psdu, n_sym = long_frame(3)
        iq = transmit(psdu, 24)
        bits = np.random.default_rng(4).integers(0, 2, n_sym, dtype=np.uint8)
        out = embed(iq, bits, CfoFsk(), n_sym)
        np.testing.assert_allclose(np.abs(out), np.abs(iq), rtol=1e-12)

    def test_phase_continuous_at_symbol_boundaries(self):
        """The accumulated phase never jumps between symbols."""
        psdu, n_sym = long_frame(5)
        iq = transmit(psdu, 24)
        bits = np.tile([1, 0], n_sym // 2 + 1)[:n_sym].astype(np.uint8)
        out = embed(iq, bits, CfoFsk(delta_hz=10e3, whiten=False), n_sym)
        rotation = out[DATA_OFFSET:] / iq[DATA_OFFSET:]
        dphi = np.angle(rotation[1:] / rotation[:-1])
        # per-sample step is at most 2 pi delta / fs, no resets anywhere
        assert np.max(np.abs(dphi)) <= 2 * np.pi * 10e3 / SAMPLE_RATE_HZ + 1e-9

    def test_short_frame_rejected(self):
        psdu = bytes(100)
        frame = Frame(psdu, 6)
        iq = transmit(psdu, 6)
        with pytest.raises(ValueError):
            embed(iq, np.zeros(frame.n_data_symbols, dtype=np.uint8), CfoFsk(), frame.n_data_symbols)

    def test_bit_count_must_match(self):
        psdu, n_sym = long_frame(6)
        iq = transmit(psdu, 24)
        with pytest.raises(ValueError):
            embed(iq, np.zeros(n_sym - 1, dtype=np.uint8), CfoFsk(), n_sym)


class TestExtract:
    def run_loopback(self, spec, seed, snr_db=None, static_cfo=0.0):
        psdu, n_sym = long_frame(seed)
        bits = np.random.default_rng(seed + 100).integers(0, 2, n_sym, dtype=np.uint8)
        iq = transmit(psdu, 24, covert=spec, covert_bits=bits)
        buf = pad(iq, seed=seed)
        if static_cfo:
            buf = apply_static_cfo(buf, static_cfo)
        if snr_db is not None:
            buf = apply_awgn(buf, snr_db, seed=seed + 200)
        diag = receive(buf)
        result = extract_covert(diag, spec)
        result.score_against(covert_reference(spec, bits))
        return result, diag

    def test_clean_loopback(self):
        result, _ = self.run_loopback(CfoFsk(delta_hz=10e3), seed=7)
        assert result.n_errors == 0
        assert result.n_compared == 84 - 12

    def test_loopback_survives_static_offset(self):
        """The moving-average threshold absorbs a real oscillator CFO."""
        result, diag = self.run_loopback(CfoFsk(delta_hz=10e3), seed=8, static_cfo=30e3)
        assert result.n_errors == 0
        assert diag.cfo_hz == pytest.approx(30e3, abs=500)

    def test_loopback_at_25db(self):
        """10 kHz steps decode without errors through receiver noise."""
        errors = 0
        for seed in (9, 10, 11):
            result, _ = self.run_loopback(CfoFsk(delta_hz=10e3), seed=seed, snr_db=25.0)
            errors += result.n_errors
        assert errors == 0

    def test_small_delta_fails_at_noise(self):
        """1 kHz steps drown in CP-correlation noise at 25 dB."""
        errors = 0
        compared = 0
        for seed in range(10, 16):
            result, _ = self.run_loopback(CfoFsk(delta_hz=1e3), seed=seed, snr_db=25.0)
            errors += result.n_errors
            compared += result.n_compared
        assert errors / compared > 0.02

    def test_invert_flag_flips_mapping(self):
        psdu, n_sym = long_frame(20)
        bits = np.random.default_rng(21).integers(0, 2, n_sym, dtype=np.uint8)
        iq = transmit(psdu, 24, covert=CfoFsk(delta_hz=10e3, invert=True), covert_bits=bits)
        diag = receive(pad(iq))
        # decoding with the wrong polarity inverts every bit
        wrong = extract_covert(diag, CfoFsk(delta_hz=10e3, invert=False))
        right = extract_covert(diag, CfoFsk(delta_hz=10e3, invert=True))
        np.testing.assert_array_equal(right.bits, covert_reference(CfoFsk(), bits))
        np.testing.assert_array_equal(wrong.bits, 1 - right.bits)

    def test_short_trace_rejected(self):
        from ofdmcovert.covert.cfo_fsk import extract

        with pytest.raises(ValueError):
            extract(np.zeros(59), CfoFsk())


class TestHostImpact:
    def test_legit_decode_unchanged_at_10khz(self):
        """Delta up to 10 kHz leaves the host payload intact at 25 dB."""
        psdu, n_sym = long_frame(30)
        bits = np.random.default_rng(31).integers(0, 2, n_sym, dtype=np.uint8)
        marked = transmit(psdu, 24, covert=CfoFsk(delta_hz=10e3), covert_bits=bits)
        buf = apply_awgn(pad(marked, seed=32), 25.0, seed=33)
        diag = receive(buf)
        assert diag.psdu == psdu
