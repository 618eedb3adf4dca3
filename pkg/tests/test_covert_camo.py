"""Camouflage-subcarrier covert channel: extra QAM bins under an HT footprint."""

import numpy as np
import pytest

from ofdmcovert.channel import apply_awgn, apply_channel, ChannelSpec
from ofdmcovert.covert import Camo, capacity_bits, extract_covert
from ofdmcovert.phy import build_frame, transmit
from ofdmcovert.phy.frames import Frame
from ofdmcovert.phy.params import DATA_OFFSET, EXTRA_SUBCARRIERS, N_SYMBOL
from ofdmcovert.phy.rx import receive


def pad(iq, before=350, after=200, seed=0):
    rng = np.random.default_rng(seed)
    total = before + len(iq) + after
    buf = 1e-4 * (rng.standard_normal(total) + 1j * rng.standard_normal(total))
    buf = buf.astype(np.complex128)
    buf[before : before + len(iq)] += iq
    return buf


def make_marked(seed=0, n=496, rate=24, modulation="16qam"):
    psdu = np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()
    spec = Camo(modulation=modulation)
    n_sym = Frame(psdu, rate).n_data_symbols
    bits = np.random.default_rng(seed + 1000).integers(
        0, 2, capacity_bits(spec, n_sym), dtype=np.uint8
    )
    return psdu, spec, bits, transmit(psdu, rate, covert=spec, covert_bits=bits)


class TestSpec:
    def test_bits_per_symbol(self):
        assert Camo("bpsk").bits_per_symbol == 4
        assert Camo("qpsk").bits_per_symbol == 8
        assert Camo("16qam").bits_per_symbol == 16
        assert Camo("64qam").bits_per_symbol == 24

    def test_capacity(self):
        assert capacity_bits(Camo("64qam"), 50) == 1200


class TestOccupancy:
    def test_56_occupied_subcarriers(self):
        """Data symbols occupy the full wide footprint, SIGNAL stays legacy."""
        _, _, _, iq = make_marked(seed=1)
        sig = iq[DATA_OFFSET - N_SYMBOL + 16 : DATA_OFFSET - N_SYMBOL + 80]
        data0 = iq[DATA_OFFSET + 16 : DATA_OFFSET + 80]
        occupied = lambda win: np.count_nonzero(
            np.abs(np.fft.fftshift(np.fft.fft(win))) > 1e-6 * np.abs(np.fft.fft(win)).max()
        )
        assert occupied(sig) == 52
        assert occupied(data0) == 56

    def test_legacy_frame_occupies_52(self):
        psdu = bytes(200)
        iq = transmit(psdu, 24)
        data0 = iq[DATA_OFFSET + 16 : DATA_OFFSET + 80]
        grid = np.abs(np.fft.fftshift(np.fft.fft(data0)))
        assert np.count_nonzero(grid > 1e-6 * grid.max()) == 52

    def test_extended_training_sounds_extra_bins(self):
        """The marked preamble's LTF covers +/-27 and +/-28."""
        _, _, _, iq = make_marked(seed=2)
        ltf = iq[192:256]
        grid = np.abs(np.fft.fftshift(np.fft.fft(ltf)))
        for k in EXTRA_SUBCARRIERS:
            assert grid[k + 32] > 0.1 * grid.max()

    def test_grid_rows_carry_points(self):
        psdu = np.random.default_rng(3).integers(0, 256, 200, dtype=np.uint8).tobytes()
        spec = Camo("qpsk")
        frame = Frame(psdu, 24)
        bits = np.zeros(capacity_bits(spec, frame.n_data_symbols), dtype=np.uint8)
        build = build_frame(frame, covert=spec, covert_bits=bits)
        extra_cols = np.asarray(EXTRA_SUBCARRIERS) + 32
        assert np.all(build.grid[1:, extra_cols] != 0)
        assert np.all(build.grid[0, extra_cols] == 0)


class TestExtract:
    @pytest.mark.parametrize("modulation", ["bpsk", "qpsk", "16qam", "64qam"])
    def test_clean_loopback(self, modulation):
        _, spec, bits, iq = make_marked(seed=4, modulation=modulation)
        diag = receive(pad(iq))
        result = extract_covert(diag, spec)
        result.score_against(bits)
        assert result.n_errors == 0

    def test_noisy_loopback_tracks_host_quality(self):
        """At 25 dB both the host payload and 16-QAM covert bits survive."""
        psdu, spec, bits, iq = make_marked(seed=5)
        buf = apply_awgn(pad(iq, seed=6), 25.0, seed=7)
        diag = receive(buf)
        assert diag.psdu == psdu
        result = extract_covert(diag, spec)
        result.score_against(bits)
        assert result.n_errors == 0

    def test_survives_fading(self):
        """Model B keeps the covert raw BER near the legacy raw BER."""
        psdu, spec, bits, iq = make_marked(seed=8)
        buf = apply_channel(pad(iq, seed=9), ChannelSpec(model="B", snr_db=25.0), seed=10)
        diag = receive(buf)
        result = extract_covert(diag, spec)
        result.score_against(bits)
        assert result.ber < 0.05

    def test_zero_channel_estimate_rejected(self):
        _, spec, _, iq = make_marked(seed=11)
        diag = receive(pad(iq))
        from ofdmcovert.covert.camo import extract

        bad_h = np.zeros(64, dtype=np.complex128)
        with pytest.raises(ValueError):
            extract(
                diag.corrected,
                diag.frame_start,
                diag.n_data_symbols,
                bad_h,
                diag.pilot_phase_rad[1:],
                spec,
            )


class TestHostImpact:
    def test_legacy_decode_unchanged(self):
        """The same noise realization decodes identically with and without."""
        psdu, spec, bits, marked = make_marked(seed=12)
        plain = transmit(psdu, 24)
        d_plain = receive(apply_awgn(pad(plain, seed=13), 18.0, seed=14))
        d_marked = receive(apply_awgn(pad(marked, seed=13), 18.0, seed=14))
        assert d_plain.psdu == d_marked.psdu == psdu

    def test_signal_header_is_legacy(self):
        """A receiver that only knows the 52-bin grid still parses the header."""
        _, _, _, iq = make_marked(seed=15)
        diag = receive(pad(iq))
        assert diag.rate_mbps == 24
        assert diag.psdu is not None
