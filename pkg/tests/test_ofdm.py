"""OFDM grid/time conversion and numerology tests."""

import numpy as np
import pytest

from ofdmcovert.phy import params
from ofdmcovert.phy.ofdm import (
    add_cp,
    modulate,
    modulate_symbol,
    place,
    symbol_fft,
    take,
    to_freq,
    to_time,
)


class TestNumerology:
    def test_sample_rate_and_sizes(self):
        assert params.SAMPLE_RATE_HZ == 20e6
        assert params.N_FFT == 64
        assert params.N_CP == 16
        assert params.N_SYMBOL == 80
        assert params.SYMBOL_TIME_S == pytest.approx(4e-6)

    def test_subcarrier_sets(self):
        assert len(params.DATA_SUBCARRIERS) == 48
        assert params.PILOT_SUBCARRIERS.tolist() == [-21, -7, 7, 21]
        assert len(params.ACTIVE_SUBCARRIERS) == 52
        assert params.EXTRA_SUBCARRIERS.tolist() == [-28, -27, 27, 28]
        assert len(params.ACTIVE_SUBCARRIERS_HT) == 56
        # active = data + pilots, disjoint, DC excluded
        merged = sorted(
            params.DATA_SUBCARRIERS.tolist() + params.PILOT_SUBCARRIERS.tolist()
        )
        assert merged == sorted(params.ACTIVE_SUBCARRIERS.tolist())
        assert 0 not in params.ACTIVE_SUBCARRIERS_HT

    def test_active_range(self):
        assert params.ACTIVE_SUBCARRIERS.min() == -26
        assert params.ACTIVE_SUBCARRIERS.max() == 26

    def test_subcarrier_to_bin(self):
        """FFT natural order: negative subcarriers wrap to the upper half."""
        assert params.subcarrier_to_bin(0) == 0
        assert params.subcarrier_to_bin(26) == 26
        assert params.subcarrier_to_bin(-26) == 38
        assert params.subcarrier_to_bin(-32) == 32


class TestConversion:
    def test_roundtrip(self):
        rng = np.random.default_rng(0)
        grid = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        np.testing.assert_allclose(to_freq(to_time(grid)), grid, atol=1e-12)

    def test_single_tone_frequency(self):
        """Subcarrier k produces exp(2j pi k n / 64) in time."""
        k = 7
        grid = place(np.array([1.0 + 0j]), np.array([k]))
        time = to_time(grid)
        n = np.arange(64)
        np.testing.assert_allclose(time, np.exp(2j * np.pi * k * n / 64) / 64, atol=1e-12)

    def test_parseval_scaling(self):
        """ifft normalization: time power = grid power / N."""
        rng = np.random.default_rng(1)
        grid = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        time = to_time(grid)
        assert np.sum(np.abs(time) ** 2) == pytest.approx(np.sum(np.abs(grid) ** 2) / 64)

    def test_place_take_inverse(self):
        rng = np.random.default_rng(2)
        values = rng.standard_normal(52) + 1j * rng.standard_normal(52)
        grid = place(values, params.ACTIVE_SUBCARRIERS)
        np.testing.assert_array_equal(take(grid, params.ACTIVE_SUBCARRIERS), values)
        # unplaced bins stay empty
        assert grid[params.subcarrier_to_bin(0)] == 0
        assert grid[0] == 0

    def test_take_broadcasts_over_rows(self):
        grid = np.arange(128, dtype=np.complex128).reshape(2, 64)
        out = take(grid, np.array([-26, 26]))
        assert out.shape == (2, 2)
        assert out[1, 0] == 64 + (-26 + 32)


class TestCyclicPrefix:
    def test_prefix_is_tail_copy(self):
        rng = np.random.default_rng(3)
        sym = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        ext = add_cp(sym)
        assert len(ext) == 80
        np.testing.assert_array_equal(ext[:16], sym[-16:])
        np.testing.assert_array_equal(ext[16:], sym)

    def test_modulate_symbol_window_recovers_grid(self):
        rng = np.random.default_rng(4)
        grid = place(
            rng.standard_normal(52) + 1j * rng.standard_normal(52),
            params.ACTIVE_SUBCARRIERS,
        )
        samples = modulate_symbol(grid)
        np.testing.assert_allclose(symbol_fft(samples, 0), grid, atol=1e-12)

    def test_multi_symbol_modulate(self):
        """Batch modulation equals per-symbol modulation, symbol by symbol."""
        rng = np.random.default_rng(5)
        grid = rng.standard_normal((3, 64)) + 1j * rng.standard_normal((3, 64))
        stream = modulate(grid)
        assert len(stream) == 3 * 80
        for s in range(3):
            np.testing.assert_allclose(
                stream[80 * s : 80 * (s + 1)], modulate_symbol(grid[s]), atol=1e-14
            )

    def test_circular_shift_tolerance(self):
        """Starting the FFT window inside the CP only rotates phases."""
        rng = np.random.default_rng(6)
        grid = place(
            rng.standard_normal(52) + 1j * rng.standard_normal(52),
            params.ACTIVE_SUBCARRIERS,
        )
        samples = modulate_symbol(grid)
        early = to_freq(samples[12:76])  # 4 samples into the prefix
        k = np.arange(-32, 32)
        expected = grid * np.exp(-2j * np.pi * k * 4 / 64)
        np.testing.assert_allclose(early, expected, atol=1e-12)
