import numpy as np
import pytest

from src.constellation import draw_indices, draw_uniform, make_qam
from src.exceptions import UnsupportedOrder


class TestMakeQam:

    def test_qpsk_points(self, qpsk):
        assert set(qpsk.points.tolist()) == {1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j}
        assert qpsk.energy == 2.0

    def test_16qam_energy_and_grid(self, qam16):
        assert qam16.size == 16
        assert qam16.energy == 10.0
        assert len(set(qam16.points.tolist())) == 16
        assert set(qam16.points.real.tolist()) == {-3.0, -1.0, 1.0, 3.0}
        assert set(qam16.points.imag.tolist()) == {-3.0, -1.0, 1.0, 3.0}

    def test_64qam_energy(self):
        assert make_qam(64).energy == 42.0

    @pytest.mark.parametrize("order", [4, 16, 64])
    def test_gray_mapping(self, order):
        c = make_qam(order)
        for a in range(order):
            for b in range(a + 1, order):
                if abs(abs(c.points[a] - c.points[b]) - 2.0) < 1e-12:
                    assert bin(int(c.labels[a]) ^ int(c.labels[b])).count("1") == 1

    @pytest.mark.parametrize("order", [0, 2, 8, 12, 32])
    def test_unsupported_orders(self, order):
        with pytest.raises(UnsupportedOrder):
            make_qam(order)

    def test_points_are_read_only(self, qam16):
        with pytest.raises(ValueError):
            qam16.points[0] = 0


class TestDrawing:

    def test_draws_are_reproducible(self, qam16):
        first = draw_indices(qam16, np.random.default_rng(5), 8)
        second = draw_indices(qam16, np.random.default_rng(5), 8)
        np.testing.assert_array_equal(first, second)

    def test_draws_cover_alphabet(self, qam16, rng):
        indices = draw_indices(qam16, rng, 20000)
        counts = np.bincount(indices, minlength=16)
        assert counts.min() > 1000

    def test_symbol_frequencies_within_five_sigma(self, qam16, rng):
        draws = 1_000_000
        symbols = draw_uniform(qam16, rng, draws)
        counts = np.array([np.count_nonzero(symbols == point) for point in qam16.points])
        assert counts.sum() == draws
        sigma = np.sqrt(draws * (1 / 16) * (15 / 16))
        assert np.all(np.abs(counts - draws / 16) <= 5 * sigma)

    def test_uniform_symbols_belong_to_alphabet(self, qpsk, rng):
        symbols = draw_uniform(qpsk, rng, 50)
        assert set(symbols.tolist()) <= set(qpsk.points.tolist())

    def test_rejects_empty_vector(self, qpsk, rng):
        with pytest.raises(ValueError):
            draw_indices(qpsk, rng, 0)
