import datetime as dt
import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicep.errors import DataFileError, InvalidInputError
from bicep.sequence import (MAX_BLOCK_SIZE, BinarySequence, BlockDistribution, PriceSeries,
                            SparseStatisticsWarning, binarize, block_distribution,
                            distribution_support_ratio, read_price_csv, warn_if_sparse)

from oracles import block_probs


def prices(closes, symbol="X"):
    start = dt.date(2021, 8, 1)
    days = [start + dt.timedelta(days=i) for i in range(len(closes))]
    return PriceSeries(symbol, days, closes)


def seq(bits, symbol="X"):
    return BinarySequence(symbol, np.array(bits, dtype=np.uint8))


class TestBinarize:
    def test_mixed_moves(self):
        out = binarize(prices([1.0, 2.0, 2.0, 1.5, 3.0]))
        assert out.bits.tolist() == [1, 0, 0, 1]

    def test_constant_pair_is_zero(self):
        assert binarize(prices([5.0, 5.0])).bits.tolist() == [0]

    def test_monotone_increasing(self):
        out = binarize(prices(np.arange(1.0, 11.0)))
        assert out.bits.tolist() == [1] * 9

    def test_reversed_monotone_flips_every_bit(self):
        up = binarize(prices(np.linspace(1, 7, 25)))
        down = binarize(prices(np.linspace(7, 1, 25)))
        assert np.array_equal(up.bits, 1 - down.bits)

    def test_too_short_names_symbol(self):
        with pytest.raises(InvalidInputError, match="ETH"):
            prices([1.0], symbol="ETH")

    @given(st.lists(st.floats(0.01, 1e6), min_size=2, max_size=60))
    def test_length_is_one_less(self, closes):
        assert binarize(prices(closes)).length == len(closes) - 1


class TestBlockDistribution:
    def test_worked_example(self):
        d = block_distribution(seq([1, 0, 1, 1, 0, 1, 0, 0]), 3)
        assert d.n_x == 6 and d.W == 8
        expected = np.zeros(8)
        expected[0b101] = 2 / 6
        for code in (0b011, 0b110, 0b010, 0b100):
            expected[code] = 1 / 6
        np.testing.assert_array_equal(d.probs, expected)
        assert d.observed_patterns == 5

    def test_all_ones_is_delta_at_111(self):
        d = block_distribution(seq([1] * 8), 3)
        assert d.probs[0b111] == 1.0
        assert d.observed_patterns == 1

    def test_single_window(self):
        d = block_distribution(seq([0, 1]), 2)
        assert d.n_x == 1
        assert d.probs.tolist() == [0, 1, 0, 0]

    def test_first_bit_is_most_significant(self):
        d = block_distribution(seq([1, 0, 0]), 3)
        assert d.probs[4] == 1.0

    def test_m_larger_than_length(self):
        with pytest.raises(InvalidInputError):
            block_distribution(seq([0, 1, 1]), 4)

    @pytest.mark.parametrize("m", [0, -1, MAX_BLOCK_SIZE + 1, 64])
    def test_bad_block_size(self, m):
        with pytest.raises(InvalidInputError):
            block_distribution(seq([0, 1] * 40), m)

    def test_exhaustive_against_rescan(self):
        # every sequence with L <= 10 and every m <= 5
        for L in range(1, 11):
            for bits in itertools.product((0, 1), repeat=L):
                for m in range(1, min(L, 5) + 1):
                    d = block_distribution(seq(bits), m)
                    assert d.probs.tolist() == block_probs(bits, m)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=20), st.integers(1, 5))
    def test_random_against_rescan(self, bits, m):
        if m > len(bits):
            return
        d = block_distribution(seq(bits), m)
        assert d.probs.tolist() == block_probs(bits, m)

    @settings(max_examples=50)
    @given(st.lists(st.integers(0, 1), min_size=10, max_size=300), st.integers(1, 8),
           st.randoms(use_true_random=False))
    def test_normalization_and_counts(self, bits, m, rnd):
        if m > len(bits):
            return
        d = block_distribution(seq(bits), m)
        assert abs(d.probs.sum() - 1) <= 1e-12
        assert d.n_x == len(bits) - m + 1
        assert d.counts.sum() == d.n_x
        np.testing.assert_allclose(d.probs * d.n_x, d.counts, atol=1e-9)
        shuffled = list(bits)
        rnd.shuffle(shuffled)
        d2 = block_distribution(seq(shuffled), m)
        assert d2.n_x == d.n_x
        assert abs(d2.probs.sum() - 1) <= 1e-12

    def test_values_are_read_only(self):
        d = block_distribution(seq([0, 1, 1, 0]), 2)
        with pytest.raises(ValueError):
            d.probs[0] = 1.0


class TestSupportRatio:
    def test_operating_point(self):
        rng = np.random.default_rng(0)
        d = block_distribution(seq(rng.integers(0, 2, 1188)), 8)
        assert d.n_x == 1181
        assert distribution_support_ratio(d) == pytest.approx(1181 / 256)
        assert distribution_support_ratio(d) == pytest.approx(4.613, abs=5e-4)

    def test_small(self):
        d = block_distribution(seq([0, 1, 1, 0, 1, 0, 0, 1, 1]), 3)
        assert distribution_support_ratio(d) == 0.875

    @pytest.mark.parametrize("m", [1, 3, 6])
    def test_single_block(self, m):
        d = block_distribution(seq([1] * m), m)
        assert distribution_support_ratio(d) == 1 / 2 ** m

    def test_sparse_warning_threshold(self):
        dense = BlockDistribution.from_counts(2, [4, 4, 4, 4])
        sparse = BlockDistribution.from_counts(2, [4, 4, 4, 3])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert warn_if_sparse(dense) is False
        with pytest.warns(SparseStatisticsWarning):
            assert warn_if_sparse(sparse) is True


class TestReadPriceCsv:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "BTC.csv"
        p.write_text("date,close\n2021-08-01,1.5\n2021-08-02,2\n2021-08-04,1.9\n")
        series = read_price_csv(p)
        assert series.symbol == "BTC"
        assert series.closes.tolist() == [1.5, 2.0, 1.9]
        assert series.timestamps[-1] == dt.date(2021, 8, 4)
        assert binarize(series).bits.tolist() == [1, 0]

    def test_collects_every_bad_row(self, tmp_path):
        p = tmp_path / "BAD.csv"
        p.write_text("date,close\n2021-08-01,1\n2021-13-01,2\n2021-08-03,-4\n"
                     "2021-08-02,3\n2021-08-05,\"1,000\"\n")
        with pytest.raises(DataFileError) as info:
            read_price_csv(p)
        rows = [row for row, _ in info.value.problems]
        assert rows == [3, 4, 6]
        assert "row 3" in str(info.value)

    def test_out_of_order_dates(self, tmp_path):
        p = tmp_path / "X.csv"
        p.write_text("date,close\n2021-08-02,1\n2021-08-01,2\n")
        with pytest.raises(DataFileError, match="not after"):
            read_price_csv(p)

    def test_bad_header(self, tmp_path):
        p = tmp_path / "X.csv"
        p.write_text("day,price\n2021-08-01,1\n")
        with pytest.raises(DataFileError, match="header"):
            read_price_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFileError):
            read_price_csv(tmp_path / "nope.csv")
