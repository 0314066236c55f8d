import json
import math

import numpy as np
import pytest
from scipy.special import erfc

from bicep.errors import InvalidInputError
from bicep.randomness import (TESTS, block_frequency, cumulative_sums, longest_run, monobit,
                              randomness_battery, runs)


def bits_of(text):
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


# Worked examples from SP 800-22 rev1a, section 2: the first 100 binary digits of e
# and the 128-bit longest-run example.
E_100 = ("11001001000011111101101010100010001000010110100011000010"
         "00110100110001001100011001100010100010111000")
LONGEST_128 = ("11001100000101010110110001001100111000000000001001001101010100010001"
               "001111010110100000001101011111001100111001101101100010110010")


class TestReferenceValues:
    def test_monobit(self):
        assert monobit(bits_of(E_100)) == pytest.approx(0.109599, abs=1e-6)

    def test_block_frequency(self):
        assert block_frequency(bits_of(E_100), block_size=10) == pytest.approx(0.706438, abs=1e-6)

    def test_runs(self):
        assert runs(bits_of(E_100)) == pytest.approx(0.500798, abs=1e-6)

    def test_cusum(self):
        assert cumulative_sums(bits_of(E_100)) == pytest.approx(0.219194, abs=1e-6)
        assert cumulative_sums(bits_of(E_100), reverse=True) == pytest.approx(0.114866, abs=1e-6)

    def test_longest_run(self):
        # document's value is from a chi-square rounded to 6 places
        assert longest_run(bits_of(LONGEST_128)) == pytest.approx(0.180609, abs=2e-5)


class TestBattery:
    def test_all_ones(self):
        report = randomness_battery(np.ones(128, dtype=np.uint8))
        expected = erfc(math.sqrt(128) / math.sqrt(2))
        assert report.p_values["monobit"] == pytest.approx(expected, rel=1e-9)
        assert report.p_values["monobit"] < 1e-10
        assert not report.overall

    def test_alternating(self):
        report = randomness_battery(np.tile(np.array([0, 1], dtype=np.uint8), 256))
        assert report.p_values["monobit"] == 1.0
        assert report.passed["monobit"]
        assert not report.passed["runs"]

    def test_prng_streams(self):
        passes = sum(randomness_battery(np.random.default_rng(s).integers(0, 2, 4096)).overall
                     for s in range(20))
        assert passes >= 18

    def test_complement_symmetry(self):
        for s in range(10):
            bits = np.random.default_rng(s).integers(0, 2, 500).astype(np.uint8)
            assert monobit(bits) == monobit(1 - bits)

    def test_p_values_in_unit_interval(self):
        rng = np.random.default_rng(0)
        for bits in (rng.integers(0, 2, 300), np.zeros(300), np.ones(300),
                     (rng.random(300) < 0.9).astype(int)):
            report = randomness_battery(bits)
            assert set(report.p_values) == set(TESTS)
            assert all(0.0 <= p <= 1.0 for p in report.p_values.values())

    def test_threshold(self):
        bits = np.random.default_rng(8).integers(0, 2, 4096)
        strict = randomness_battery(bits, threshold=0.999)
        assert not strict.overall
        with pytest.raises(InvalidInputError):
            randomness_battery(bits, threshold=0)

    def test_too_short_names_test(self):
        with pytest.raises(InvalidInputError, match="longest_run.*128"):
            randomness_battery(np.ones(110, dtype=np.uint8))
        with pytest.raises(InvalidInputError, match="100"):
            monobit(np.ones(99, dtype=np.uint8))

    def test_json_full_precision(self):
        report = randomness_battery(np.random.default_rng(4).integers(0, 2, 1200))
        back = json.loads(json.dumps(report.to_dict()))
        assert back["p_values"] == report.p_values
        assert back["overall"] == report.overall
