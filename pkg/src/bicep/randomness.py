"""A fixed battery of NIST SP 800-22 style randomness tests.

Only tests that work on series of roughly a thousand bits are included:
frequency (monobit), frequency within 16-bit blocks, runs, longest run of
ones, and cumulative sums in both directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from scipy.special import erfc, gammaincc
from scipy.stats import norm

from .errors import InvalidInputError
from .sequence import BinarySequence

DEFAULT_THRESHOLD = 0.005
BLOCK_FREQUENCY_SIZE = 16

MIN_LENGTH = {
    "monobit": 100,
    "block_frequency": 100,
    "runs": 100,
    "longest_run": 128,
    "cusum_forward": 100,
    "cusum_backward": 100,
}

# (minimum n, block length M, run-length class edges, class probabilities)
_LONGEST_RUN_TABLES = (
    (750000, 10000, (10, 11, 12, 13, 14, 15, 16),
     (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
    (6272, 128, (4, 5, 6, 7, 8, 9),
     (0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124)),
    (128, 8, (1, 2, 3, 4),
     (0.2148, 0.3672, 0.2305, 0.1875)),
)


def _bits(seq) -> np.ndarray:
    bits = seq.bits if isinstance(seq, BinarySequence) else np.asarray(seq, dtype=np.uint8)
    return bits.astype(np.int64)


def _require(name: str, n: int) -> None:
    if n < MIN_LENGTH[name]:
        raise InvalidInputError(
            f"{name} test needs at least {MIN_LENGTH[name]} bits, got {n}")


def _clip(p: float) -> float:
    return float(min(max(p, 0.0), 1.0))


def monobit(seq) -> float:
    """Frequency test: are ones and zeros equally common overall?"""
    bits = _bits(seq)
    n = bits.size
    _require("monobit", n)
    s_obs = abs(int(np.sum(2 * bits - 1))) / math.sqrt(n)
    return _clip(erfc(s_obs / math.sqrt(2)))


def block_frequency(seq, block_size: int = BLOCK_FREQUENCY_SIZE) -> float:
    bits = _bits(seq)
    n = bits.size
    _require("block_frequency", n)
    n_blocks = n // block_size
    if n_blocks < 1:
        raise InvalidInputError(
            f"block_frequency test needs at least one {block_size}-bit block")
    pi = bits[: n_blocks * block_size].reshape(n_blocks, block_size).mean(axis=1)
    chi_sq = 4.0 * block_size * float(np.sum((pi - 0.5) ** 2))
    return _clip(gammaincc(n_blocks / 2.0, chi_sq / 2.0))


def runs(seq) -> float:
    """Runs test: is the number of maximal constant stretches as expected?

    Returns 0 when the monobit prerequisite already fails.
    """
    bits = _bits(seq)
    n = bits.size
    _require("runs", n)
    pi = bits.mean()
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return 0.0
    v_obs = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1 - pi)
    return _clip(erfc(num / den))


def _longest_ones(block: np.ndarray) -> int:
    padded = np.concatenate(([0], block, [0]))
    edges = np.flatnonzero(np.diff(padded))
    if edges.size == 0:
        return 0
    return int(np.max(edges[1::2] - edges[::2]))


def longest_run(seq) -> float:
    """Longest run of ones within M-bit blocks, M chosen from the length."""
    bits = _bits(seq)
    n = bits.size
    _require("longest_run", n)
    for min_n, M, edges, probs in _LONGEST_RUN_TABLES:
        if n >= min_n:
            break
    n_blocks = n // M
    blocks = bits[: n_blocks * M].reshape(n_blocks, M)
    longest = np.array([_longest_ones(b) for b in blocks])
    classes = np.clip(longest, edges[0], edges[-1]) - edges[0]
    observed = np.bincount(classes, minlength=len(edges))
    expected = n_blocks * np.asarray(probs)
    chi_sq = float(np.sum((observed - expected) ** 2 / expected))
    K = len(edges) - 1
    return _clip(gammaincc(K / 2.0, chi_sq / 2.0))


def cumulative_sums(seq, reverse: bool = False) -> float:
    """Cumulative sums test; ``reverse`` walks the sequence backwards."""
    bits = _bits(seq)
    n = bits.size
    _require("cusum_backward" if reverse else "cusum_forward", n)
    x = 2 * bits - 1
    if reverse:
        x = x[::-1]
    z = int(np.max(np.abs(np.cumsum(x))))
    sqrt_n = math.sqrt(n)

    k = np.arange(int((-n / z + 1) / 4), int((n / z - 1) / 4) + 1)
    first = np.sum(norm.cdf((4 * k + 1) * z / sqrt_n) - norm.cdf((4 * k - 1) * z / sqrt_n))
    k = np.arange(int((-n / z - 3) / 4), int((n / z - 1) / 4) + 1)
    second = np.sum(norm.cdf((4 * k + 3) * z / sqrt_n) - norm.cdf((4 * k + 1) * z / sqrt_n))
    return _clip(1.0 - first + second)


TESTS = {
    "monobit": monobit,
    "block_frequency": block_frequency,
    "runs": runs,
    "longest_run": longest_run,
    "cusum_forward": cumulative_sums,
    "cusum_backward": lambda seq: cumulative_sums(seq, reverse=True),
}


@dataclass(frozen=True)
class RandomnessReport:
    p_values: Dict[str, float]
    threshold: float = DEFAULT_THRESHOLD
    passed: Dict[str, bool] = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "passed",
            {name: p >= self.threshold for name, p in self.p_values.items()})

    @property
    def overall(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "p_values": dict(self.p_values),
            "pass": dict(self.passed),
            "overall": self.overall,
        }


def randomness_battery(seq, threshold: float = DEFAULT_THRESHOLD) -> RandomnessReport:
    """Run every test in :data:`TESTS`; a test passes when ``p >= threshold``."""
    if not 0 < threshold < 1:
        raise InvalidInputError(f"threshold must lie in (0, 1), got {threshold}")
    n = _bits(seq).size
    for name, minimum in MIN_LENGTH.items():
        if n < minimum:
            raise InvalidInputError(
                f"randomness battery: {name} test needs at least {minimum} bits, got {n}")
    return RandomnessReport({name: test(seq) for name, test in TESTS.items()}, threshold)
