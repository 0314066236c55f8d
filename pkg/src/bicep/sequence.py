"""Binarization of price series and overlapping block-pattern statistics."""

from __future__ import annotations

import csv
import datetime as _dt
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataFileError, InvalidInputError

# Pattern codes are stored as signed 32-bit indices, so 2**m must fit.
MAX_BLOCK_SIZE = 30

# Warn when there are fewer than this many blocks per possible pattern.
SPARSE_RATIO = 4.0


class SparseStatisticsWarning(UserWarning):
    """Too few blocks per pattern for the block distribution to be reliable."""


def _frozen(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceSeries:
    """Daily closing prices of one asset."""

    symbol: str
    timestamps: tuple
    closes: np.ndarray = field(repr=False)

    def __post_init__(self):
        closes = _frozen(self.closes, np.float64)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "timestamps", tuple(self.timestamps))
        if closes.ndim != 1 or closes.size < 2:
            raise InvalidInputError(
                f"{self.symbol}: need at least 2 closes, got {closes.size}")
        if len(self.timestamps) != closes.size:
            raise InvalidInputError(
                f"{self.symbol}: {len(self.timestamps)} timestamps for "
                f"{closes.size} closes")
        if not np.all(closes > 0):
            raise InvalidInputError(f"{self.symbol}: closes must be positive")
        ts = self.timestamps
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidInputError(
                f"{self.symbol}: timestamps must be strictly increasing")

    def __len__(self):
        return self.closes.size


@dataclass(frozen=True)
class BinarySequence:
    """An ordered sequence of up (1) / down-or-flat (0) symbols."""

    symbol: str
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size < 1:
            raise InvalidInputError(
                f"{self.symbol}: a binary sequence needs at least one bit")
        if not np.all((bits == 0) | (bits == 1)):
            raise InvalidInputError(f"{self.symbol}: bits must be 0 or 1")
        object.__setattr__(self, "bits", _frozen(bits, np.uint8))

    @property
    def length(self) -> int:
        return int(self.bits.size)

    def __len__(self):
        return self.length

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    @classmethod
    def from_string(cls, symbol: str, text: str) -> "BinarySequence":
        if set(text) - {"0", "1"}:
            raise InvalidInputError(f"{symbol}: bit string may only hold 0/1")
        return cls(symbol, np.frombuffer(text.encode(), dtype=np.uint8) - 48)


@dataclass(frozen=True)
class BlockDistribution:
    """Relative frequencies of the ``W = 2**m`` block patterns.

    ``probs[k]`` is the share of windows whose bits, read most significant
    first, spell the integer ``k``.
    """

    m: int
    n_x: int
    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(self.probs, np.float64))
        if self.probs.size != 2 ** self.m:
            raise InvalidInputError(
                f"expected {2 ** self.m} probabilities, got {self.probs.size}")
        if self.n_x < 1:
            raise InvalidInputError("a distribution needs at least one block")

    @property
    def W(self) -> int:
        return 2 ** self.m

    @property
    def counts(self) -> np.ndarray:
        return np.rint(self.probs * self.n_x).astype(np.int64)

    @property
    def observed_patterns(self) -> int:
        return int(np.count_nonzero(self.probs))

    @classmethod
    def from_counts(cls, m: int, counts) -> "BlockDistribution":
        counts = np.asarray(counts, dtype=np.int64)
        n_x = int(counts.sum())
        if n_x < 1:
            raise InvalidInputError("a distribution needs at least one block")
        return cls(m=m, n_x=n_x, probs=counts / n_x)

    @classmethod
    def uniform(cls, m: int) -> "BlockDistribution":
        """Every pattern observed exactly once (``n_x = W``)."""
        return cls.from_counts(m, np.ones(2 ** m, dtype=np.int64))

    @classmethod
    def delta(cls, m: int, pattern: int = 0) -> "BlockDistribution":
        """All mass on a single pattern."""
        counts = np.zeros(2 ** m, dtype=np.int64)
        counts[pattern] = 1
        return cls.from_counts(m, counts)


def binarize(series: PriceSeries) -> BinarySequence:
    """Map consecutive closes to 1 for a rise and 0 for a flat or falling day.

    The result has one bit fewer than the series has closes.
    """
    closes = np.asarray(series.closes, dtype=np.float64)
    if closes.size < 2:
        raise InvalidInputError(
            f"{series.symbol}: need at least 2 closes to binarize, "
            f"got {closes.size}")
    return BinarySequence(series.symbol, (closes[1:] > closes[:-1]).astype(np.uint8))


def check_block_size(length: int, m: int) -> None:
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool):
        raise InvalidInputError(f"block size must be an integer, got {m!r}")
    if m < 1:
        raise InvalidInputError(f"block size must be >= 1, got {m}")
    if m > MAX_BLOCK_SIZE:
        raise InvalidInputError(
            f"block size {m} exceeds the maximum of {MAX_BLOCK_SIZE} "
            f"(2**m pattern indices would overflow)")
    if m > length:
        raise InvalidInputError(
            f"block size {m} exceeds sequence length {length}")


def pattern_codes(bits: np.ndarray, m: int) -> np.ndarray:
    """Integer code of every overlapping window of width ``m``.

    Works on the last axis, so a 2-D array of sequences is coded row-wise.
    """
    bits = np.asarray(bits)
    n_x = bits.shape[-1] - m + 1
    codes = np.zeros(bits.shape[:-1] + (n_x,), dtype=np.int64)
    for j in range(m):
        codes <<= 1
        codes |= bits[..., j:j + n_x]
    return codes


def block_distribution(seq: BinarySequence, m: int) -> BlockDistribution:
    """Distribution of overlapping length-``m`` blocks in ``seq``.

    Parameters
    ----------
    seq : BinarySequence
        Sequence of length ``L``.
    m : int
        Block size, ``1 <= m <= L``.

    Returns
    -------
    BlockDistribution
        With ``n_x = L - m + 1`` windows sliding by one position.
    """
    bits = seq.bits if isinstance(seq, BinarySequence) else np.asarray(seq)
    check_block_size(bits.size, m)
    counts = np.bincount(pattern_codes(bits, m), minlength=2 ** m)
    return BlockDistribution.from_counts(m, counts)


def distribution_support_ratio(dist: BlockDistribution) -> float:
    """Blocks available per possible pattern, ``n_x / W``."""
    return dist.n_x / dist.W


def warn_if_sparse(dist: BlockDistribution, symbol: str = "") -> bool:
    """Emit :class:`SparseStatisticsWarning` when ``n_x < 4 W``."""
    ratio = distribution_support_ratio(dist)
    if ratio < SPARSE_RATIO:
        label = f"{symbol}: " if symbol else ""
        warnings.warn(
            f"{label}only {dist.n_x} blocks for {dist.W} patterns at m={dist.m} "
            f"(ratio {ratio:.3f} < {SPARSE_RATIO:g})",
            SparseStatisticsWarning, stacklevel=2)
        return True
    return False


def read_price_csv(path, symbol: str | None = None) -> PriceSeries:
    """Load a ``date,close`` CSV; the symbol defaults to the file stem.

    All row problems are collected and raised together as
    :class:`~bicep.errors.DataFileError`.
    """
    path = Path(path)
    symbol = symbol or path.stem
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataFileError(path, [(None, f"cannot read file: {exc}")]) from exc

    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None:
        raise DataFileError(path, [(None, "file is empty")])
    if [h.strip().lower() for h in header] != ["date", "close"]:
        raise DataFileError(
            path, [(1, f"header must be 'date,close', got {','.join(header)!r}")])

    dates, closes, problems = [], [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            problems.append((lineno, f"expected 2 fields, got {len(row)}"))
            continue
        raw_date, raw_close = (cell.strip() for cell in row)
        try:
            day = _dt.date.fromisoformat(raw_date)
        except ValueError:
            problems.append((lineno, f"invalid ISO date {raw_date!r}"))
            continue
        try:
            close = float(raw_close)
        except ValueError:
            problems.append((lineno, f"invalid close {raw_close!r}"))
            continue
        if not np.isfinite(close) or close <= 0:
            problems.append((lineno, f"close must be a positive number, got {raw_close!r}"))
            continue
        if dates and day <= dates[-1][1]:
            problems.append(
                (lineno, f"date {raw_date} not after previous date {dates[-1][1]}"))
            continue
        dates.append((lineno, day))
        closes.append(close)

    if not problems and len(closes) < 2:
        problems.append((None, f"need at least 2 price rows, got {len(closes)}"))
    if problems:
        raise DataFileError(path, problems)
    return PriceSeries(symbol, [d for _, d in dates], closes)
