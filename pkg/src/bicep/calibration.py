"""Block-size selection by the spread of inefficiency scores across a dataset."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import InvalidInputError
from .measures import bicep_point
from .sequence import (BinarySequence, SparseStatisticsWarning, block_distribution,
                       check_block_size, warn_if_sparse)

DEFAULT_M_RANGE = (2, 10)


@dataclass(frozen=True)
class CalibrationCurve:
    """Population standard deviation and range of the scores, per block size.

    ``inefficiencies[i, j]`` is the score of sequence ``j`` at ``m_values[i]``.
    ``sparse_m`` lists block sizes with fewer than four blocks per pattern for
    at least one sequence.
    """

    m_values: Tuple[int, ...]
    stds: np.ndarray
    amplitudes: np.ndarray
    m_star_std: int
    m_star_amp: int
    symbols: Tuple[str, ...] = ()
    inefficiencies: np.ndarray = field(default=None, repr=False)
    sparse_m: Tuple[int, ...] = ()

    def rows(self):
        for m, s, a in zip(self.m_values, self.stds, self.amplitudes):
            yield m, float(s), float(a)


def default_m_range(sequences: Sequence[BinarySequence], m_range=DEFAULT_M_RANGE) -> range:
    """``m_range`` trimmed so that ``2**m <= n_x`` holds for the shortest sequence."""
    lo, hi = m_range
    shortest = min(s.length for s in sequences)
    while hi >= lo and 2 ** hi > shortest - hi + 1:
        hi -= 1
    if hi < lo:
        raise InvalidInputError(
            f"no block size in [{m_range[0]}, {m_range[1]}] fits a sequence of length {shortest}")
    return range(lo, hi + 1)


def calibrate(sequences: Sequence[BinarySequence], m_range=None) -> CalibrationCurve:
    """Score every sequence at every block size and summarize the spread.

    Parameters
    ----------
    sequences : sequence of BinarySequence
        At least two series.
    m_range : iterable of int or (lo, hi) tuple, optional
        Block sizes to sweep; a 2-tuple is read as the inclusive range
        ``lo..hi``. Defaults to 2..10 capped by :func:`default_m_range`.

    Returns
    -------
    CalibrationCurve
        Argmaxes break ties toward the smaller block size.
    """
    sequences = list(sequences)
    if len(sequences) < 2:
        raise InvalidInputError(
            f"calibration needs at least 2 sequences, got {len(sequences)}")
    if m_range is None:
        m_values = tuple(default_m_range(sequences))
    elif isinstance(m_range, tuple) and len(m_range) == 2:
        m_values = tuple(range(int(m_range[0]), int(m_range[1]) + 1))
    else:
        m_values = tuple(int(m) for m in m_range)
    if not m_values:
        raise InvalidInputError("empty block-size range")
    for seq in sequences:
        for m in m_values:
            check_block_size(seq.length, m)

    scores = np.empty((len(m_values), len(sequences)))
    sparse = []
    for i, m in enumerate(m_values):
        flagged = False
        for j, seq in enumerate(sequences):
            dist = block_distribution(seq, m)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SparseStatisticsWarning)
                flagged |= warn_if_sparse(dist, seq.symbol)
            scores[i, j] = bicep_point(dist, seq.symbol).I
        if flagged:
            sparse.append(m)
            warnings.warn(f"sparse block statistics at m={m}", SparseStatisticsWarning,
                          stacklevel=2)

    # Sorted rows make the reduction independent of input order, bit for bit.
    ordered = np.sort(scores, axis=1)
    stds = ordered.std(axis=1)
    amps = ordered[:, -1] - ordered[:, 0]
    return CalibrationCurve(
        m_values=m_values,
        stds=stds,
        amplitudes=amps,
        m_star_std=m_values[int(np.argmax(stds))],
        m_star_amp=m_values[int(np.argmax(amps))],
        symbols=tuple(s.symbol for s in sequences),
        inefficiencies=scores,
        sparse_m=tuple(sparse),
    )
