"""Segment-wise correlation of up/down sequences and rank agreement of orderings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Mapping, Optional, Tuple

import numpy as np
from scipy.stats import rankdata

from .errors import InvalidInputError
from .sequence import BinarySequence, PriceSeries

DEFAULT_SEGMENT_LENGTH = 336

Triple = Tuple[Optional[float], Optional[float], Optional[float]]


def _clip_unit(r: float) -> float:
    return float(min(max(r, -1.0), 1.0))


def pearson(x, y) -> Optional[float]:
    """Pearson coefficient, or ``None`` when either input is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return None
    return _clip_unit(float(np.dot(dx, dy)) / math.sqrt(sxx * syy))


def kendall_tau_b(x, y) -> Optional[float]:
    """Tie-corrected Kendall coefficient; ``None`` if either input is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise InvalidInputError(f"length mismatch: {x.size} vs {y.size}")
    score = 0
    untied_x = 0
    untied_y = 0
    for i in range(x.size - 1):
        sx = np.sign(x[i + 1:] - x[i])
        sy = np.sign(y[i + 1:] - y[i])
        score += int(np.dot(sx, sy))
        untied_x += int(np.count_nonzero(sx))
        untied_y += int(np.count_nonzero(sy))
    if untied_x == 0 or untied_y == 0:
        return None
    return _clip_unit(score / math.sqrt(untied_x * untied_y))


def spearman(x, y) -> Optional[float]:
    """Pearson coefficient of average ranks."""
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))


@dataclass(frozen=True)
class SegmentedCorrelation:
    """Per-segment (pearson, kendall, spearman); ``None`` marks undefined values.

    ``segment_bounds`` are half-open ``[start, end)`` bit indices.
    """

    pair: Tuple[str, str]
    segment_length: int
    per_segment: List[Triple]
    segment_bounds: List[Tuple[int, int]]


def correlate_segments(a: BinarySequence, b: BinarySequence,
                       segment_length: int = DEFAULT_SEGMENT_LENGTH) -> SegmentedCorrelation:
    """Correlate two aligned sequences over consecutive, non-overlapping segments.

    A trailing partial segment is dropped.
    """
    if a.length != b.length:
        raise InvalidInputError(
            f"sequences differ in length: {a.symbol}={a.length}, {b.symbol}={b.length}")
    if segment_length < 2:
        raise InvalidInputError(f"segment_length must be >= 2, got {segment_length}")
    bounds = [(s, s + segment_length)
              for s in range(0, a.length - segment_length + 1, segment_length)]
    triples = []
    for start, end in bounds:
        x = a.bits[start:end]
        y = b.bits[start:end]
        triples.append((pearson(x, y), kendall_tau_b(x, y), spearman(x, y)))
    return SegmentedCorrelation((a.symbol, b.symbol), segment_length, triples, bounds)


def _rank_map(order) -> dict:
    if isinstance(order, Mapping):
        return dict(order)
    items = list(order)
    if len(set(items)) != len(items):
        raise InvalidInputError("an ordering lists the same item twice")
    return {item: pos for pos, item in enumerate(items, start=1)}


def kendall_rank_correlation(order_a, order_b) -> float:
    """Kendall tau-b between two rankings of the same items.

    Each ranking is either a sequence of items, best first, or a mapping
    from item to rank (ties allowed).
    """
    ra = _rank_map(order_a)
    rb = _rank_map(order_b)
    if set(ra) != set(rb):
        missing = sorted(map(str, set(ra) ^ set(rb)))
        raise InvalidInputError(f"rankings cover different items: {', '.join(missing)}")
    if len(ra) < 2:
        raise InvalidInputError("need at least 2 ranked items")
    keys = list(ra)
    tau = kendall_tau_b([ra[k] for k in keys], [rb[k] for k in keys])
    if tau is None:
        raise InvalidInputError("a ranking with every item tied has no Kendall tau")
    return tau


def align_on_dates(a: PriceSeries, b: PriceSeries) -> Tuple[PriceSeries, PriceSeries, int, int]:
    """Inner-join two price series on date.

    Returns the two trimmed series and how many rows were dropped from each.
    """
    common = sorted(set(a.timestamps) & set(b.timestamps))
    if len(common) < 2:
        raise InvalidInputError(
            f"{a.symbol} and {b.symbol} share {len(common)} dates; need at least 2")
    keep = set(common)

    def trim(s: PriceSeries) -> PriceSeries:
        idx = [i for i, t in enumerate(s.timestamps) if t in keep]
        return PriceSeries(s.symbol, [s.timestamps[i] for i in idx], s.closes[idx])

    return trim(a), trim(b), len(a) - len(common), len(b) - len(common)
