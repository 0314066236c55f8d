"""Entropy, disequilibrium and statistical complexity of block distributions.

All logarithms are natural. Sums go through :func:`math.fsum` so that the
extreme distributions (uniform, delta) land exactly on the plane's corners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import InvalidDistributionError, InvalidInputError
from .sequence import BlockDistribution

PROB_TOLERANCE = 1e-9


def _as_probs(probs) -> np.ndarray:
    if isinstance(probs, BlockDistribution):
        return probs.probs
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistributionError("probabilities must be a non-empty vector")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidDistributionError("probabilities must be finite and non-negative")
    total = math.fsum(p)
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
    return p


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return 0.0 - math.fsum(p * np.log(p))


def shannon_entropy(probs) -> float:
    """Shannon entropy in nats, with ``0 ln 0 = 0``."""
    return _entropy(_as_probs(probs))


def normalized_entropy(dist: BlockDistribution) -> float:
    """Block entropy divided by its maximum ``ln W = m ln 2``."""
    return _unit(shannon_entropy(dist) / math.log(dist.W))


def d_max(W: int) -> float:
    """Largest Jensen-Shannon divergence from the uniform law on ``W`` atoms.

    Attained by a delta distribution.
    """
    if W < 2:
        raise InvalidInputError(f"need at least 2 patterns, got W={W}")
    return -0.5 * ((W + 1) / W * math.log(W + 1) - 2 * math.log(2 * W) + math.log(W))


def _unit(x: float) -> float:
    # Rounding can push a ratio a few ulps past [0, 1].
    return min(max(x, 0.0), 1.0)


def _divergence(p: np.ndarray) -> float:
    W = p.size
    # The mixture has mass >= 1/(2W) on every pattern, so no term is dropped.
    mixture = (p + 1.0 / W) / 2
    return _entropy(mixture) - (_entropy(p) + math.log(W)) / 2


def jensen_shannon_disequilibrium(dist) -> float:
    """Jensen-Shannon divergence between ``dist`` and the uniform law.

    The uniform reference spans all ``W`` patterns, observed or not.
    """
    p = _as_probs(dist)
    # Clamp rounding noise near P = U, where the exact value is 0.
    return max(_divergence(p), 0.0)


def statistical_complexity(dist: BlockDistribution) -> float:
    """``D(P, U) * E(P) / D_max(W)``; zero for both the ordered and random ends."""
    p = _as_probs(dist)
    W = p.size
    E = _unit(_entropy(p) / math.log(W))
    D = max(_divergence(p), 0.0)
    return _unit(D * E / d_max(W))


def inefficiency(E: float, C: float) -> float:
    """Euclidean distance from ``(E, C)`` to the efficient point ``(1, 0)``."""
    for name, value in (("E", E), ("C", C)):
        if not (0.0 <= value <= 1.0):
            raise InvalidInputError(f"{name} must lie in [0, 1], got {value!r}")
    return math.hypot(C, E - 1.0)


@dataclass(frozen=True)
class BicepPoint:
    """Location of one series on the complexity-entropy plane.

    ``D`` is the disequilibrium normalized by ``D_max``. ``m`` and ``D`` are
    ``None`` for points read from a table of published ``(E, C)`` pairs.
    """

    symbol: str
    m: Optional[int]
    E: float
    C: float
    D: Optional[float]
    I: float

    @classmethod
    def from_coordinates(cls, symbol, E, C, m=None, D=None) -> "BicepPoint":
        return cls(symbol=symbol, m=m, E=float(E), C=float(C),
                   D=None if D is None else float(D), I=inefficiency(E, C))

    def as_record(self) -> dict:
        return {
            "symbol": self.symbol,
            "m": self.m,
            "entropy": self.E,
            "disequilibrium": self.D,
            "complexity": self.C,
            "inefficiency": self.I,
        }


RECORD_FIELDS = ("symbol", "m", "entropy", "disequilibrium", "complexity", "inefficiency")


def bicep_point(dist: BlockDistribution, symbol: str = "") -> BicepPoint:
    p = _as_probs(dist)
    W = p.size
    m = int(round(math.log2(W)))
    E = _unit(_entropy(p) / math.log(W))
    D = max(_divergence(p), 0.0)
    dm = d_max(W)
    C = _unit(D * E / dm)
    return BicepPoint(symbol=symbol, m=m, E=E, C=C, D=_unit(D / dm), I=inefficiency(E, C))


def rank_by_inefficiency(points: Iterable[BicepPoint]) -> list[BicepPoint]:
    """Least inefficient first; equal scores fall back to symbol order."""
    points = list(points)
    if not points:
        raise InvalidInputError("cannot rank an empty list of points")
    return sorted(points, key=lambda pt: (pt.I, pt.symbol))
