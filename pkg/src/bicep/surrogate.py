"""Shuffle-surrogate significance tests and random-bit-flip sequences."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Tuple

import numpy as np

from .errors import InvalidInputError
from .measures import bicep_point
from .seeding import as_seed_sequence
from .sequence import BinarySequence, BlockDistribution, check_block_size, pattern_codes

ENVELOPES = ("minmax", "percentile")


@dataclass(frozen=True)
class SurrogateVerdict:
    """Observed ``(E, C)`` against the range spanned by shuffled copies.

    ``E_pass`` means the observed entropy lies inside the surrogate range,
    i.e. randomness of the ordering cannot be rejected on entropy grounds.
    A series is *inefficient* only when both tests fail; failing exactly one
    is *indeterminate*.
    """

    symbol: str
    m: int
    N: int
    E_obs: float
    C_obs: float
    E_range: Tuple[float, float]
    C_range: Tuple[float, float]
    E_pass: bool
    C_pass: bool
    inefficient: bool
    E_mean: float
    C_mean: float
    envelope: str = "minmax"

    @property
    def classification(self) -> str:
        if self.inefficient:
            return "inefficient"
        if self.E_pass and self.C_pass:
            return "not-inefficient"
        return "indeterminate"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["E_range"] = list(self.E_range)
        d["C_range"] = list(self.C_range)
        d["classification"] = self.classification
        return d


def _envelope(values: np.ndarray, mode: str, alpha: float):
    if mode == "minmax":
        return float(values.min()), float(values.max())
    lo, hi = np.quantile(values, [alpha / 2, 1 - alpha / 2])
    return float(lo), float(hi)


def surrogate_measures(bits: np.ndarray, m: int, N: int, seed) -> np.ndarray:
    """``(E, C)`` of ``N`` uniform random permutations of ``bits``.

    Surrogate ``k`` draws from its own child of ``seed``, so row ``k`` does
    not depend on how the others are scheduled.
    """
    children = as_seed_sequence(seed).spawn(N)
    out = np.empty((N, 2))
    W = 2 ** m
    for k, child in enumerate(children):
        shuffled = np.random.default_rng(child).permutation(bits)
        counts = np.bincount(pattern_codes(shuffled, m), minlength=W)
        pt = bicep_point(BlockDistribution.from_counts(m, counts))
        out[k] = pt.E, pt.C
    return out


def shuffle_surrogates(seq: BinarySequence, m: int, N: int = 1000, seed=0,
                       envelope: str = "minmax", alpha: float = 0.05) -> SurrogateVerdict:
    """Test whether the order of ``seq`` is compatible with random shuffling.

    Parameters
    ----------
    seq : BinarySequence
        Observed sequence.
    m : int
        Block size.
    N : int
        Number of shuffled surrogates, at least 2.
    seed : int or numpy.random.SeedSequence
        Makes the verdict reproducible.
    envelope : {"minmax", "percentile"}
        ``"minmax"`` accepts an observation anywhere between the smallest and
        largest surrogate value. ``"percentile"`` uses the two-sided central
        ``1 - alpha`` interval instead.
    alpha : float
        Only used by the percentile envelope.

    Returns
    -------
    SurrogateVerdict
    """
    if N < 2:
        raise InvalidInputError(f"need at least 2 surrogates, got {N}")
    if envelope not in ENVELOPES:
        raise InvalidInputError(f"envelope must be one of {ENVELOPES}, got {envelope!r}")
    if envelope == "percentile" and not 0 < alpha < 1:
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    check_block_size(seq.length, m)

    counts = np.bincount(pattern_codes(seq.bits, m), minlength=2 ** m)
    observed = bicep_point(BlockDistribution.from_counts(m, counts), seq.symbol)
    sims = surrogate_measures(seq.bits, m, N, seed)

    E_range = _envelope(sims[:, 0], envelope, alpha)
    C_range = _envelope(sims[:, 1], envelope, alpha)
    E_pass = E_range[0] <= observed.E <= E_range[1]
    C_pass = C_range[0] <= observed.C <= C_range[1]
    return SurrogateVerdict(
        symbol=seq.symbol, m=m, N=N,
        E_obs=observed.E, C_obs=observed.C,
        E_range=E_range, C_range=C_range,
        E_pass=bool(E_pass), C_pass=bool(C_pass),
        inefficient=not E_pass and not C_pass,
        E_mean=float(sims[:, 0].mean()), C_mean=float(sims[:, 1].mean()),
        envelope=envelope,
    )


@dataclass(frozen=True)
class RbfParams:
    """Random-bit-flip recipe: flip ``round(r * L)`` distinct bits of ``1...1``."""

    L: int
    r: float
    seed: object = 0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise InvalidInputError(f"L must be a positive integer, got {self.L!r}")
        if not 0.0 <= self.r <= 0.5:
            raise InvalidInputError(f"flip fraction r must lie in [0, 0.5], got {self.r!r}")

    @property
    def flips(self) -> int:
        return int(round(self.r * self.L))


def rbf_generate(params: RbfParams, symbol: str = "RBF") -> BinarySequence:
    """Random-bit-flip sequence with exactly ``params.flips`` flipped positions."""
    rng = np.random.default_rng(as_seed_sequence(params.seed))
    bits = np.ones(int(params.L), dtype=np.uint8)
    idx = rng.choice(bits.size, size=params.flips, replace=False)
    bits[idx] ^= 1
    return BinarySequence(symbol, bits)
