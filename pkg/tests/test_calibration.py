import warnings
from collections import Counter

import numpy as np
import pytest

from bicep.calibration import calibrate, default_m_range
from bicep.errors import InvalidInputError
from bicep.measures import bicep_point
from bicep.seeding import substream
from bicep.sequence import BinarySequence, SparseStatisticsWarning, block_distribution
from bicep.surrogate import RbfParams, rbf_generate

import oracles


def random_seqs(n, L=400, seed=0):
    rng = np.random.default_rng(seed)
    return [BinarySequence(f"S{i}", (rng.random(L) < 0.3 + 0.1 * i).astype(np.uint8))
            for i in range(n)]


def test_matches_naive_recomputation():
    seqs = random_seqs(5)
    curve = calibrate(seqs, (2, 6))
    assert curve.m_values == (2, 3, 4, 5, 6)
    for i, m in enumerate(curve.m_values):
        scores = []
        for s in seqs:
            p = oracles.block_probs(s.bits.tolist(), m)
            E = oracles.entropy(p) / (m * np.log(2))
            C = oracles.complexity(p)
            scores.append(((E - 1) ** 2 + C ** 2) ** 0.5)
        assert curve.stds[i] == pytest.approx(oracles.pstdev(scores), abs=1e-12)
        assert curve.amplitudes[i] == pytest.approx(max(scores) - min(scores), abs=1e-12)
    assert curve.m_star_std == curve.m_values[int(np.argmax(curve.stds))]


def test_identical_sequences_have_no_spread():
    s = random_seqs(1)[0]
    curve = calibrate([s, BinarySequence("copy", s.bits)], (2, 5))
    assert np.all(curve.stds == 0) and np.all(curve.amplitudes == 0)
    assert curve.m_star_std == 2 and curve.m_star_amp == 2


@pytest.mark.filterwarnings("ignore::bicep.sequence.SparseStatisticsWarning")
def test_order_invariance():
    seqs = random_seqs(5, seed=3)
    a = calibrate(seqs, (2, 7))
    b = calibrate(seqs[::-1], (2, 7))
    np.testing.assert_array_equal(a.stds, b.stds)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)


def test_needs_two_sequences():
    with pytest.raises(InvalidInputError):
        calibrate(random_seqs(1))
    with pytest.raises(InvalidInputError):
        calibrate([])


def test_invalid_m_for_a_sequence():
    seqs = random_seqs(2, L=5)
    with pytest.raises(InvalidInputError):
        calibrate(seqs, (2, 6))


def test_default_range_capped_by_shortest():
    seqs = random_seqs(2, L=1188) + [BinarySequence("short", np.ones(300, dtype=np.uint8))]
    assert list(default_m_range(seqs)) == list(range(2, 9))
    assert list(default_m_range(random_seqs(2, L=1188))) == list(range(2, 11))


def test_sparse_block_sizes_reported():
    seqs = random_seqs(3, L=1188)
    with pytest.warns(SparseStatisticsWarning):
        curve = calibrate(seqs)
    assert curve.sparse_m == (9, 10)


def test_rbf_dataset_argmax():
    """Argmax over 10 seeds for an RBF dataset of four flip fractions.

    The std curve is a plateau for m <= 6 (spread ~1e-3) and falls off after,
    so the argmax always lands on the plateau but moves within it.
    """
    std_star, amp_star = Counter(), Counter()
    for s in range(10):
        seqs = [rbf_generate(RbfParams(1200, r, substream(s, "cal", r)), f"r{r}")
                for r in (0.05, 0.15, 0.3, 0.5)]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SparseStatisticsWarning)
            curve = calibrate(seqs)
        assert curve.m_values == tuple(range(2, 11))
        assert 2 <= curve.m_star_std <= 6 and 2 <= curve.m_star_amp <= 6
        assert np.all(np.diff(curve.stds[4:]) < 0)
        std_star[curve.m_star_std] += 1
        amp_star[curve.m_star_amp] += 1
    # modes frozen from this fixed set of seeds
    assert std_star.most_common(1)[0][0] == 5
    assert amp_star.most_common(1)[0][0] == 5


def test_scores_stored_per_sequence():
    seqs = random_seqs(3)
    curve = calibrate(seqs, [3, 5])
    for j, s in enumerate(seqs):
        assert curve.inefficiencies[1, j] == bicep_point(block_distribution(s, 5)).I
