"""Student qualities, ground truth derivation, and noisy partial rankings.

A grader of quality q orients every pair in her bundle correctly with
probability q and flips it with probability 1-q, independently; if the
resulting pairwise relations are cyclic the whole bundle is redrawn. Quality 1
always reproduces the truth-consistent order on the first attempt; quality 1/2
yields a uniformly random order. The rejection loop is exponentially slow for
large k at low quality, so a per-bundle attempt budget turns that regime into
a clean error instead of a hang.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GroundTruth, PartialRanking

__all__ = [
    "QualityProfile",
    "InfeasibleSamplingError",
    "DEFAULT_MAX_ATTEMPTS",
    "sample_qualities",
    "noisy_partial_ranking",
]

DEFAULT_MAX_ATTEMPTS = 1_000_000

_BATCH_SCHEDULE = (1, 64, 1024, 8192)
_BATCH_MAX = 8192


class InfeasibleSamplingError(RuntimeError):
    """Raised when a bundle exceeds its rejection-sampling attempt budget."""

    def __init__(self, k: int, quality: float, max_attempts: int):
        self.k = k
        self.quality = quality
        self.max_attempts = max_attempts
        super().__init__(
            f"no acyclic pairwise draw for bundle size k={k} at quality "
            f"q={quality:.4f} within {max_attempts} attempts"
        )


@dataclass(frozen=True)
class QualityProfile:
    """Per-student qualities in [1 - noise_level, 1]."""

    qualities: np.ndarray
    noise_level: float

    def __post_init__(self):
        q = np.asarray(self.qualities, dtype=np.float64)
        if not 0.0 <= self.noise_level <= 1.0:
            raise ValueError(f"noise_level must be in [0, 1], got {self.noise_level}")
        lo = 1.0 - self.noise_level
        if q.size == 0 or q.min() < lo - 1e-12 or q.max() > 1.0 + 1e-12:
            raise ValueError(f"qualities must lie in [{lo}, 1]")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "qualities", q)

    @property
    def n(self) -> int:
        return self.qualities.size


def sample_qualities(
    n: int, noise_level: float, rng: np.random.Generator
) -> tuple[QualityProfile, GroundTruth]:
    """Draw i.i.d. qualities from Uniform[1 - noise_level, 1] and rank them.

    The ground truth orders elements by quality descending; exact ties (which
    occur with probability zero for noise_level > 0, and everywhere for
    noise_level = 0) break by ascending element id for reproducibility.
    """
    if not 0.0 <= noise_level <= 1.0:
        raise ValueError(f"noise_level must be in [0, 1], got {noise_level}")
    qualities = 1.0 - noise_level * rng.random(n)
    order = np.lexsort((np.arange(n), -qualities))
    return (
        QualityProfile(qualities=qualities, noise_level=noise_level),
        GroundTruth(order=order),
    )


def _sample_tournament_order(
    true_sorted: np.ndarray, q: float, rng: np.random.Generator, max_attempts: int
) -> tuple[np.ndarray, int]:
    """Rejection-sample an acyclic pairwise orientation; return (order, attempts).

    `true_sorted` lists the bundle's elements best-first by ground truth. Each
    pair keeps its true orientation with probability q. A tournament on k
    items is acyclic iff its win counts are exactly {0, ..., k-1}, in which
    case sorting by wins descending gives the induced total order.
    """
    k = true_sorted.size
    if k == 1:
        return true_sorted.copy(), 1
    ii, jj = np.triu_indices(k, 1)
    m = ii.size
    target = np.arange(k - 1, -1, -1)
    attempts = 0
    schedule = iter(_BATCH_SCHEDULE)
    while attempts < max_attempts:
        batch = min(next(schedule, _BATCH_MAX), max_attempts - attempts)
        keep = rng.random((batch, m)) < q  # True: pair stays truth-consistent
        wins = np.zeros((batch, k), dtype=np.int64)
        for p in range(m):
            wins[:, ii[p]] += keep[:, p]
            wins[:, jj[p]] += ~keep[:, p]
        ok = np.flatnonzero((np.sort(wins, axis=1)[:, ::-1] == target).all(axis=1))
        if ok.size:
            hit = int(ok[0])
            order = true_sorted[np.argsort(-wins[hit], kind="stable")]
            return order, attempts + hit + 1
        attempts += batch
    raise InfeasibleSamplingError(k=k, quality=q, max_attempts=max_attempts)


def noisy_partial_ranking(
    bundle_elements,
    truth: GroundTruth,
    q: float,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    *,
    grader: int,
) -> PartialRanking:
    """Rank one bundle as a quality-q grader would.

    Raises InfeasibleSamplingError when no acyclic orientation is found within
    `max_attempts`.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quality must be in [0, 1], got {q}")
    elements = np.asarray(bundle_elements, dtype=np.int64)
    if elements.ndim != 1 or elements.size == 0:
        raise ValueError("bundle must contain at least one element")
    true_sorted = elements[np.argsort(truth.rank_of[elements], kind="stable")]
    order, _ = _sample_tournament_order(true_sorted, q, rng, max_attempts)
    return PartialRanking(grader=grader, elements=tuple(int(e) for e in order))
