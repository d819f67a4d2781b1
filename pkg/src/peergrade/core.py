"""Domain types shared by all modules, plus the pairwise-recovery metric.

Element ids are dense integers 0..n-1 and student i submits element i, so the
"nobody grades her own paper" constraint is simply `grader not in elements`.
Rank 1 is best. All types are immutable after construction and safe to share
across parallel trial workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GroundTruth",
    "Ranking",
    "PartialRanking",
    "Profile",
    "count_inversions",
    "recovered_fraction",
]


def _as_permutation(order, what: str) -> np.ndarray:
    arr = np.asarray(order, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{what} must be a non-empty 1-d sequence")
    n = arr.size
    seen = np.zeros(n, dtype=bool)
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError(f"{what} must contain exactly the ids 0..{n - 1}")
    seen[arr] = True
    if not seen.all():
        raise ValueError(f"{what} must be a permutation of 0..{n - 1}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GroundTruth:
    """Strict total order of the n elements; position 0 of `order` is best."""

    order: np.ndarray

    def __post_init__(self):
        order = _as_permutation(self.order, "ground truth order")
        object.__setattr__(self, "order", order)
        rank_of = np.empty(order.size, dtype=np.int64)
        rank_of[order] = np.arange(1, order.size + 1)
        rank_of.setflags(write=False)
        object.__setattr__(self, "rank_of", rank_of)

    @property
    def n(self) -> int:
        return self.order.size

    def rank(self, element: int) -> int:
        """1-based rank of an element (1 = best)."""
        return int(self.rank_of[element])


@dataclass(frozen=True)
class Ranking:
    """A complete strict ranking produced by an aggregation rule."""

    order: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "order", _as_permutation(self.order, "ranking"))

    @property
    def n(self) -> int:
        return self.order.size

    def reversed(self) -> "Ranking":
        return Ranking(self.order[::-1].copy())


@dataclass(frozen=True)
class PartialRanking:
    """One grader's strict order over the k elements of her bundle (best first)."""

    grader: int
    elements: tuple[int, ...]

    def __post_init__(self):
        elements = tuple(int(e) for e in self.elements)
        object.__setattr__(self, "elements", elements)
        if len(elements) == 0:
            raise ValueError("a partial ranking must contain at least one element")
        if len(set(elements)) != len(elements):
            raise ValueError("partial ranking contains duplicate elements")
        if self.grader in elements:
            raise ValueError(
                f"grader {self.grader} would grade her own element"
            )

    @property
    def k(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Profile:
    """The collection of all n partial rankings, one per bundle."""

    rankings: tuple[PartialRanking, ...]

    def __post_init__(self):
        rankings = tuple(self.rankings)
        object.__setattr__(self, "rankings", rankings)
        if not rankings:
            raise ValueError("profile must contain at least one ranking")
        k = rankings[0].k
        if any(r.k != k for r in rankings):
            raise ValueError("all partial rankings must have the same size")
        n = len(rankings)
        counts = np.zeros(n, dtype=np.int64)
        for r in rankings:
            for e in r.elements:
                if not 0 <= e < n:
                    raise ValueError(f"element id {e} outside 0..{n - 1}")
                counts[e] += 1
        if not (counts == k).all():
            bad = int(np.flatnonzero(counts != k)[0])
            raise ValueError(
                f"element {bad} appears in {counts[bad]} rankings, expected {k}"
            )

    @property
    def n(self) -> int:
        return len(self.rankings)

    @property
    def k(self) -> int:
        return self.rankings[0].k

    def as_array(self) -> np.ndarray:
        """(n, k) int array; row b holds bundle b's elements best-first."""
        return np.array([r.elements for r in self.rankings], dtype=np.int64)


def count_inversions(seq) -> int:
    """Number of out-of-order pairs in `seq`, via a Fenwick tree (O(n log n))."""
    arr = np.asarray(seq, dtype=np.int64)
    n = arr.size
    if n < 2:
        return 0
    # compress values to 0..m-1
    ranks = np.argsort(np.argsort(arr, kind="stable"), kind="stable")
    tree = [0] * (n + 1)

    def update(i: int):
        i += 1
        while i <= n:
            tree[i] += 1
            i += i & (-i)

    def query(i: int) -> int:
        # count of values <= i
        s = 0
        i += 1
        while i > 0:
            s += tree[i]
            i -= i & (-i)
        return s

    inv = 0
    for idx in range(n - 1, -1, -1):
        v = int(ranks[idx])
        if v > 0:
            inv += query(v - 1)
        update(v)
    return inv


def recovered_fraction(output: Ranking, truth: GroundTruth) -> float:
    """Fraction of the C(n,2) unordered pairs whose relative order agrees.

    1.0 means the output equals the ground truth, 0.0 means it is the exact
    reverse. Requires n >= 2 and both rankings over the same element set.
    """
    n = truth.n
    if output.n != n:
        raise ValueError(
            f"ranking covers {output.n} elements but ground truth has {n}"
        )
    if n < 2:
        raise ValueError("recovered_fraction needs at least 2 elements")
    seq = truth.rank_of[output.order]
    total = n * (n - 1) // 2
    return 1.0 - count_inversions(seq) / total
