"""Incrementally closed pairwise-order relation backed by uint64 bitsets.

reach[x] holds the descendants of x (elements ranked below x, x included);
coreach[x] holds its ancestors. Both are kept transitively closed after every
insertion, so "does b already reach a" is a single bit test. The hot loops are
numba-compiled: profiles at n ~ 1000 insert a few hundred thousand pairs.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

__all__ = ["RelationState"]

_ONE = np.uint64(1)


@njit(cache=True)
def _insert_edge(reach, coreach, a, b, words):
    # Record a -> b: every ancestor of a reaches everything b reaches.
    for w in range(words):
        wa = coreach[a, w]
        while wa != uint64(0):
            low = wa & (uint64(0) - wa)
            idx = 0
            t = low
            while t != uint64(1):
                t >>= uint64(1)
                idx += 1
            x = (w << 6) + idx
            if (reach[x, b >> 6] >> uint64(b & 63)) & uint64(1) == uint64(0):
                for ww in range(words):
                    reach[x, ww] |= reach[b, ww]
            wa ^= low
    for w in range(words):
        wb = reach[b, w]
        while wb != uint64(0):
            low = wb & (uint64(0) - wb)
            idx = 0
            t = low
            while t != uint64(1):
                t >>= uint64(1)
                idx += 1
            y = (w << 6) + idx
            if (coreach[y, a >> 6] >> uint64(a & 63)) & uint64(1) == uint64(0):
                for ww in range(words):
                    coreach[y, ww] |= coreach[a, ww]
            wb ^= low


@njit(cache=True)
def _serial_phase(reach, coreach, rankings, visit_order, words):
    """Copy each visited ranking's pairs unless they contradict earlier ones.

    Pairs inside one ranking are taken in lexicographic position order.
    Returns (accepted, rejected) counts; implied pairs count as accepted.
    """
    k = rankings.shape[1]
    accepted = 0
    rejected = 0
    for t in range(visit_order.shape[0]):
        b = visit_order[t]
        for i in range(k - 1):
            hi = rankings[b, i]
            for j in range(i + 1, k):
                lo = rankings[b, j]
                if (reach[hi, lo >> 6] >> uint64(lo & 63)) & uint64(1):
                    accepted += 1  # already implied
                elif (reach[lo, hi >> 6] >> uint64(hi & 63)) & uint64(1):
                    rejected += 1  # would close a cycle
                else:
                    _insert_edge(reach, coreach, hi, lo, words)
                    accepted += 1
    return accepted, rejected


@njit(cache=True)
def _completion_phase(reach, coreach, pair_a, pair_b, orient, words):
    """Orient still-undecided pairs in the given order, closing after each.

    `pair_a/pair_b` is a pre-shuffled list of candidate pairs; pairs decided
    by transitivity since the shuffle are skipped, which leaves every step
    uniform over the currently undecided pairs. Returns the number of coin
    flips actually used.
    """
    used = 0
    for p in range(pair_a.shape[0]):
        a = pair_a[p]
        b = pair_b[p]
        if (reach[a, b >> 6] >> uint64(b & 63)) & uint64(1):
            continue
        if (reach[b, a >> 6] >> uint64(a & 63)) & uint64(1):
            continue
        if orient[p]:
            _insert_edge(reach, coreach, a, b, words)
        else:
            _insert_edge(reach, coreach, b, a, words)
        used += 1
    return used


class RelationState:
    """Antisymmetric, transitively closed strict order relation on n items."""

    def __init__(self, n: int):
        self.n = n
        self.words = (n + 63) // 64
        self.reach = np.zeros((n, self.words), dtype=np.uint64)
        self.coreach = np.zeros((n, self.words), dtype=np.uint64)
        idx = np.arange(n)
        bits = _ONE << (idx % 64).astype(np.uint64)
        self.reach[idx, idx >> 6] = bits
        self.coreach[idx, idx >> 6] = bits

    def implies(self, a: int, b: int) -> bool:
        """True iff a is already ranked above b (a reaches b)."""
        return bool((self.reach[a, b >> 6] >> np.uint64(b & 63)) & _ONE)

    def decided(self, a: int, b: int) -> bool:
        return self.implies(a, b) or self.implies(b, a)

    def insert(self, a: int, b: int) -> None:
        """Record a above b. The pair must be undecided."""
        if self.decided(a, b):
            raise ValueError(f"pair ({a}, {b}) is already decided")
        _insert_edge(self.reach, self.coreach, a, b, self.words)

    def run_serial(self, rankings: np.ndarray, visit_order: np.ndarray) -> tuple[int, int]:
        return _serial_phase(
            self.reach, self.coreach, rankings, visit_order, self.words
        )

    def run_completion(
        self, pair_a: np.ndarray, pair_b: np.ndarray, orient: np.ndarray
    ) -> int:
        return _completion_phase(
            self.reach, self.coreach, pair_a, pair_b, orient, self.words
        )

    def _bool_matrix(self) -> np.ndarray:
        bits = np.unpackbits(
            self.reach.view(np.uint8), axis=1, bitorder="little"
        )
        return bits[:, : self.n].astype(bool)

    def undecided_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """All unordered pairs (a < b) with no relation either way."""
        dec = self._bool_matrix()
        dec |= dec.T
        iu, ju = np.triu_indices(self.n, 1)
        mask = ~dec[iu, ju]
        return iu[mask].astype(np.int64), ju[mask].astype(np.int64)

    def toposort(self) -> np.ndarray:
        """Unique total order once every pair is decided (best first)."""
        counts = self._bool_matrix().sum(axis=1)
        if sorted(counts.tolist()) != list(range(1, self.n + 1)):
            raise RuntimeError("relation is not a complete total order")
        return np.argsort(-counts, kind="stable").astype(np.int64)

    def validate(self) -> None:
        """Check antisymmetry and transitive closedness (test hook)."""
        m = self._bool_matrix()
        both = m & m.T
        if both.sum() != self.n or not both.diagonal().all():
            raise AssertionError("relation contains a cycle")
        closed = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if not (m | ~closed).all():
            raise AssertionError("relation is not transitively closed")
