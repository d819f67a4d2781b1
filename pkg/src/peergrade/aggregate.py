"""The three aggregation rules: Borda, random serial dictatorship, MC4.

Each rule maps a profile of partial rankings to a complete ranking and is a
pure function of (profile, rng, params); independent invocations can run in
parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numba import njit

from ._bitrel import RelationState
from .core import Profile, Ranking

__all__ = [
    "ScoreTable",
    "borda_scores",
    "borda",
    "rsd",
    "mc4",
    "mc4_transition",
    "MC4_TIE_WINDOW",
    "pairwise_above_counts",
]

MC4_TIE_WINDOW = 1e-9  # relative: sorted neighbours within this factor tie


@dataclass(frozen=True)
class ScoreTable:
    """Borda points per element: k for a bundle's best, down to 1 for its last."""

    scores: np.ndarray
    k: int

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.int64)
        n, k = scores.size, self.k
        expected = n * k * (k + 1) // 2
        if scores.sum() != expected:
            raise ValueError(
                f"total score {scores.sum()} != n*k*(k+1)/2 = {expected}"
            )
        scores = scores.copy()
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)


def borda_scores(profile: Profile) -> ScoreTable:
    """Sum each element's per-bundle points (k, k-1, ..., 1)."""
    rankings = profile.as_array()
    n, k = rankings.shape
    scores = np.zeros(n, dtype=np.int64)
    points = np.tile(np.arange(k, 0, -1, dtype=np.int64), n)
    np.add.at(scores, rankings.ravel(), points)
    return ScoreTable(scores=scores, k=k)


def _rank_by_key(primary: np.ndarray, tiebreak: np.ndarray) -> np.ndarray:
    """Descending sort on `primary`, ties ordered by ascending `tiebreak`."""
    return np.lexsort((tiebreak, -primary))


def borda(profile: Profile, k: int, rng: np.random.Generator) -> Ranking:
    """Rank by total Borda score, breaking ties uniformly at random."""
    table = borda_scores(profile)
    if k != table.k:
        raise ValueError(f"profile has bundle size {table.k}, expected {k}")
    tiebreak = rng.random(profile.n)
    return Ranking(order=_rank_by_key(table.scores.astype(np.float64), tiebreak))


def rsd(
    profile: Profile, rng: np.random.Generator, *, _validate: bool = False
) -> Ranking:
    """Random serial dictatorship over partial rankings.

    Serial phase: visit the rankings in a uniformly random order and copy each
    implied pair unless it contradicts (cycles with) pairs copied earlier;
    pairs inside one ranking are taken in lexicographic position order. The
    copied relation is kept transitively closed. Completion phase: repeatedly
    orient a uniformly random still-undecided pair by a fair coin and re-close,
    until the order is total.
    """
    rankings = profile.as_array()
    n = profile.n
    rel = RelationState(n)
    visit = rng.permutation(n).astype(np.int64)
    rel.run_serial(rankings, visit)
    if _validate:
        rel.validate()
    pa, pb = rel.undecided_pairs()
    perm = rng.permutation(pa.size)
    pa, pb = pa[perm], pb[perm]
    orient = rng.random(pa.size) < 0.5
    rel.run_completion(pa, pb, orient)
    if _validate:
        rel.validate()
    return Ranking(order=rel.toposort())


def pairwise_above_counts(profile: Profile) -> np.ndarray:
    """above[a, b] = number of rankings placing a above b."""
    rankings = profile.as_array()
    n, k = rankings.shape
    above = np.zeros((n, n), dtype=np.int64)
    for i in range(k - 1):
        for j in range(i + 1, k):
            np.add.at(above, (rankings[:, i], rankings[:, j]), 1)
    return above


def mc4_transition(profile: Profile) -> np.ndarray:
    """Dense row-stochastic transition matrix of the MC4 walk."""
    n = profile.n
    above = pairwise_above_counts(profile)
    winners = above.T > above
    P = winners.astype(np.float64) / n
    np.fill_diagonal(P, 0.0)
    P[np.arange(n), np.arange(n)] = 1.0 - P.sum(axis=1)
    return P


@njit(cache=True)
def _power_iterate(indptr, indices, stay, n, max_iterations, tolerance):
    """Walk distribution after max_iterations steps from the uniform vector.

    The iterate update is x[j] <- stay[j]*x[j] + (1/n) * sum of x over j's
    in-neighbours. Stops early when consecutive iterates differ by at most
    `tolerance` in max norm.
    """
    inv_n = 1.0 / n
    x = np.full(n, inv_n)
    x_next = np.empty(n)
    for _t in range(max_iterations):
        for j in range(n):
            acc = 0.0
            for e in range(indptr[j], indptr[j + 1]):
                acc += x[indices[e]]
            x_next[j] = stay[j] * x[j] + acc * inv_n
        dx = 0.0
        for j in range(n):
            d = x_next[j] - x[j]
            if d < 0.0:
                d = -d
            if d > dx:
                dx = d
            x[j] = x_next[j]
        if dx <= tolerance:
            break
    return x


def mc4(
    profile: Profile,
    rng: np.random.Generator,
    max_iterations: int | None = None,
    tolerance: float = 1e-10,
) -> Ranking:
    """Majority-comparison random walk, ranked by visit probability.

    From element a, a uniformly random element b (possibly a itself) is
    proposed; the walk moves iff strictly more rankings put b above a than a
    above b, and stays otherwise. Elements are sorted by the walk distribution
    after `max_iterations` power-iteration steps (default n) from the uniform
    start. The distribution can span many orders of magnitude because losing
    elements drain geometrically, so ties are grouped on a relative scale
    (values within a factor 1 - MC4_TIE_WINDOW of their sorted neighbour) and
    ordered uniformly at random.
    """
    n = profile.n
    if max_iterations is None:
        max_iterations = n
    above = pairwise_above_counts(profile)
    winners = above.T > above  # entry [a, b]: walk moves from a to b
    out_degree = winners.sum(axis=1)
    stay = 1.0 - out_degree / n
    incoming = sp.csr_matrix(winners.T)
    stationary = _power_iterate(
        incoming.indptr.astype(np.int64),
        incoming.indices.astype(np.int64),
        stay,
        n,
        int(max_iterations),
        float(tolerance),
    )
    order = np.argsort(-stationary, kind="stable")
    sorted_vals = stationary[order]
    new_group = np.ones(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sorted_vals[:-1] > 0.0, sorted_vals[1:] / sorted_vals[:-1], 1.0)
    new_group[1:] = ratio < 1.0 - MC4_TIE_WINDOW
    group_ids = np.cumsum(new_group)
    group_of = np.empty(n, dtype=np.int64)
    group_of[order] = group_ids
    tiebreak = rng.random(n)
    return Ranking(order=np.lexsort((tiebreak, group_of)))
