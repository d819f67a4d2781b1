import itertools
import math

import numpy as np
import pytest

from peergrade.bundles import (
    girth6_copies,
    girth6_graph,
    kkk_copies,
    overlap_index,
    random_k_regular,
    shared_bundle_matrix,
)
from peergrade.theory import (
    check_overlap_bounds,
    expected_score_diff,
    general_overlap_ceiling,
    girth6_overlap_ceiling,
    pair_stats,
    recovery_lower_bound,
    simulate_score_gap,
)


class TestExpectedScoreDiff:
    def test_adjacent_ranks_disjoint_neighbourhoods(self):
        graph = kkk_copies(6, 3)  # nodes 0 and 3 sit in different copies
        with pytest.warns(UserWarning):
            val = expected_score_diff(graph, 0, 3, 4, 5)
        assert val == 0.0

    def test_seven_point_plane_extreme_ranks(self):
        graph = girth6_graph(2)
        with pytest.warns(UserWarning):
            val = expected_score_diff(graph, 0, 3, 1, 7)
        assert val == pytest.approx(6.0, abs=1e-12)

    def test_rank_order_enforced(self):
        graph = girth6_graph(2)
        with pytest.raises(ValueError):
            expected_score_diff(graph, 0, 1, 5, 5)
        with pytest.raises(ValueError):
            expected_score_diff(graph, 0, 1, 6, 2)
        with pytest.raises(ValueError):
            expected_score_diff(graph, 2, 2, 1, 3)

    def test_no_warning_at_scale(self):
        import warnings

        graph = random_k_regular(200, 3, np.random.default_rng(0))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            expected_score_diff(graph, 0, 1, 10, 50)


class TestPairStats:
    def test_tail_bound_in_unit_interval(self):
        rng = np.random.default_rng(1)
        graph = random_k_regular(60, 4, rng)
        for _ in range(20):
            u, v = rng.choice(60, size=2, replace=False)
            r = int(rng.integers(1, 30))
            q = int(rng.integers(r + 1, 61))
            stats = pair_stats(graph, int(u), int(v), r, q)
            assert 0.0 < stats.tail_bound <= 1.0
            assert stats.theta_uv <= 8 * 4 * 3 * 13

    def test_matches_components(self):
        graph = girth6_graph(2)
        stats = pair_stats(graph, 0, 3, 1, 7)
        assert stats.lambda_uv == 1
        assert stats.theta_uv == 80
        assert stats.expected_gap == pytest.approx(6.0)
        assert stats.tail_bound == pytest.approx(math.exp(-36.0 / 160.0))


class TestOverlapBounds:
    def test_girth6_graphs_respect_tight_bound(self):
        for p in (2, 3, 5):
            graph = girth6_graph(p)
            report = check_overlap_bounds(graph)
            assert report.girth6
            assert report.ok
            assert report.eta <= girth6_overlap_ceiling(graph.k) + 1e-9

    def test_single_complete_copy(self):
        graph = kkk_copies(3, 3)
        report = check_overlap_bounds(graph)
        assert not report.girth6
        assert report.girth6_bound is None
        assert report.eta <= math.sqrt(432.0)
        assert report.ok

    def test_random_graph_reports_ok(self):
        graph = random_k_regular(200, 8, np.random.default_rng(2))
        report = check_overlap_bounds(graph)
        assert report.ok
        assert report.general_bound == general_overlap_ceiling(8)

    def test_girth6_pair_overlap_capped_at_two(self):
        for graph in (girth6_graph(2), girth6_graph(3), girth6_copies(21, 2)):
            L = shared_bundle_matrix(graph)
            for u, v in itertools.combinations(range(graph.n), 2):
                lam = L[u] + L[v]
                lam[u] = 0
                lam[v] = 0
                assert lam.max() <= 2


class TestRecoveryLowerBound:
    def test_zero_overlap_limit_is_one(self):
        graph = girth6_graph(2)
        assert recovery_lower_bound(graph, eta=0.0) == 1.0

    def test_small_k_errors(self):
        graph = girth6_graph(1)
        with pytest.raises(ValueError):
            recovery_lower_bound(graph)

    def test_vacuous_at_small_k(self):
        graph = girth6_copies(1001, 2)
        assert recovery_lower_bound(graph) == 0.0

    def test_weak_but_positive_at_k12(self):
        graph = girth6_copies(1064, 11)
        eta = overlap_index(graph)
        raw = 1.0 - 11.0 / (12 * 100) * math.sqrt(2 * math.pi) * eta
        bound = recovery_lower_bound(graph, eta)
        assert bound == max(0.0, raw)
        assert 0.0 < bound < 0.5  # far below the observed recovery

    def test_formula_between_limits(self):
        graph = girth6_graph(3)
        k = graph.k
        eta = overlap_index(graph)
        raw = 1.0 - (k - 1) / (k * (k - 2) ** 2) * math.sqrt(2 * math.pi) * eta
        assert recovery_lower_bound(graph) == max(0.0, raw)


class TestScoreGapOracle:
    def test_seven_point_plane_mean_and_tail(self):
        graph = girth6_graph(2)
        rng = np.random.default_rng(3)
        res = simulate_score_gap(graph, 0, 3, 1, 7, samples=50_000, rng=rng)
        stats = pair_stats(graph, 0, 3, 1, 7)
        assert abs(res["mean"] - stats.expected_gap) <= 3 * res["se"]
        assert res["p_nonpositive"] <= stats.tail_bound + 3 * res["se_p"]

    def test_unconditional_means_over_random_placements(self):
        # every pair of the 7-node plane shares one bundle, so the expected
        # gap between ranks r < q is the same for all node pairs; estimate it
        # by scoring many random placements directly
        graph = girth6_graph(2)
        n, k = graph.n, graph.k
        rng = np.random.default_rng(4)
        samples = 200_000
        ranks = np.empty((samples, n), dtype=np.int64)
        base = np.arange(1, n + 1)
        for i in range(0, samples, 20_000):
            ranks[i : i + 20_000] = rng.permuted(
                np.tile(base, (20_000, 1)), axis=1
            )
        scores = np.zeros((samples, n), dtype=np.int64)
        for v in range(n):
            members = graph.adj_elements[v]
            sub = ranks[:, members]
            position = (sub[:, :, None] > sub[:, None, :]).sum(axis=2)
            scores[:, members] += k - position
        # score_by_rank[s, r-1] = score of the element ranked r in sample s
        score_by_rank = np.empty_like(scores)
        rows = np.arange(samples)[:, None]
        score_by_rank[rows, ranks - 1] = scores
        for r, q in itertools.combinations(range(1, n + 1), 2):
            gaps = score_by_rank[:, r - 1] - score_by_rank[:, q - 1]
            closed = (k * (k - 1) - 1) * (q - r - 1) / (n - 2) + 1
            se = gaps.std(ddof=1) / math.sqrt(samples)
            assert abs(gaps.mean() - closed) <= 3 * se
