from itertools import count

import numpy as np
import pytest

from src.detectors import (
    Algorithm,
    DetectionProblem,
    DetectorConfig,
    SearchNode,
    branch_metric,
    detect,
    detect_best_first_ml,
    detect_bruteforce,
    detect_dijkstra_bounded,
    detect_dijkstra_unbounded,
    detect_greedy,
    detect_qrd_mld,
    detect_qrd_mld_improved,
    expand_node,
    linear_min,
    quick_sort,
)
from src.exceptions import ConfigInvalid, DimensionMismatch, InstanceTooLarge, NonFiniteInput, SearchExhausted
from src.linalg import OpCounters
from src.linalg import counters as counters_module
from src.simulation.verification import channel_ml


def qrd(M, N=1):
    return DetectorConfig(algorithm=Algorithm.QRD_MLD, M=M, N=N)


def bounded(L, N=1):
    return DetectorConfig(algorithm=Algorithm.DIJKSTRA_BOUNDED, L=L, N=N)


def noiseless_problem(constellation, row_indices, R=None):
    t = len(row_indices)
    R = np.eye(t, dtype=np.complex128) if R is None else R
    x = constellation.points[list(row_indices)]
    return DetectionProblem(R=R, xi=R @ x, constellation=constellation)


class TestDetectionProblem:

    def test_rejects_lower_entries(self, qpsk):
        with pytest.raises(DimensionMismatch):
            DetectionProblem(R=np.array([[1.0, 0.0], [0.5, 1.0]]), xi=np.zeros(2), constellation=qpsk)

    def test_rejects_length_mismatch(self, qpsk):
        with pytest.raises(DimensionMismatch):
            DetectionProblem(R=np.eye(2), xi=np.zeros(3), constellation=qpsk)

    def test_rejects_nan(self, qpsk):
        with pytest.raises(NonFiniteInput):
            DetectionProblem(R=np.eye(2), xi=np.array([np.nan, 0.0]), constellation=qpsk)


class TestExpansion:

    def test_root_expansion_cost(self, qam16):
        problem = noiseless_problem(qam16, (0, 1, 2, 3))
        ctx = OpCounters()
        children = expand_node(problem, problem.root(), ctx)
        assert len(children) == 16
        assert ctx.detection_nodes == 1
        assert ctx.complex_mul_div == 16 * (1 + counters_module.ABS2_COST)
        assert [child.indices for child in children] == [(k,) for k in range(16)]

    def test_deeper_expansion_shares_ancestor_sum(self, qam16):
        problem = noiseless_problem(qam16, (0, 1, 2, 3))
        node = SearchNode(depth=2, indices=(3, 2), acc_metric=0.0)
        ctx = OpCounters()
        expand_node(problem, node, ctx)
        assert ctx.complex_mul_div == 2 + 16 * (1 + counters_module.ABS2_COST)

    def test_bottom_node_metric_equals_objective(self, instance_factory):
        problem = instance_factory(3, 16, 10.0, seed=3).problem
        ctx = OpCounters()
        node = problem.root()
        for index in (5, 0, 9):
            node = expand_node(problem, node, ctx)[index]
        assert node.row_indices() == (9, 0, 5)
        assert node.acc_metric == pytest.approx(problem.objective((9, 0, 5)), rel=1e-12)

    def test_branch_metric_matches_child(self, instance_factory):
        problem = instance_factory(2, 4, 10.0, seed=4).problem
        ctx = OpCounters()
        children = expand_node(problem, problem.root(), ctx)
        for index, point in enumerate(problem.constellation.points):
            assert branch_metric(problem, problem.root(), point, OpCounters()) == pytest.approx(
                children[index].acc_metric, rel=1e-12
            )

    def test_noiseless_path_has_one_zero_child_per_depth(self, qam16, rng):
        R = np.triu(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), 1)
        R += np.diag(1.0 + np.abs(rng.standard_normal(4)))
        truth = (4, 9, 0, 15)
        problem = noiseless_problem(qam16, truth, R=R)
        node = problem.root()
        for _ in range(4):
            zeros = [child for child in expand_node(problem, node, OpCounters()) if child.acc_metric < 1e-20]
            assert len(zeros) == 1
            node = zeros[0]
        assert node.row_indices() == truth

    def test_cannot_expand_bottom(self, qpsk):
        problem = noiseless_problem(qpsk, (0,))
        with pytest.raises(ValueError):
            expand_node(problem, SearchNode(depth=1, indices=(0,), acc_metric=0.0), OpCounters())


class TestQuickSort:

    def nodes(self, metrics):
        return [SearchNode(depth=1, indices=(k,), acc_metric=m, seq=k) for k, m in enumerate(metrics)]

    def test_sorts_by_metric_then_sequence(self, rng):
        nodes = self.nodes(rng.integers(0, 5, size=200).astype(float).tolist())
        ctx = OpCounters()
        ordered = quick_sort(nodes, ctx)
        assert [node.key for node in ordered] == sorted(node.key for node in nodes)
        assert ctx.real_comparisons > 0

    @pytest.mark.parametrize("metrics", [list(range(1500)), list(range(1500, 0, -1))])
    def test_presorted_inputs_do_not_recurse(self, metrics):
        ordered = quick_sort(self.nodes([float(m) for m in metrics]), OpCounters())
        assert [node.acc_metric for node in ordered] == sorted(float(m) for m in metrics)

    def test_two_sorted_nodes_take_three_comparisons(self):
        ctx = OpCounters()
        quick_sort(self.nodes([1.0, 2.0]), ctx)
        assert ctx.real_comparisons == 3

    def test_trivial_inputs_are_free(self):
        ctx = OpCounters()
        assert quick_sort([], ctx) == []
        assert len(quick_sort(self.nodes([1.0]), ctx)) == 1
        assert ctx.real_comparisons == 0

    def test_linear_min_cost(self):
        ctx = OpCounters()
        best = linear_min(self.nodes([3.0, 1.0, 1.0, 2.0]), ctx)
        assert best.seq == 1
        assert ctx.real_comparisons == 3


class TestBruteForce:

    def test_noiseless_identity(self, qpsk):
        problem = noiseless_problem(qpsk, (2, 0, 3))
        result = detect_bruteforce(problem, OpCounters())
        assert result.indices == [(2, 0, 3)]
        assert result.metrics == [0.0]
        np.testing.assert_array_equal(result.best, qpsk.points[[2, 0, 3]])

    def test_counters_follow_expansion_convention(self, qpsk):
        problem = noiseless_problem(qpsk, (1, 2))
        ctx = OpCounters()
        detect_bruteforce(problem, ctx, N=3)
        size, cost = 4, 1 + counters_module.ABS2_COST
        assert ctx.detection_nodes == 1 + size
        assert ctx.complex_mul_div == size * cost + size * (1 + size * cost)
        assert ctx.real_comparisons == 3 * 15 - 3

    def test_n_best_sorted(self, instance_factory):
        problem = instance_factory(2, 16, 5.0, seed=7).problem
        result = detect_bruteforce(problem, OpCounters(), N=10)
        assert len(result.indices) == 10
        assert result.metrics == sorted(result.metrics)
        for indices, metric in zip(result.indices, result.metrics):
            assert metric == pytest.approx(problem.objective(indices), rel=1e-9)

    def test_reads_the_current_abs2_cost(self, qpsk, monkeypatch):
        monkeypatch.setattr(counters_module, "ABS2_COST", 0)
        ctx = OpCounters()
        detect_bruteforce(noiseless_problem(qpsk, (1, 2)), ctx)
        assert ctx.complex_mul_div == 4 + 4 * (1 + 4)

    def test_too_large(self, qam16):
        problem = noiseless_problem(qam16, (0,) * 7)
        with pytest.raises(InstanceTooLarge):
            detect_bruteforce(problem, OpCounters())

    def test_more_outputs_than_candidates(self, qpsk):
        with pytest.raises(SearchExhausted):
            detect_bruteforce(noiseless_problem(qpsk, (0,)), OpCounters(), N=5)


class TestExactDetectors:

    @pytest.mark.parametrize("t,order", [(2, 4), (3, 4), (2, 16)])
    def test_match_channel_enumeration(self, instance_factory, t, order):
        size = order
        configs = [
            DetectorConfig(algorithm=Algorithm.BRUTE_FORCE_ML),
            DetectorConfig(algorithm=Algorithm.DIJKSTRA_UNBOUNDED),
            DetectorConfig(algorithm=Algorithm.BEST_FIRST_ML),
            bounded(size ** t),
            qrd(size ** (t - 1)),
        ]
        for seed in range(60):
            inst = instance_factory(t, order, 8.0 + seed % 15, seed=seed)
            oracle = channel_ml(inst.H, inst.y, inst.problem.constellation.points)
            for cfg in configs:
                result = detect(inst.problem, cfg)
                assert result.indices[0] == oracle, (cfg.label, seed)

    def test_unbounded_n_best_matches_bruteforce(self, instance_factory):
        inst = instance_factory(3, 4, 5.0, seed=11)
        reference = detect_bruteforce(inst.problem, OpCounters(), N=6)
        result = detect_dijkstra_unbounded(inst.problem, OpCounters(), N=6)
        assert result.indices == reference.indices
        np.testing.assert_allclose(result.metrics, reference.metrics, rtol=1e-9)

    def test_noiseless_dijkstra_expands_one_node_per_depth(self, qam16):
        R = np.triu(np.arange(1, 17, dtype=np.complex128).reshape(4, 4) / 7.0) + np.eye(4)
        problem = noiseless_problem(qam16, (4, 9, 0, 15), R=R)
        for cfg in (
            DetectorConfig(algorithm=Algorithm.DIJKSTRA_UNBOUNDED),
            DetectorConfig(algorithm=Algorithm.BEST_FIRST_ML),
            bounded(16),
            bounded(5),
        ):
            ctx = OpCounters()
            result = detect(problem, cfg, ctx)
            assert result.indices == [(4, 9, 0, 15)]
            assert ctx.detection_nodes == 4

    @pytest.mark.parametrize("t,order,snr_db", [(3, 4, 0.0), (2, 16, 0.0), (2, 16, 12.0)])
    def test_heap_search_repeats_list_search(self, instance_factory, t, order, snr_db):
        for seed in range(15):
            problem = instance_factory(t, order, snr_db, seed=seed).problem
            list_ctx, heap_ctx = OpCounters(), OpCounters()
            listed = detect_dijkstra_unbounded(problem, list_ctx, N=3, record_trace=True)
            heaped = detect_best_first_ml(problem, heap_ctx, N=3, record_trace=True)
            assert heaped.indices == listed.indices
            assert heaped.trace == listed.trace
            assert heap_ctx.detection_nodes == list_ctx.detection_nodes
            assert heap_ctx.complex_mul_div == list_ctx.complex_mul_div
            assert 0 < heap_ctx.real_comparisons < list_ctx.real_comparisons


class TestQrdMld:

    @pytest.mark.parametrize("t,expected", [(4, 49), (6, 81)])
    def test_node_count_is_fixed(self, instance_factory, t, expected):
        for seed in range(5):
            inst = instance_factory(t, 16, 20.0, seed=seed)
            ctx = OpCounters()
            detect_qrd_mld(inst.problem, qrd(16), ctx)
            assert ctx.detection_nodes == expected

    def test_small_population_is_not_sorted(self, qam16):
        problem = noiseless_problem(qam16, (3, 7))
        ctx = OpCounters()
        detect_qrd_mld(problem, qrd(16), ctx)
        # depth 1 keeps all 16 children unsorted; only depth 2 is sorted
        sorted_ctx = OpCounters()
        sequence = count(1)
        children = []
        for node in expand_node(problem, problem.root(), OpCounters(), sequence):
            children.extend(expand_node(problem, node, OpCounters(), sequence))
        quick_sort(children, sorted_ctx)
        assert ctx.real_comparisons == sorted_ctx.real_comparisons

    def test_m_one_equals_greedy(self, instance_factory):
        for seed in range(50):
            problem = instance_factory(4, 16, 15.0, seed=seed).problem
            assert detect_qrd_mld(problem, qrd(1), OpCounters()).indices == detect_greedy(problem, OpCounters()).indices

    def test_huge_threshold_reproduces_plain_survivors(self, instance_factory):
        for seed in range(30):
            problem = instance_factory(4, 16, 15.0, seed=seed).problem
            plain = detect_qrd_mld(problem, qrd(16), OpCounters(), record_trace=True)
            cfg = DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, M=16, X=1e18, noise_variance=1.0)
            improved = detect_qrd_mld_improved(problem, cfg, OpCounters(), record_trace=True)
            assert improved.trace == plain.trace
            assert improved.indices == plain.indices

    def test_threshold_costs_scan_plus_one_test_per_node(self, qpsk):
        problem = noiseless_problem(qpsk, (2,))
        cfg = DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, M=4, X=2.0, noise_variance=1.0)
        ctx = OpCounters()
        result = detect_qrd_mld_improved(problem, cfg, ctx, record_trace=True)
        # metrics are 0, 4, 4, 8 and the threshold is 2: one survivor, no sort work
        assert result.trace == [[(2,)]]
        assert ctx.real_comparisons == 3 + 4

    def test_zero_threshold_keeps_only_ties_with_the_minimum(self, qpsk):
        # x_2 sits on 1+1j; x_1 is equidistant from all four points
        problem = DetectionProblem(R=np.eye(2), xi=np.array([0.0, 1 + 1j]), constellation=qpsk)
        cfg = DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, M=16, X=0.0, N=4, noise_variance=1.0)
        result = detect_qrd_mld_improved(problem, cfg, OpCounters(), record_trace=True)
        assert result.trace == [[(3,)], [(0, 3), (1, 3), (2, 3), (3, 3)]]
        assert result.metrics == [2.0] * 4

    def test_zero_threshold_without_ties_follows_greedy(self, instance_factory):
        for seed in range(30):
            inst = instance_factory(4, 16, 10.0, seed=seed)
            cfg = DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, M=16, X=0.0, noise_variance=inst.variance)
            improved = detect_qrd_mld_improved(inst.problem, cfg, OpCounters(), record_trace=True)
            greedy = detect_greedy(inst.problem, OpCounters(), record_trace=True)
            assert improved.trace == greedy.trace

    def test_threshold_needs_noise_variance(self, qpsk):
        cfg = DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED)
        with pytest.raises(ConfigInvalid):
            detect_qrd_mld_improved(noiseless_problem(qpsk, (0, 1)), cfg, OpCounters())

    def test_noise_variance_must_be_positive(self):
        with pytest.raises(ValueError):
            DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, noise_variance=0.0)
        with pytest.raises(ValueError):
            qrd(16).with_noise_variance(-1.0)

    def test_n_best_needs_enough_survivors(self, qpsk):
        with pytest.raises(SearchExhausted):
            detect_qrd_mld(noiseless_problem(qpsk, (0, 1)), qrd(1, N=2), OpCounters())

    def test_n_best_survivors(self, instance_factory):
        problem = instance_factory(3, 4, 5.0, seed=2).problem
        result = detect_qrd_mld(problem, qrd(16, N=4), OpCounters())
        assert len(result.indices) == 4
        assert result.metrics == sorted(result.metrics)


class TestBoundedDijkstra:

    def test_list_size_one_equals_greedy(self, instance_factory):
        for seed in range(100):
            problem = instance_factory(4, 16, 12.0, seed=seed).problem
            dijkstra = detect_dijkstra_bounded(problem, bounded(1), OpCounters(), record_trace=True)
            greedy = detect_greedy(problem, OpCounters(), record_trace=True)
            assert dijkstra.indices == greedy.indices
            assert dijkstra.trace == greedy.trace

    def test_list_never_exceeds_bound(self, instance_factory):
        problem = instance_factory(4, 16, 10.0, seed=9).problem
        result = detect_dijkstra_bounded(problem, bounded(5), OpCounters(), record_trace=True)
        assert all(len(step) <= 5 for step in result.trace)

    def test_exhausted_list(self, qpsk):
        with pytest.raises(SearchExhausted):
            detect_dijkstra_bounded(noiseless_problem(qpsk, (0, 1)), bounded(1, N=2), OpCounters())

    def test_metric_consistency(self, instance_factory):
        for seed in range(20):
            problem = instance_factory(4, 16, 15.0, seed=seed).problem
            result = detect_dijkstra_bounded(problem, bounded(16, N=2), OpCounters())
            for indices, metric in zip(result.indices, result.metrics):
                assert metric == pytest.approx(problem.objective(indices), rel=1e-9)


class TestDispatch:

    @pytest.mark.parametrize("algorithm", list(Algorithm))
    def test_every_algorithm_runs_with_default_counters(self, instance_factory, algorithm):
        problem = instance_factory(2, 4, 20.0, seed=1).problem
        result = detect(problem, DetectorConfig(algorithm=algorithm, M=4, L=4, noise_variance=1.0))
        assert len(result.best) == 2
        assert result.counters.detection_nodes >= 1

    def test_labels(self):
        assert DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED).label == "qrd-mld-improved-M16-X2"
        assert bounded(5).label == "dijkstra-L5"
        assert bounded(16, N=4).label == "dijkstra-L16-N4"
        assert DetectorConfig(algorithm=Algorithm.DIJKSTRA_UNBOUNDED).label == "ml-dijkstra"
        assert DetectorConfig(algorithm=Algorithm.BEST_FIRST_ML).label == "ml-best-first"

    def test_config_is_immutable(self):
        cfg = qrd(16)
        with pytest.raises(TypeError):
            cfg.M = 4
        assert cfg.with_noise_variance(2.5).noise_variance == 2.5
        assert cfg.noise_variance is None
