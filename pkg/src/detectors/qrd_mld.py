"""
QRD-MLD (the M-algorithm over the detection tree) and its threshold variant.

Breadth-first: every survivor at one depth is expanded, and of the children
only the M with the smallest accumulated metric survive. The threshold variant
first drops children whose metric exceeds Delta_i = E_i,min + X * phi^2,
where E_i,min is the smallest metric among the children at that depth.
"""

from itertools import count
from typing import List, Tuple

from ..exceptions import ConfigInvalid, SearchExhausted
from ..linalg import OpCounters
from .config import DetectorConfig
from .quicksort import quick_sort
from .tree import DetectionProblem, DetectionResult, SearchNode, build_result, expand_node, linear_min


def _apply_threshold(children: List[SearchNode], X: float, noise_variance: float, ctx: OpCounters) -> List[SearchNode]:
    smallest = linear_min(children, ctx).acc_metric
    delta = smallest + X * noise_variance
    ctx.charge_comparisons(len(children))
    return [child for child in children if child.acc_metric <= delta]


def _breadth_first(
    problem: DetectionProblem,
    cfg: DetectorConfig,
    ctx: OpCounters,
    use_threshold: bool,
    record_trace: bool,
) -> DetectionResult:
    sequence = count(1)
    trace: List[List[Tuple[int, ...]]] = []
    frontier = [problem.root()]
    survivors: List[SearchNode] = []

    for depth in range(1, problem.t + 1):
        children: List[SearchNode] = []
        for node in frontier:
            children.extend(expand_node(problem, node, ctx, sequence))

        if use_threshold:
            children = _apply_threshold(children, cfg.X, cfg.noise_variance, ctx)

        if depth < problem.t:
            survivors = children if len(children) <= cfg.M else quick_sort(children, ctx)[:cfg.M]
        else:
            survivors = quick_sort(children, ctx)[:cfg.M]
        if record_trace:
            trace.append([node.row_indices() for node in survivors])
        frontier = survivors

    if cfg.N > len(survivors):
        raise SearchExhausted(f"Only {len(survivors)} bottom candidates survive, {cfg.N} requested")
    return build_result(problem, survivors[:cfg.N], ctx, trace if record_trace else None)


def detect_qrd_mld(problem: DetectionProblem, cfg: DetectorConfig, ctx: OpCounters, record_trace: bool = False) -> DetectionResult:
    """Keep the M best nodes at every depth; output the best bottom node(s)"""
    return _breadth_first(problem, cfg, ctx, use_threshold=False, record_trace=record_trace)


def detect_qrd_mld_improved(
    problem: DetectionProblem, cfg: DetectorConfig, ctx: OpCounters, record_trace: bool = False
) -> DetectionResult:
    """
    QRD-MLD with a per-depth metric threshold.

    The threshold is applied at every depth 1..t, the bottom included, and
    both the minimum scan and the threshold tests are metered as real
    comparisons.

    Raises:
        ConfigInvalid: if cfg carries no noise variance
    """
    if cfg.noise_variance is None:
        raise ConfigInvalid(f"{cfg.label} needs the noise variance of the current SNR point")
    return _breadth_first(problem, cfg, ctx, use_threshold=True, record_trace=record_trace)
