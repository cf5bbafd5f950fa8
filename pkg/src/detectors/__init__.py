from typing import Callable, Dict

from ..linalg import OpCounters
from .bruteforce import MAX_CANDIDATES, candidate_count, detect_bruteforce
from .config import Algorithm, DetectorConfig
from .dijkstra import best_first_search, detect_best_first_ml, detect_dijkstra_bounded, detect_dijkstra_unbounded
from .greedy import detect_greedy
from .qrd_mld import detect_qrd_mld, detect_qrd_mld_improved
from .quicksort import quick_sort
from .tree import (
    DetectionProblem,
    DetectionResult,
    SearchNode,
    branch_metric,
    build_result,
    expand_node,
    linear_min,
)

_DISPATCH: Dict[Algorithm, Callable[..., DetectionResult]] = {
    Algorithm.BRUTE_FORCE_ML: lambda p, c, ctx, trace: detect_bruteforce(p, ctx, N=c.N),
    Algorithm.QRD_MLD: lambda p, c, ctx, trace: detect_qrd_mld(p, c, ctx, record_trace=trace),
    Algorithm.QRD_MLD_IMPROVED: lambda p, c, ctx, trace: detect_qrd_mld_improved(p, c, ctx, record_trace=trace),
    Algorithm.DIJKSTRA_BOUNDED: lambda p, c, ctx, trace: detect_dijkstra_bounded(p, c, ctx, record_trace=trace),
    Algorithm.DIJKSTRA_UNBOUNDED: lambda p, c, ctx, trace: detect_dijkstra_unbounded(p, ctx, N=c.N, record_trace=trace),
    Algorithm.BEST_FIRST_ML: lambda p, c, ctx, trace: detect_best_first_ml(p, ctx, N=c.N, record_trace=trace),
    Algorithm.GREEDY: lambda p, c, ctx, trace: detect_greedy(p, ctx, record_trace=trace),
}


def detect(problem: DetectionProblem, cfg: DetectorConfig, ctx: OpCounters = None, record_trace: bool = False) -> DetectionResult:
    """Run the detector selected by cfg.algorithm"""
    if ctx is None:
        ctx = OpCounters()
    return _DISPATCH[Algorithm(cfg.algorithm)](problem, cfg, ctx, record_trace)


__all__ = [
    "Algorithm",
    "DetectionProblem",
    "DetectionResult",
    "DetectorConfig",
    "MAX_CANDIDATES",
    "SearchNode",
    "best_first_search",
    "branch_metric",
    "build_result",
    "candidate_count",
    "detect",
    "detect_best_first_ml",
    "detect_bruteforce",
    "detect_dijkstra_bounded",
    "detect_dijkstra_unbounded",
    "detect_greedy",
    "detect_qrd_mld",
    "detect_qrd_mld_improved",
    "expand_node",
    "linear_min",
    "quick_sort",
]
