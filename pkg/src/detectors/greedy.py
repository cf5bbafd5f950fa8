"""Successive decision feedback: follow the smallest branch at every depth."""

from itertools import count

from ..linalg import OpCounters
from .tree import DetectionProblem, DetectionResult, build_result, expand_node, linear_min


def detect_greedy(problem: DetectionProblem, ctx: OpCounters, record_trace: bool = False) -> DetectionResult:
    sequence = count(1)
    node = problem.root()
    trace = []
    for _ in range(problem.t):
        node = linear_min(expand_node(problem, node, ctx, sequence), ctx)
        if record_trace:
            trace.append([node.row_indices()])
    return build_result(problem, [node], ctx, trace if record_trace else None)
