"""
Best-first (Dijkstra) search over the detection tree with an optional list bound.

1. Create an empty list.
2. Insert every depth-1 node.
3. Remove the node A with the smallest accumulated metric; if A is at depth t
   output it (and stop once N nodes have been output).
4. Insert all children of A.
5. Arrange the list by quick sort and keep only the L smallest nodes.
6. Go back to 3.

The list bound holds at all times, so the list arranged after step 2 is
truncated like any other; the list is therefore sorted whenever step 3 runs
and A is its head. Without a bound the search is exact: metrics never
decrease along a path, so the first bottom node removed is the ML estimate
and the first N are the N best candidates.

The unbounded list is re-sorted after every expansion, which grows close to
quadratic in the list length; detect_best_first_ml runs the same exact
search on a heap.
"""

import heapq
from itertools import count
from operator import attrgetter
from typing import List, Optional, Tuple

from ..exceptions import SearchExhausted
from ..linalg import OpCounters
from .config import DetectorConfig
from .quicksort import quick_sort
from .tree import DetectionProblem, DetectionResult, SearchNode, build_result, expand_node


def _arrange(nodes: List[SearchNode], bound: Optional[int], ctx: OpCounters) -> List[SearchNode]:
    ordered = quick_sort(nodes, ctx)
    if bound is not None and len(ordered) > bound:
        del ordered[bound:]
    return ordered


def best_first_search(
    problem: DetectionProblem,
    ctx: OpCounters,
    bound: Optional[int] = None,
    N: int = 1,
    record_trace: bool = False,
) -> DetectionResult:
    sequence = count(1)
    trace: List[List[Tuple[int, ...]]] = []
    emitted: List[SearchNode] = []

    # Step 2; the root is the first detection node
    candidates = _arrange(expand_node(problem, problem.root(), ctx, sequence), bound, ctx)

    while len(emitted) < N:
        if not candidates:
            raise SearchExhausted(
                f"Candidate list emptied after {len(emitted)} of {N} outputs (list bound {bound})"
            )
        if record_trace:
            trace.append([node.row_indices() for node in candidates])
        head = candidates.pop(0)
        if head.depth == problem.t:
            emitted.append(head)
            continue
        candidates.extend(expand_node(problem, head, ctx, sequence))
        candidates = _arrange(candidates, bound, ctx)

    return build_result(problem, emitted, ctx, trace if record_trace else None)


def detect_dijkstra_bounded(
    problem: DetectionProblem, cfg: DetectorConfig, ctx: OpCounters, record_trace: bool = False
) -> DetectionResult:
    """Best-first search keeping at most cfg.L nodes in the list"""
    return best_first_search(problem, ctx, bound=cfg.L, N=cfg.N, record_trace=record_trace)


def detect_dijkstra_unbounded(
    problem: DetectionProblem, ctx: OpCounters, N: int = 1, record_trace: bool = False
) -> DetectionResult:
    """Best-first search with an unlimited list; returns the exact N best candidates"""
    return best_first_search(problem, ctx, bound=None, N=N, record_trace=record_trace)


class _HeapEntry:
    """Heap slot ordered by (acc_metric, seq); every ordering test is tallied"""
    __slots__ = ("key", "node", "tally")

    def __init__(self, node: SearchNode, tally: List[int]):
        self.key = node.key
        self.node = node
        self.tally = tally

    def __lt__(self, other: "_HeapEntry") -> bool:
        self.tally[0] += 1
        return self.key < other.key


def detect_best_first_ml(
    problem: DetectionProblem, ctx: OpCounters, N: int = 1, record_trace: bool = False
) -> DetectionResult:
    """
    Exact N best candidates from a best-first search on a binary heap.

    Removes nodes in the same (acc_metric, seq) order as the unbounded list
    search, so the decisions, the trace, the detection nodes and the
    multiplications are identical. Real comparisons count the heap sift
    comparisons.
    """
    sequence = count(1)
    tally = [0]
    trace: List[List[Tuple[int, ...]]] = []
    emitted: List[SearchNode] = []

    heap = [_HeapEntry(node, tally) for node in expand_node(problem, problem.root(), ctx, sequence)]
    heapq.heapify(heap)

    while len(emitted) < N:
        if not heap:
            raise SearchExhausted(f"Tree exhausted after {len(emitted)} of {N} outputs")
        if record_trace:
            trace.append([entry.node.row_indices() for entry in sorted(heap, key=attrgetter("key"))])
        head = heapq.heappop(heap).node
        if head.depth == problem.t:
            emitted.append(head)
            continue
        for child in expand_node(problem, head, ctx, sequence):
            heapq.heappush(heap, _HeapEntry(child, tally))

    ctx.charge_comparisons(tally[0])
    return build_result(problem, emitted, ctx, trace if record_trace else None)
