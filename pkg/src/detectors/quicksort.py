"""
Metered quick sort over search nodes.

Hoare partitioning with the last element as pivot; every key comparison
costs one real comparison. Keys are (acc_metric, seq), which makes the order
total and deterministic. The partition loop runs on an explicit stack so
already-sorted inputs cannot exhaust the interpreter's recursion limit.
"""

from typing import List, Sequence

from ..linalg import OpCounters
from .tree import SearchNode


def quick_sort(nodes: Sequence[SearchNode], ctx: OpCounters) -> List[SearchNode]:
    """Return nodes sorted by (acc_metric, seq)"""
    items = list(nodes)
    keys = [node.key for node in items]
    comparisons = 0
    stack = [(0, len(items) - 1)]

    while stack:
        lo, hi = stack.pop()
        if lo >= hi:
            continue
        pivot = keys[hi]
        i, j = lo - 1, hi + 1
        while True:
            i += 1
            comparisons += 1
            while keys[i] < pivot:
                i += 1
                comparisons += 1
            j -= 1
            comparisons += 1
            while pivot < keys[j]:
                j -= 1
                comparisons += 1
            if i >= j:
                break
            keys[i], keys[j] = keys[j], keys[i]
            items[i], items[j] = items[j], items[i]
        # lo < i <= hi, so both halves shrink
        stack.append((i, hi))
        stack.append((lo, i - 1))

    ctx.charge_comparisons(comparisons)
    return items
