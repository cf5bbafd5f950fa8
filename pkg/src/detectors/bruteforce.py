"""
Exhaustive maximum-likelihood detection.

The whole tree is enumerated depth by depth with numpy, charged with the
same per-expansion convention as expand_node so its counters are comparable
with the tree searches.
"""

import numpy as np

from ..exceptions import InstanceTooLarge, SearchExhausted
from ..linalg import OpCounters, counters
from .tree import DetectionProblem, DetectionResult

MAX_CANDIDATES = 1 << 24


def candidate_count(problem: DetectionProblem) -> int:
    return problem.constellation.size ** problem.t


def detect_bruteforce(problem: DetectionProblem, ctx: OpCounters, N: int = 1) -> DetectionResult:
    """
    Exact minimiser(s) of ||xi - R x||^2 over S^t.

    Ties go to the earlier candidate in tree order (x_t most significant).

    Raises:
        InstanceTooLarge: if |S|^t exceeds 2^24
        SearchExhausted: if N exceeds |S|^t
    """
    total = candidate_count(problem)
    if total > MAX_CANDIDATES:
        raise InstanceTooLarge(f"{total} candidates exceed the enumeration limit of {MAX_CANDIDATES}")
    if N > total:
        raise SearchExhausted(f"Requested {N} outputs from {total} candidates")

    t = problem.t
    size = problem.constellation.size
    points = problem.constellation.points
    R, xi = problem.R, problem.xi
    index_dtype = np.int16 if size < (1 << 15) else np.int32

    paths = np.zeros((1, 0), dtype=index_dtype)
    metrics = np.zeros(1, dtype=np.float64)
    for depth in range(t):
        row = t - depth - 1
        nodes = paths.shape[0]
        ctx.charge_nodes(nodes)
        if depth:
            # Columns of paths hold x_t, x_{t-1}, ..., x_{row+1}
            coefficients = R[row, t - 1:row:-1]
            interference = points[paths] @ coefficients
            ctx.charge_muldiv(nodes * depth)
        else:
            interference = np.zeros(1, dtype=np.complex128)
        products = R[row, row] * points
        ctx.charge_muldiv(nodes * size)
        residuals = (xi[row] - interference)[:, None] - products[None, :]
        ctx.charge_muldiv(nodes * size * counters.ABS2_COST)
        branches = residuals.real ** 2 + residuals.imag ** 2
        metrics = (metrics[:, None] + branches).reshape(-1)
        paths = np.concatenate(
            [
                np.repeat(paths, size, axis=0),
                np.tile(np.arange(size, dtype=index_dtype), nodes)[:, None],
            ],
            axis=1,
        )

    if N == 1:
        order = np.array([int(np.argmin(metrics))])
    else:
        order = np.argsort(metrics, kind="stable")[:N]
    # N successive minimum scans over a shrinking pool
    ctx.charge_comparisons(N * (total - 1) - N * (N - 1) // 2)

    indices = [tuple(int(v) for v in paths[k][::-1]) for k in order]
    return DetectionResult(
        estimates=[problem.symbols_of(row) for row in indices],
        metrics=[float(metrics[k]) for k in order],
        counters=ctx,
        indices=indices,
    )
