"""
Weighted detection tree over the triangular system xi = R x.

A node at depth k has fixed x_t, x_{t-1}, ..., x_{t-k+1}; its children fix
x_{t-k}. The branch metric of a child is the squared residual of receive
component t-k given the symbols above it, so the accumulated metric of a
bottom node equals ||xi - R x||^2.
"""

from dataclasses import dataclass, field
from itertools import count
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..constellation import Constellation
from ..exceptions import DimensionMismatch, NonFiniteInput
from ..linalg import (
    OpCounters,
    counted_abs2,
    counted_abs2_many,
    counted_mul,
    counted_scale,
    qr_decompose,
    rotate_received,
)


@dataclass(frozen=True)
class SearchNode:
    """Partial decision; indices hold the constellation indices of x_t, x_{t-1}, ..."""
    depth: int
    indices: Tuple[int, ...]
    acc_metric: float
    seq: int = 0

    @property
    def key(self) -> Tuple[float, int]:
        return (self.acc_metric, self.seq)

    def row_indices(self) -> Tuple[int, ...]:
        """Indices in row order x_{t-k+1}, ..., x_t"""
        return tuple(reversed(self.indices))


@dataclass(frozen=True, eq=False)
class DetectionProblem:
    """The triangular least-squares search min ||xi - R x||^2 over S^t"""
    R: np.ndarray
    xi: np.ndarray
    constellation: Constellation
    _rows: list = field(init=False, repr=False, compare=False)
    _points: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        R = np.asarray(self.R, dtype=np.complex128)
        xi = np.asarray(self.xi, dtype=np.complex128).reshape(-1)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise DimensionMismatch(f"R must be square, got shape {R.shape}")
        if xi.shape[0] != R.shape[0]:
            raise DimensionMismatch(f"xi has length {xi.shape[0]}, R is {R.shape[0]}x{R.shape[1]}")
        if np.any(np.tril(R, -1) != 0):
            raise DimensionMismatch("R must be upper triangular")
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(xi))):
            raise NonFiniteInput("Detection problem contains NaN or infinite values")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "_rows", [[complex(v) for v in row] for row in R])
        object.__setattr__(self, "_points", [complex(p) for p in self.constellation.points])

    @classmethod
    def from_channel(cls, H, y, constellation: Constellation, ctx: OpCounters) -> "DetectionProblem":
        """QR-decompose H (unmetered) and rotate y (metered)"""
        Q, R = qr_decompose(H)
        return cls(R=R, xi=rotate_received(Q, y, ctx), constellation=constellation)

    @property
    def t(self) -> int:
        return int(self.R.shape[0])

    def root(self) -> SearchNode:
        return SearchNode(depth=0, indices=(), acc_metric=0.0, seq=0)

    def symbols_of(self, row_indices: Sequence[int]) -> np.ndarray:
        return self.constellation.points[np.asarray(row_indices, dtype=np.int64)]

    def objective(self, row_indices: Sequence[int]) -> float:
        """Unmetered ||xi - R x||^2 of a full candidate given in row order"""
        residual = self.xi - self.R @ self.symbols_of(row_indices)
        return float(np.sum(residual.real ** 2 + residual.imag ** 2))


@dataclass
class DetectionResult:
    """N best estimates (best first) with their metrics and the cost of finding them"""
    estimates: List[np.ndarray]
    metrics: List[float]
    counters: OpCounters
    indices: List[Tuple[int, ...]]
    trace: Optional[List[List[Tuple[int, ...]]]] = None

    @property
    def best(self) -> np.ndarray:
        return self.estimates[0]


def _interference(problem: DetectionProblem, node: SearchNode, row: int, ctx: OpCounters) -> complex:
    """sum_{j>row} R[row, j] x_j over the symbols fixed by node; one multiply per ancestor"""
    coefficients = problem._rows[row]
    points = problem._points
    t = problem.t
    total = 0j
    for offset, index in enumerate(node.indices):
        total += counted_mul(ctx, coefficients[t - 1 - offset], points[index])
    return total


def branch_metric(problem: DetectionProblem, parent: SearchNode, candidate_symbol: complex, ctx: OpCounters) -> float:
    """Branch weight m_i of extending parent by candidate_symbol"""
    if parent.depth >= problem.t:
        raise ValueError("Cannot extend a bottom-depth node")
    row = problem.t - parent.depth - 1
    residual = problem.xi[row] - _interference(problem, parent, row, ctx)
    residual -= counted_mul(ctx, problem._rows[row][row], candidate_symbol)
    return counted_abs2(ctx, residual)


def expand_node(
    problem: DetectionProblem,
    node: SearchNode,
    ctx: OpCounters,
    sequence: Optional[Iterator[int]] = None,
) -> List[SearchNode]:
    """
    Generate the |S| children of node, making it a detection node.

    The ancestor interference is computed once and shared by all children;
    each child then costs one multiply (R_ii * s) and one squared magnitude.
    Children are numbered from sequence in constellation-index order.
    """
    if node.depth >= problem.t:
        raise ValueError("Cannot expand a bottom-depth node")
    if sequence is None:
        sequence = count(1)

    ctx.charge_nodes(1)
    row = problem.t - node.depth - 1
    shifted = problem.xi[row] - _interference(problem, node, row, ctx)
    residuals = shifted - counted_scale(ctx, problem.R[row, row], problem.constellation.points)
    branches = counted_abs2_many(ctx, residuals).tolist()

    depth = node.depth + 1
    base = node.acc_metric
    prefix = node.indices
    return [
        SearchNode(depth=depth, indices=prefix + (index,), acc_metric=base + branch, seq=next(sequence))
        for index, branch in enumerate(branches)
    ]


def linear_min(nodes: Sequence[SearchNode], ctx: OpCounters) -> SearchNode:
    """Smallest node by (acc_metric, seq); len(nodes) - 1 comparisons"""
    best = nodes[0]
    best_key = best.key
    for node in nodes[1:]:
        key = node.key
        if key < best_key:
            best, best_key = node, key
    ctx.charge_comparisons(len(nodes) - 1)
    return best


def build_result(
    problem: DetectionProblem,
    nodes: Sequence[SearchNode],
    ctx: OpCounters,
    trace: Optional[List[List[Tuple[int, ...]]]] = None,
) -> DetectionResult:
    indices = [node.row_indices() for node in nodes]
    return DetectionResult(
        estimates=[problem.symbols_of(row) for row in indices],
        metrics=[float(node.acc_metric) for node in nodes],
        counters=ctx,
        indices=indices,
        trace=trace,
    )
