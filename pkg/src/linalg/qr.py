"""
Householder QR decomposition and the received-signal rotation xi = Q*y.

The decomposition is channel preprocessing shared by every detector, so it is
not metered; the rotation belongs to detection and is.
"""

from typing import Tuple

import numpy as np

from ..exceptions import DimensionMismatch, NonFiniteInput, RankDeficient
from .counters import OpCounters, counted_matvec

ComplexMatrix = np.ndarray
ComplexVector = np.ndarray

RANK_TOLERANCE = 1e-12


def as_complex_matrix(values) -> ComplexMatrix:
    matrix = np.array(values, dtype=np.complex128)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    if matrix.ndim != 2:
        raise DimensionMismatch(f"Expected a 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteInput("Matrix contains NaN or infinite entries")
    return matrix


def as_complex_vector(values) -> ComplexVector:
    vector = np.array(values, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(vector)):
        raise NonFiniteInput("Vector contains NaN or infinite entries")
    return vector


def qr_decompose(H) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Thin QR decomposition H = QR of an r x t channel matrix.

    Householder reflections triangularise H; a final diagonal phase
    correction makes every R[i, i] real and positive so the factorisation
    is unique.

    Args:
        H: r x t complex matrix with r >= t

    Returns:
        (Q, R) with Q r x t having orthonormal columns and R t x t upper
        triangular with exact zeros below the diagonal

    Raises:
        DimensionMismatch: if H has fewer rows than columns
        RankDeficient: if some |R[i, i]| < 1e-12 * ||H||_F
    """
    A = as_complex_matrix(H).copy()
    rows, cols = A.shape
    if rows < cols:
        raise DimensionMismatch(f"QR needs rows >= cols, got {rows}x{cols}")

    frobenius = float(np.linalg.norm(A))
    Q_full = np.eye(rows, dtype=np.complex128)

    for k in range(cols):
        x = A[k:, k]
        norm_x = float(np.linalg.norm(x))
        if norm_x == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0 + 0.0j
        alpha = -phase * norm_x
        v = x.copy()
        v[0] -= alpha
        norm_v = float(np.linalg.norm(v))
        if norm_v == 0.0:
            continue
        v /= norm_v
        # Apply I - 2vv* from the left to A and from the right to Q
        A[k:, k:] -= 2.0 * np.outer(v, v.conj() @ A[k:, k:])
        Q_full[:, k:] -= 2.0 * np.outer(Q_full[:, k:] @ v, v.conj())

    R = np.triu(A[:cols, :cols])
    Q = Q_full[:, :cols].copy()

    diagonal = np.abs(np.diag(R))
    if frobenius == 0.0 or np.any(diagonal < RANK_TOLERANCE * frobenius):
        raise RankDeficient(
            f"Channel matrix is rank deficient (min |R_ii| = {diagonal.min():.3e}, ||H||_F = {frobenius:.3e})"
        )

    for i in range(cols):
        phase = R[i, i] / diagonal[i]
        R[i, :] *= np.conj(phase)
        Q[:, i] *= phase
        R[i, i] = complex(diagonal[i], 0.0)

    # Exact zeros below the diagonal
    R[np.tril_indices(cols, -1)] = 0.0
    return Q, R


def rotate_received(Q, y, ctx: OpCounters) -> ComplexVector:
    """
    Rotate the received vector into the triangular frame: xi = Q* y.

    Only the first t components are kept; the remaining r - t components of a
    full rotation do not depend on the transmitted vector.
    """
    Q = np.asarray(Q, dtype=np.complex128)
    y = as_complex_vector(y)
    if Q.ndim != 2 or y.shape[0] != Q.shape[0]:
        raise DimensionMismatch(f"Cannot rotate length-{y.shape[0]} vector by Q of shape {Q.shape}")
    return counted_matvec(ctx, Q.conj().T, y)
