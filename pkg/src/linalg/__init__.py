from .counters import (
    OpCounters,
    counted_abs2,
    counted_abs2_many,
    counted_div,
    counted_matvec,
    counted_mul,
    counted_scale,
)
from .qr import ComplexMatrix, ComplexVector, as_complex_matrix, as_complex_vector, qr_decompose, rotate_received

__all__ = [
    "ComplexMatrix",
    "ComplexVector",
    "OpCounters",
    "as_complex_matrix",
    "as_complex_vector",
    "counted_abs2",
    "counted_abs2_many",
    "counted_div",
    "counted_matvec",
    "counted_mul",
    "counted_scale",
    "qr_decompose",
    "rotate_received",
]
