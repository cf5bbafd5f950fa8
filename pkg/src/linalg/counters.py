"""
Instrumented complex arithmetic.

Every complex multiplication and division performed on a detector path goes
through this module so the operation counts are exact. Complex additions,
subtractions and conjugations are free; a squared magnitude |z|^2 costs
ABS2_COST (one conjugate multiply by default).
"""

from dataclasses import dataclass, asdict
from typing import Dict

import numpy as np

from ..settings import settings

ABS2_COST = settings.abs2_cost


@dataclass
class OpCounters:
    """Metered operation counts for one detection"""
    complex_mul_div: int = 0
    real_comparisons: int = 0
    detection_nodes: int = 0

    def charge_muldiv(self, count: int = 1) -> None:
        self.complex_mul_div += int(count)

    def charge_comparisons(self, count: int = 1) -> None:
        self.real_comparisons += int(count)

    def charge_nodes(self, count: int = 1) -> None:
        self.detection_nodes += int(count)

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


def counted_mul(ctx: OpCounters, a: complex, b: complex) -> complex:
    """Return a*b, charging one complex multiplication"""
    ctx.complex_mul_div += 1
    return complex(a) * complex(b)


def counted_div(ctx: OpCounters, a: complex, b: complex) -> complex:
    """Return a/b, charging one complex division"""
    ctx.complex_mul_div += 1
    return complex(a) / complex(b)


def counted_abs2(ctx: OpCounters, z: complex) -> float:
    """Return |z|^2"""
    ctx.complex_mul_div += ABS2_COST
    z = complex(z)
    return z.real * z.real + z.imag * z.imag


def counted_scale(ctx: OpCounters, scalar: complex, values: np.ndarray) -> np.ndarray:
    """Elementwise scalar*values; one multiply per element"""
    ctx.complex_mul_div += int(values.size)
    return scalar * values


def counted_abs2_many(ctx: OpCounters, values: np.ndarray) -> np.ndarray:
    """Elementwise |v|^2 as float64"""
    ctx.complex_mul_div += ABS2_COST * int(values.size)
    return values.real * values.real + values.imag * values.imag


def counted_matvec(ctx: OpCounters, matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """matrix @ vector, charging one multiply per matrix entry"""
    ctx.complex_mul_div += int(matrix.size)
    return matrix @ vector
