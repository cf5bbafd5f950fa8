"""
Square QAM alphabets on the odd-integer grid.

Points are left unnormalised ({+-1, +-3, ...} per axis) and the average
symbol energy is carried alongside, because the noise-variance formula
consumes E_s directly.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exceptions import UnsupportedOrder


def _gray_inverse(code: int) -> int:
    value = 0
    while code:
        value ^= code
        code >>= 1
    return value


@dataclass(frozen=True, eq=False)
class Constellation:
    """Finite symbol alphabet S; points are indexed by their Gray label"""
    points: np.ndarray
    energy: float
    name: str
    labels: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return int(self.points.size)


def make_qam(order: int) -> Constellation:
    """
    Gray-mapped square QAM of the given order.

    Args:
        order: 4, 16, 64, ... (a power of 4)

    Raises:
        UnsupportedOrder: for anything that is not a square QAM order
    """
    if not isinstance(order, (int, np.integer)) or order < 4:
        raise UnsupportedOrder(f"Unsupported QAM order: {order}")
    order = int(order)
    bits = order.bit_length() - 1
    if 1 << bits != order or bits % 2 != 0:
        raise UnsupportedOrder(f"QAM order must be a power of 4, got {order}")

    side = 1 << (bits // 2)
    levels = np.arange(-(side - 1), side, 2, dtype=np.float64)

    labels = np.arange(order, dtype=np.int64)
    in_phase = np.array([levels[_gray_inverse(int(label) >> (bits // 2))] for label in labels])
    quadrature = np.array([levels[_gray_inverse(int(label) & (side - 1))] for label in labels])
    points = in_phase + 1j * quadrature
    points.setflags(write=False)
    labels.setflags(write=False)

    energy = float(np.mean(points.real ** 2 + points.imag ** 2))
    return Constellation(points=points, energy=energy, name=f"{order}-QAM", labels=labels)


def draw_indices(c: Constellation, rng: np.random.Generator, t: int) -> np.ndarray:
    """Uniform i.i.d. symbol indices"""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    return rng.integers(0, c.size, size=int(t))


def draw_uniform(c: Constellation, rng: np.random.Generator, t: int) -> np.ndarray:
    """Length-t vector of uniform i.i.d. constellation symbols"""
    return c.points[draw_indices(c, rng, t)]
