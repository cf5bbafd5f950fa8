#!/usr/bin/env python3
"""
Pydantic schemas for experiment configuration and sweep results.

Defaults reproduce the reference link-level setup: 4x4 antennas, 16-QAM,
CN(0, 1) block fading changed every 100 signals, 100000 signals per SNR
point, M = 16, X = 2 and list sizes L = 16 and L = 5.
"""

import math
from typing import List, Optional, Sequence

from loguru import logger
from pydantic import BaseModel, Field, validator

from ..detectors import Algorithm, DetectorConfig

# ============================================================================
# DEFAULTS
# ============================================================================

DEFAULT_SNR_GRID = (10.0, 15.0, 20.0, 25.0, 30.0)
DEFAULT_M = 16
DEFAULT_X = 2.0
DEFAULT_L = (16, 5)
DEFAULT_SIGNALS = 100000
DEFAULT_FADING_BLOCK = 100
DEFAULT_SEED = 20240101

# Largest |S|^t for which "ml" means exhaustive enumeration in a sweep
BRUTE_FORCE_SWEEP_LIMIT = 1 << 16


def ml_detector(t: int, order: int, N: int = 1) -> DetectorConfig:
    """Exact ML: brute force when cheap enough, otherwise the heap-based best-first search"""
    if order ** t <= BRUTE_FORCE_SWEEP_LIMIT:
        return DetectorConfig(algorithm=Algorithm.BRUTE_FORCE_ML, N=N)
    logger.info(f"{order}^{t} candidates: using heap best-first search for exact ML")
    return DetectorConfig(algorithm=Algorithm.BEST_FIRST_ML, N=N)


def default_detectors(
    t: int,
    order: int,
    M: int = DEFAULT_M,
    X: float = DEFAULT_X,
    L: Sequence[int] = DEFAULT_L,
    N: int = 1,
) -> List[DetectorConfig]:
    detectors = [
        ml_detector(t, order, N),
        DetectorConfig(algorithm=Algorithm.QRD_MLD, M=M, N=N),
        DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, M=M, X=X, N=N),
    ]
    detectors.extend(DetectorConfig(algorithm=Algorithm.DIJKSTRA_BOUNDED, L=bound, N=N) for bound in L)
    return detectors


def is_qam_order(order: int) -> bool:
    bits = order.bit_length() - 1
    return order >= 4 and (1 << bits) == order and bits % 2 == 0


# ============================================================================
# EXPERIMENT CONFIGURATION
# ============================================================================

class ExperimentConfig(BaseModel):
    """Schema for a full SNR sweep"""
    t: int = Field(4, ge=1)
    r: int = Field(4, ge=1)
    order: int = Field(16, ge=4)
    snr_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_SNR_GRID))
    signals_total: int = Field(DEFAULT_SIGNALS, ge=1)
    fading_block: int = Field(DEFAULT_FADING_BLOCK, ge=1)
    seed: int = Field(DEFAULT_SEED, ge=0)
    detectors: List[DetectorConfig] = Field(default_factory=list)

    @validator('r')
    def receive_antennas_cover_transmit(cls, v, values):
        if 't' in values and v < values['t']:
            raise ValueError(f"r must be >= t (got r={v}, t={values['t']})")
        return v

    @validator('order')
    def square_qam_order(cls, v):
        if not is_qam_order(v):
            raise ValueError(f"order must be a power of 4, got {v}")
        return v

    @validator('snr_grid')
    def finite_snr_grid(cls, v):
        if not v:
            raise ValueError("snr_grid must not be empty")
        if not all(math.isfinite(value) for value in v):
            raise ValueError("snr_grid values must be finite")
        return v

    @validator('detectors', always=True)
    def fill_default_detectors(cls, v, values):
        if v:
            return v
        if 't' not in values or 'order' not in values:
            return v
        return default_detectors(values['t'], values['order'])

    @property
    def symbols_per_point(self) -> int:
        return self.signals_total * self.t


# ============================================================================
# RESULTS
# ============================================================================

CSV_COLUMNS = (
    "detector",
    "snr_db",
    "ser",
    "ser_stderr",
    "avg_muldiv",
    "max_muldiv",
    "avg_nodes",
    "max_nodes",
    "avg_cmps",
    "max_cmps",
    "trials",
)


class SweepPoint(BaseModel):
    """Schema for one (detector, SNR) cell of a sweep"""
    detector: str = Field(..., min_length=1)
    snr_db: float
    ser: float = Field(..., ge=0.0, le=1.0)
    ser_stderr: float = Field(..., ge=0.0)
    avg_muldiv: float = Field(..., ge=0.0)
    max_muldiv: int = Field(..., ge=0)
    avg_nodes: float = Field(..., ge=0.0)
    max_nodes: int = Field(..., ge=0)
    avg_cmps: float = Field(..., ge=0.0)
    max_cmps: int = Field(..., ge=0)
    trials: int = Field(..., ge=1)
    symbol_errors: Optional[int] = Field(None, ge=0)

    @validator('max_muldiv', 'max_nodes', 'max_cmps')
    def maximum_not_below_average(cls, v, values, field):
        average = values.get(field.name.replace('max_', 'avg_'))
        if average is not None and v < average:
            raise ValueError(f"{field.name}={v} is below the average {average}")
        return v

    def csv_row(self) -> dict:
        return {column: getattr(self, column) for column in CSV_COLUMNS}


class SweepResult(BaseModel):
    """Schema for a complete sweep"""
    points: List[SweepPoint] = Field(default_factory=list)
    config: Optional[ExperimentConfig] = None

    def for_detector(self, label: str) -> List[SweepPoint]:
        return [point for point in self.points if point.detector == label]

    def point(self, label: str, snr_db: float) -> SweepPoint:
        for candidate in self.points:
            if candidate.detector == label and candidate.snr_db == snr_db:
                return candidate
        raise KeyError(f"No result for detector {label!r} at {snr_db} dB")

    @property
    def detector_labels(self) -> List[str]:
        labels: List[str] = []
        for point in self.points:
            if point.detector not in labels:
                labels.append(point.detector)
        return labels
