"""
Desk-scale exactness checks.

On enumerable instances the exact configurations (unbounded Dijkstra on the
sorted list and on a heap, bounded Dijkstra with L = |S|^t, QRD-MLD with
M = |S|^(t-1) and brute force) must return the minimiser of ||y - Hx||^2
computed directly on the channel, without QR. Emitted metrics must also
equal the re-scored objective.
Heuristic configurations (L = 1, M = 1) are reported but never fail a run.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from loguru import logger

from ..channel import complex_gaussian, draw_noise, measure_snr_db, noise_variance, transmit
from ..constellation import draw_indices, make_qam
from ..detectors import Algorithm, DetectionProblem, DetectorConfig, detect
from ..linalg import OpCounters
from .harness import draw_usable_channel

METRIC_TOLERANCE = 1e-9


@dataclass(frozen=True)
class VerificationCase:
    name: str
    t: int
    r: int
    order: int


STANDARD_CASES = (
    VerificationCase("2x2 QPSK", 2, 2, 4),
    VerificationCase("4x4 QPSK", 4, 4, 4),
)
EXTENDED_CASES = (
    VerificationCase("3x3 QPSK", 3, 3, 4),
    VerificationCase("2x2 16-QAM", 2, 2, 16),
)


@dataclass
class CaseReport:
    case: VerificationCase
    instances: int = 0
    exact: Dict[str, int] = field(default_factory=dict)
    heuristic: Dict[str, int] = field(default_factory=dict)
    metric_failures: int = 0

    @property
    def passed(self) -> bool:
        return self.metric_failures == 0 and all(count == self.instances for count in self.exact.values())


@dataclass
class VerificationReport:
    cases: List[CaseReport] = field(default_factory=list)
    calibration: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases) and all(
            abs(measured - target) <= 0.1 for target, measured in self.calibration
        )

    def summary_lines(self) -> List[str]:
        lines = []
        for case in self.cases:
            for label, count in case.exact.items():
                status = "✅" if count == case.instances else "❌"
                lines.append(f"{status} {case.case.name} {label}: {count}/{case.instances} exact")
            for label, count in case.heuristic.items():
                lines.append(f"   {case.case.name} {label}: {count}/{case.instances} match ML (heuristic)")
            if case.metric_failures:
                lines.append(f"❌ {case.case.name}: {case.metric_failures} metric inconsistencies")
        for target, measured in self.calibration:
            status = "✅" if abs(measured - target) <= 0.1 else "❌"
            lines.append(f"{status} noise calibration: configured {target:g} dB, measured {measured:.3f} dB")
        return lines


def exact_detectors(t: int, order: int) -> List[DetectorConfig]:
    return [
        DetectorConfig(algorithm=Algorithm.BRUTE_FORCE_ML),
        DetectorConfig(algorithm=Algorithm.DIJKSTRA_UNBOUNDED),
        DetectorConfig(algorithm=Algorithm.BEST_FIRST_ML),
        DetectorConfig(algorithm=Algorithm.DIJKSTRA_BOUNDED, L=order ** t),
        DetectorConfig(algorithm=Algorithm.QRD_MLD, M=order ** (t - 1)),
    ]


def heuristic_detectors() -> List[DetectorConfig]:
    return [
        DetectorConfig(algorithm=Algorithm.DIJKSTRA_BOUNDED, L=1),
        DetectorConfig(algorithm=Algorithm.QRD_MLD, M=1),
    ]


def channel_ml(H: np.ndarray, y: np.ndarray, points: np.ndarray) -> Tuple[int, ...]:
    """argmin ||y - Hx||^2 by direct enumeration, in row order"""
    t = H.shape[1]
    candidates = np.array(list(itertools.product(range(points.size), repeat=t)), dtype=np.int64)
    residuals = y[None, :] - points[candidates] @ H.T
    objective = np.sum(residuals.real ** 2 + residuals.imag ** 2, axis=1)
    return tuple(int(v) for v in candidates[int(np.argmin(objective))])


def metric_consistent(stored: float, rescored: float) -> bool:
    return math.isclose(stored, rescored, rel_tol=METRIC_TOLERANCE, abs_tol=1e-12)


def verify_case(
    case: VerificationCase,
    instances: int,
    seed: int,
    case_index: int,
    snr_range: Tuple[float, float] = (0.0, 25.0),
    corrupt_metric: bool = False,
) -> CaseReport:
    constellation = make_qam(case.order)
    report = CaseReport(case=case)
    exact = exact_detectors(case.t, case.order)
    heuristic = heuristic_detectors()
    report.exact = {cfg.label: 0 for cfg in exact}
    report.heuristic = {cfg.label: 0 for cfg in heuristic}

    for instance in range(instances):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), case_index, instance]))
        snr_db = float(rng.uniform(*snr_range))
        channel = draw_usable_channel(rng, case.t, case.r, 1)
        x = constellation.points[draw_indices(constellation, rng, case.t)]
        variance = noise_variance(snr_db, case.t, constellation.energy)
        y = transmit(channel, x, draw_noise(rng, case.r, variance))
        oracle = channel_ml(channel.H, y, constellation.points)

        for cfg in exact + heuristic:
            ctx = OpCounters()
            problem = DetectionProblem.from_channel(channel.H, y, constellation, ctx)
            result = detect(problem, cfg.with_noise_variance(variance), ctx)
            metric = result.metrics[0]
            if corrupt_metric:
                metric = metric * (1.0 + 1e-6) + 1e-6
            if not metric_consistent(metric, problem.objective(result.indices[0])):
                report.metric_failures += 1
            if result.indices[0] == oracle:
                bucket = report.exact if cfg.label in report.exact else report.heuristic
                bucket[cfg.label] += 1
        report.instances += 1

    logger.info(f"{'✅' if report.passed else '❌'} {case.name}: {report.instances} instances checked")
    return report


def check_noise_calibration(seed: int, snr_db: float, symbols: int = 100000, t: int = 4, order: int = 16) -> float:
    """
    Measured receive-side SNR (dB) over `symbols` receive samples.

    Every signal gets a fresh CN(0, 1) channel; the symbols, the noise and
    y = Hx + z come from the same functions the sweep uses.
    """
    constellation = make_qam(order)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 9999]))
    variance = noise_variance(snr_db, t, constellation.energy)

    received, noise = [], []
    for _ in range(max(1, symbols // t)):
        H = complex_gaussian(rng, (t, t))
        x = constellation.points[draw_indices(constellation, rng, t)]
        z = draw_noise(rng, t, variance)
        received.append(transmit(H, x, z) - z)
        noise.append(z)
    return measure_snr_db(np.concatenate(received), np.concatenate(noise))


def run_verification(
    instances: int = 1000,
    seed: int = 1,
    extended: bool = False,
    corrupt_metric: bool = False,
    calibration_points: Sequence[float] = (15.0, 25.0),
) -> VerificationReport:
    """Run the exactness suite and the noise calibration check"""
    cases = list(STANDARD_CASES) + (list(EXTENDED_CASES) if extended else [])
    report = VerificationReport()
    for case_index, case in enumerate(cases):
        report.cases.append(verify_case(case, instances, seed, case_index, corrupt_metric=corrupt_metric))
    for snr_db in calibration_points:
        report.calibration.append((float(snr_db), check_noise_calibration(seed, snr_db)))
    return report
