"""
Monte Carlo link-level harness.

For every SNR point the signals are split into fading blocks. Each block is
an independent work unit with its own generator seeded from
(seed, snr_index, block_index), so results do not depend on how many worker
processes run the blocks, and a run with more signals repeats the trials of
a shorter run as its prefix. Every detector in a trial sees the same (H, y).
"""

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..channel import ChannelInstance, NoiseModel, draw_channel, draw_noise, transmit
from ..constellation import Constellation, draw_indices, make_qam
from ..detectors import Algorithm, DetectionProblem, DetectorConfig, MAX_CANDIDATES, detect
from ..exceptions import ConfigInvalid, DetectionError, EmptyInput, RankDeficient
from ..linalg import OpCounters, rotate_received
from ..settings import settings
from .schemas import ExperimentConfig, SweepPoint, SweepResult

MAX_CHANNEL_DRAWS = 16


@dataclass
class TrialOutcome:
    """One detector's verdict on one received signal"""
    detector: str
    estimate: np.ndarray
    metric: float
    counters: OpCounters
    symbol_errors: int
    input_digest: str


@dataclass
class BlockRecord:
    """Per-trial counters of one fading block, keyed by detector label"""
    snr_index: int
    block_index: int
    signals: int
    muldiv: Dict[str, List[int]] = field(default_factory=dict)
    nodes: Dict[str, List[int]] = field(default_factory=dict)
    comparisons: Dict[str, List[int]] = field(default_factory=dict)
    errors: Dict[str, List[int]] = field(default_factory=dict)


def _digest(*arrays: np.ndarray) -> str:
    hasher = hashlib.sha256()
    for array in arrays:
        hasher.update(np.ascontiguousarray(array).tobytes())
    return hasher.hexdigest()[:16]


def run_trial(
    channel: ChannelInstance,
    x: np.ndarray,
    z: np.ndarray,
    detectors: Sequence[DetectorConfig],
    constellation: Constellation,
) -> List[TrialOutcome]:
    """
    Transmit x over the channel and run every detector on the same (H, y).

    Each detector owns its counters, which include the rotation xi = Q*y.
    Symbol errors are counted per antenna position.
    """
    y = transmit(channel, x, z)
    outcomes: List[TrialOutcome] = []
    reference_digest = None
    for cfg in detectors:
        ctx = OpCounters()
        problem = DetectionProblem(R=channel.R, xi=rotate_received(channel.Q, y, ctx), constellation=constellation)
        digest = _digest(channel.H, y, problem.R, problem.xi)
        if reference_digest is None:
            reference_digest = digest
        elif digest != reference_digest:
            raise DetectionError(f"Detector {cfg.label} received different inputs within one trial")
        result = detect(problem, cfg, ctx)
        outcomes.append(
            TrialOutcome(
                detector=cfg.label,
                estimate=result.best,
                metric=result.metrics[0],
                counters=ctx,
                symbol_errors=int(np.count_nonzero(result.best != x)),
                input_digest=digest,
            )
        )
    return outcomes


def aggregate_stats(values: Iterable) -> Tuple[float, int]:
    """Arithmetic mean and maximum of per-trial counts"""
    data = list(values)
    if not data:
        raise EmptyInput("Cannot aggregate an empty list of counters")
    if all(isinstance(v, (int, np.integer)) for v in data):
        total = sum(int(v) for v in data)
        return total / len(data), max(int(v) for v in data)
    return math.fsum(float(v) for v in data) / len(data), max(data)


def block_generator(seed: int, snr_index: int, block_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(snr_index), int(block_index)]))


def draw_usable_channel(rng: np.random.Generator, t: int, r: int, block_length: int) -> ChannelInstance:
    """Draw until the channel has full column rank"""
    for attempt in range(1, MAX_CHANNEL_DRAWS + 1):
        try:
            return draw_channel(rng, t, r, block_length)
        except RankDeficient as e:
            logger.warning(f"⚠️ Redrawing degenerate channel (attempt {attempt}): {e}")
    raise RankDeficient(f"No usable channel after {MAX_CHANNEL_DRAWS} draws")


def simulate_block(
    cfg: ExperimentConfig,
    detectors: Sequence[DetectorConfig],
    snr_index: int,
    block_index: int,
    signals: int,
    trial_log: Optional[list] = None,
) -> BlockRecord:
    """Run one fading block of `signals` trials at cfg.snr_grid[snr_index]"""
    constellation = make_qam(cfg.order)
    noise = NoiseModel.from_snr(cfg.snr_grid[snr_index], cfg.t, constellation.energy)
    rng = block_generator(cfg.seed, snr_index, block_index)
    channel = draw_usable_channel(rng, cfg.t, cfg.r, signals)

    record = BlockRecord(snr_index=snr_index, block_index=block_index, signals=signals)
    for cfg_detector in detectors:
        for series in (record.muldiv, record.nodes, record.comparisons, record.errors):
            series[cfg_detector.label] = []

    for position in range(signals):
        x = constellation.points[draw_indices(constellation, rng, cfg.t)]
        z = draw_noise(rng, cfg.r, noise.variance)
        for outcome in run_trial(channel, x, z, detectors, constellation):
            record.muldiv[outcome.detector].append(outcome.counters.complex_mul_div)
            record.nodes[outcome.detector].append(outcome.counters.detection_nodes)
            record.comparisons[outcome.detector].append(outcome.counters.real_comparisons)
            record.errors[outcome.detector].append(outcome.symbol_errors)
            if trial_log is not None:
                trial_log.append(
                    {
                        "snr_index": snr_index,
                        "block_index": block_index,
                        "position": position,
                        "detector": outcome.detector,
                        "estimate": tuple(complex(v) for v in outcome.estimate),
                        "metric": outcome.metric,
                        **outcome.counters.as_dict(),
                    }
                )
        channel = channel.consume()
    return record


def _simulate_unit(unit) -> BlockRecord:
    cfg, detectors, snr_index, block_index, signals = unit
    return simulate_block(cfg, detectors, snr_index, block_index, signals)


def _block_sizes(signals_total: int, fading_block: int) -> List[int]:
    full, remainder = divmod(signals_total, fading_block)
    return [fading_block] * full + ([remainder] if remainder else [])


def validate_experiment(cfg: ExperimentConfig) -> None:
    """Checks that depend on several fields at once"""
    if not cfg.detectors:
        raise ConfigInvalid("At least one detector is required")
    labels = [d.label for d in cfg.detectors]
    duplicates = sorted({label for label in labels if labels.count(label) > 1})
    if duplicates:
        raise ConfigInvalid(f"Duplicate detectors: {', '.join(duplicates)}")
    if cfg.r < cfg.t:
        raise ConfigInvalid(f"r must be >= t (got r={cfg.r}, t={cfg.t})")
    for detector in cfg.detectors:
        if Algorithm(detector.algorithm) == Algorithm.BRUTE_FORCE_ML and cfg.order ** cfg.t > MAX_CANDIDATES:
            raise ConfigInvalid(f"Brute-force ML over {cfg.order}^{cfg.t} candidates exceeds the enumeration limit")


def _point(label: str, snr_db: float, t: int, muldiv, nodes, comparisons, errors) -> SweepPoint:
    avg_muldiv, max_muldiv = aggregate_stats(muldiv)
    avg_nodes, max_nodes = aggregate_stats(nodes)
    avg_cmps, max_cmps = aggregate_stats(comparisons)
    trials = len(errors)
    symbol_errors = int(sum(errors))
    symbols = trials * t
    ser = symbol_errors / symbols
    return SweepPoint(
        detector=label,
        snr_db=float(snr_db),
        ser=ser,
        ser_stderr=math.sqrt(ser * (1.0 - ser) / symbols),
        avg_muldiv=avg_muldiv,
        max_muldiv=max_muldiv,
        avg_nodes=avg_nodes,
        max_nodes=max_nodes,
        avg_cmps=avg_cmps,
        max_cmps=max_cmps,
        trials=trials,
        symbol_errors=symbol_errors,
    )


def run_sweep(
    cfg: ExperimentConfig,
    workers: Optional[int] = None,
    progress: bool = False,
    trial_log: Optional[list] = None,
) -> SweepResult:
    """
    Run every detector over the SNR grid.

    Averages are means over signals and maxima are per-signal maxima. The
    result is identical for any worker count.

    Args:
        cfg: validated experiment configuration
        workers: worker processes (defaults to MIMO_WORKERS)
        progress: show a tqdm progress bar over fading blocks
        trial_log: if given, receives one dict per (trial, detector); forces serial execution

    Raises:
        ConfigInvalid: on inconsistent configurations
    """
    validate_experiment(cfg)
    workers = workers or settings.workers
    constellation = make_qam(cfg.order)
    sizes = _block_sizes(cfg.signals_total, cfg.fading_block)

    units = []
    for snr_index, snr_db in enumerate(cfg.snr_grid):
        noise = NoiseModel.from_snr(snr_db, cfg.t, constellation.energy)
        detectors = [d.with_noise_variance(noise.variance) for d in cfg.detectors]
        for block_index, signals in enumerate(sizes):
            units.append((cfg, detectors, snr_index, block_index, signals))

    logger.info(
        f"🚀 Sweep {cfg.t}x{cfg.r} {constellation.name}: {len(cfg.snr_grid)} SNR points, "
        f"{cfg.signals_total} signals each, {len(cfg.detectors)} detectors, {workers} worker(s)"
    )

    bar = tqdm(total=len(units), desc="fading blocks", disable=not progress)
    records: List[BlockRecord] = []
    if workers > 1 and trial_log is None:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for record in executor.map(_simulate_unit, units, chunksize=max(1, len(units) // (4 * workers))):
                records.append(record)
                bar.update(1)
    else:
        for unit in units:
            cfg_unit, detectors, snr_index, block_index, signals = unit
            records.append(simulate_block(cfg_unit, detectors, snr_index, block_index, signals, trial_log))
            bar.update(1)
    bar.close()

    points: List[SweepPoint] = []
    for snr_index, snr_db in enumerate(cfg.snr_grid):
        block_records = [record for record in records if record.snr_index == snr_index]
        block_records.sort(key=lambda record: record.block_index)
        for detector in cfg.detectors:
            label = detector.label
            point = _point(
                label,
                snr_db,
                cfg.t,
                [v for record in block_records for v in record.muldiv[label]],
                [v for record in block_records for v in record.nodes[label]],
                [v for record in block_records for v in record.comparisons[label]],
                [v for record in block_records for v in record.errors[label]],
            )
            points.append(point)
        summary = ", ".join(
            f"{p.detector}: SER={p.ser:.3e} nodes={p.avg_nodes:.1f}"
            for p in points[-len(cfg.detectors):]
        )
        logger.info(f"📈 SNR {snr_db:g} dB | {summary}")

    logger.info("✅ Sweep completed")
    return SweepResult(points=points, config=cfg)
