#!/usr/bin/env python3
"""
MIMO Detection Command Line

Subcommands:
    sweep   run an SNR sweep and write CSV (plus optional gnuplot and results store)
    verify  run the desk-scale exactness checks; exit 1 on any mismatch
    single  detect one random signal and print the decision with its counters

Exit codes: 0 success, 1 verification or output failure, 2 configuration error.

Usage:
    python scripts/detection_cli.py sweep --signals 10000 --snr 15,20,25 --output results/4x4.csv
    python scripts/detection_cli.py sweep --config experiments/6x6.cfg --workers 4
    python scripts/detection_cli.py verify --instances 1000
"""

import sys
from pathlib import Path
from typing import Optional

import click
from loguru import logger

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.append(str(project_root))

from src.constellation import draw_indices, make_qam
from src.channel import draw_noise, noise_variance, transmit
from src.detectors import Algorithm, DetectionProblem, DetectorConfig, detect
from src.exceptions import ConfigInvalid, DetectionError, ExportError
from src.linalg import OpCounters
from src.settings import configure_logging, settings
from src.simulation import emit_csv, emit_gnuplot, overrides_to_text, parse_config, run_sweep, run_verification
from src.simulation.harness import block_generator, draw_usable_channel

EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _fail_config(error: Exception):
    logger.error(f"❌ Configuration error: {error}")
    click.echo(f"configuration error: {error}", err=True)
    sys.exit(EXIT_CONFIG)


@click.group()
@click.option("--log-level", default=None, help="Override MIMO_LOG_LEVEL")
def cli(log_level: Optional[str]):
    """Tree-search MIMO detectors with exact operation counts."""
    configure_logging(level=log_level)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="key=value experiment file; flags below win over it")
@click.option("--t", "t", type=int, help="Transmit antennas")
@click.option("--r", "r", type=int, help="Receive antennas")
@click.option("--order", type=int, help="QAM order (4, 16, 64, ...)")
@click.option("--snr", help="Comma-separated SNR grid in dB")
@click.option("--signals", type=int, help="Signals per SNR point")
@click.option("--fading-block", type=int, help="Signals per channel draw")
@click.option("--M", "breadth", type=int, help="QRD-MLD survivors per depth")
@click.option("--X", "threshold", type=float, help="Improved QRD-MLD threshold factor")
@click.option("--L", "list_sizes", help="Comma-separated Dijkstra list bounds")
@click.option("--N", "n_best", type=int, help="Candidates output per detector")
@click.option("--seed", type=int, help="Experiment seed")
@click.option("--detectors", help="Comma-separated detector names")
@click.option("--workers", type=int, default=None, help="Worker processes (default MIMO_WORKERS)")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="CSV path (default <MIMO_RESULTS_DIR>/sweep.csv)")
@click.option("--gnuplot", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Also write a gnuplot column file")
@click.option("--db", "database_url", default=None, help="Store the run in this database URL")
@click.option("--progress/--no-progress", default=False, help="Show a progress bar")
def sweep(config_path, t, r, order, snr, signals, fading_block, breadth, threshold, list_sizes, n_best,
          seed, detectors, workers, output, gnuplot, database_url, progress):
    """Run an SNR sweep and write the result table."""
    base = config_path.read_text(encoding="utf-8") if config_path else ""
    overrides = overrides_to_text({
        "t": t,
        "r": r,
        "order": order,
        "snr": snr,
        "signals": signals,
        "fading_block": fading_block,
        "M": breadth,
        "X": threshold,
        "L": list_sizes,
        "N": n_best,
        "seed": seed,
        "detectors": detectors,
    })
    try:
        cfg = parse_config(base + "\n" + overrides)
    except ConfigInvalid as e:
        _fail_config(e)

    output = output or settings.results_dir / "sweep.csv"
    try:
        result = run_sweep(cfg, workers=workers, progress=progress)
        emit_csv(result, output)
        click.echo(f"wrote {output}")
        if gnuplot:
            emit_gnuplot(result, gnuplot)
            click.echo(f"wrote {gnuplot}")
    except ConfigInvalid as e:
        _fail_config(e)
    except ExportError as e:
        logger.error(f"❌ {e}")
        click.echo(f"output error: {e}", err=True)
        sys.exit(EXIT_FAILURE)
    except DetectionError as e:
        logger.error(f"❌ Sweep failed: {e}")
        click.echo(f"detection error: {e}", err=True)
        sys.exit(EXIT_FAILURE)

    if database_url:
        from sqlalchemy.exc import SQLAlchemyError

        from src.database import get_db, init_database, save_sweep

        try:
            db_config = init_database(database_url)
        except ConfigInvalid as e:
            _fail_config(e)
        except SQLAlchemyError as e:
            logger.error(f"❌ Results store unavailable: {e}")
            click.echo(f"database error: {e}", err=True)
            sys.exit(EXIT_FAILURE)
        try:
            for db in get_db(db_config):
                run = save_sweep(db, result, label=output.stem)
                click.echo(f"stored run {run.id}")
        except SQLAlchemyError as e:
            logger.error(f"❌ Could not store the run: {e}")
            click.echo(f"database error: {e}", err=True)
            sys.exit(EXIT_FAILURE)
        finally:
            db_config.close_connection()


@cli.command()
@click.option("--instances", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--extended", is_flag=True, help="Also check 3x3 QPSK and 2x2 16-QAM")
@click.option("--corrupt-metric", is_flag=True, hidden=True)
def verify(instances, seed, extended, corrupt_metric):
    """Check exact detectors against direct enumeration."""
    report = run_verification(instances=instances, seed=seed, extended=extended, corrupt_metric=corrupt_metric)
    for line in report.summary_lines():
        click.echo(line)
    if not report.passed:
        click.echo("verification FAILED", err=True)
        sys.exit(EXIT_FAILURE)
    click.echo("verification passed")


@cli.command()
@click.option("--t", "t", type=int, default=4, show_default=True)
@click.option("--r", "r", type=int, default=None, help="Defaults to t")
@click.option("--order", type=int, default=16, show_default=True)
@click.option("--snr", type=float, default=20.0, show_default=True)
@click.option("--algorithm", type=click.Choice([a.value for a in Algorithm]),
              default=Algorithm.DIJKSTRA_BOUNDED.value, show_default=True)
@click.option("--M", "breadth", type=int, default=16, show_default=True)
@click.option("--X", "threshold", type=float, default=2.0, show_default=True)
@click.option("--L", "list_size", type=int, default=16, show_default=True)
@click.option("--N", "n_best", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--trace", is_flag=True, help="Print the survivor trace")
def single(t, r, order, snr, algorithm, breadth, threshold, list_size, n_best, seed, trace):
    """Detect one random signal and print the outcome."""
    r = r or t
    try:
        constellation = make_qam(order)
        rng = block_generator(seed, 0, 0)
        channel = draw_usable_channel(rng, t, r, 1)
        x_indices = draw_indices(constellation, rng, t)
        variance = noise_variance(snr, t, constellation.energy)
        y = transmit(channel, constellation.points[x_indices], draw_noise(rng, r, variance))
        cfg = DetectorConfig(
            algorithm=Algorithm(algorithm), M=breadth, X=threshold, L=list_size, N=n_best, noise_variance=variance
        )
    except (ConfigInvalid, ValueError) as e:
        _fail_config(e)

    ctx = OpCounters()
    try:
        problem = DetectionProblem.from_channel(channel.H, y, constellation, ctx)
        result = detect(problem, cfg, ctx, record_trace=trace)
    except DetectionError as e:
        logger.error(f"❌ Detection failed: {e}")
        click.echo(f"detection failed: {e}", err=True)
        sys.exit(EXIT_FAILURE)

    transmitted = tuple(int(v) for v in x_indices)
    click.echo(f"detector: {cfg.label}")
    click.echo(f"transmitted: {transmitted}")
    for rank, (indices, metric) in enumerate(zip(result.indices, result.metrics), start=1):
        marker = " *" if tuple(indices) == transmitted else ""
        click.echo(f"candidate {rank}: {tuple(indices)} metric={metric:.6g}{marker}")
    for name, value in result.counters.as_dict().items():
        click.echo(f"{name}: {value}")
    if trace and result.trace is not None:
        for step, survivors in enumerate(result.trace, start=1):
            click.echo(f"step {step}: {len(survivors)} survivors {list(survivors)[:8]}")


if __name__ == "__main__":
    cli()
