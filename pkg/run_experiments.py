#!/usr/bin/env python3
"""
Detection Experiment Pipeline

This script runs the complete detector comparison:
1. Environment setup (log and result directories)
2. Exactness verification against direct enumeration
3. 4x4 16-QAM SNR sweep
4. 6x6 16-QAM SNR sweep
5. Summary report of the complexity and error-rate orderings
"""

import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import click
from loguru import logger

from src.exceptions import DetectionError
from src.settings import configure_logging, settings
from src.simulation import SweepResult, emit_csv, emit_gnuplot, parse_config, run_sweep, run_verification

SETUPS = {
    "4x4": "t = 4\nr = 4\norder = 16",
    "6x6": "t = 6\nr = 6\norder = 16",
}


class DetectionExperimentRunner:
    """Orchestrates verification, sweeps and reporting."""

    def __init__(self, signals: Optional[int] = None, workers: Optional[int] = None,
                 results_dir: Optional[Path] = None, verify_instances: int = 1000):
        self.signals = signals
        self.workers = workers
        self.results_dir = Path(results_dir or settings.results_dir)
        self.verify_instances = verify_instances
        self.results: Dict[str, SweepResult] = {}

    def setup_environment(self) -> bool:
        """Create the result and log directories."""
        logger.info("🔧 Setting up environment...")
        for directory in (self.results_dir, settings.log_dir):
            Path(directory).mkdir(parents=True, exist_ok=True)
            logger.info(f"✅ Directory ready: {directory}")
        return True

    def verify_detectors(self) -> bool:
        """Exact detectors must reproduce direct enumeration."""
        logger.info("🔍 Verifying exact detectors...")
        report = run_verification(instances=self.verify_instances)
        for line in report.summary_lines():
            logger.info(line)
        if not report.passed:
            logger.error("❌ Verification failed")
        return report.passed

    def run_setup(self, name: str) -> bool:
        """Sweep one antenna setup and write its CSV and gnuplot files."""
        text = SETUPS[name]
        if self.signals:
            text += f"\nsignals = {self.signals}"
        try:
            cfg = parse_config(text)
            result = run_sweep(cfg, workers=self.workers, progress=True)
            emit_csv(result, self.results_dir / f"sweep_{name}.csv")
            emit_gnuplot(result, self.results_dir / f"sweep_{name}.dat")
        except DetectionError as e:
            logger.error(f"❌ {name} sweep failed: {e}")
            return False
        self.results[name] = result
        return True

    @staticmethod
    def orderings(result: SweepResult) -> List[str]:
        """Check the expected curve orderings of one sweep"""
        labels = result.detector_labels
        ml = next((label for label in labels if label.startswith("ml-")), None)
        lines = []
        for snr_db in result.config.snr_grid:
            dijkstra = result.point("dijkstra-L16", snr_db)
            qrd = result.point("qrd-mld-M16", snr_db)
            cheaper = (
                dijkstra.avg_muldiv < qrd.avg_muldiv
                and dijkstra.avg_nodes < qrd.avg_nodes
                and dijkstra.avg_cmps < qrd.avg_cmps
            )
            lines.append(
                f"{'✅' if cheaper else '⚠️'} {snr_db:g} dB: L=16 cost {dijkstra.avg_muldiv:.0f} muldiv, "
                f"{dijkstra.avg_nodes:.1f} nodes vs M=16 {qrd.avg_muldiv:.0f} muldiv, {qrd.avg_nodes:.1f} nodes"
            )
            if ml:
                reference = result.point(ml, snr_db)
                slack = 3.0 * max(reference.ser_stderr, dijkstra.ser_stderr)
                close = abs(dijkstra.ser - reference.ser) <= slack
                lines.append(
                    f"{'✅' if close else '⚠️'} {snr_db:g} dB: SER L=16 {dijkstra.ser:.3e} vs ML {reference.ser:.3e}"
                )
        return lines

    def generate_summary_report(self) -> None:
        """Write the ordering report to stdout and the log directory."""
        logger.info("📋 Generating summary report...")
        sections = []
        for name, result in self.results.items():
            sections.append(f"{name} 16-QAM ({result.config.signals_total} signals per point)")
            sections.extend(f"  {line}" for line in self.orderings(result))
        report = "\n".join(
            [
                "=" * 64,
                "DETECTION EXPERIMENT SUMMARY",
                f"Completed at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
                "=" * 64,
                *sections,
                "=" * 64,
                f"CSV and gnuplot files in {self.results_dir}",
            ]
        )
        click.echo(report)
        summary_path = Path(settings.log_dir) / "experiment_summary.txt"
        summary_path.write_text(report + "\n", encoding="utf-8")
        logger.info(f"✅ Summary written to {summary_path}")

    def run_complete_pipeline(self, setups=("4x4", "6x6")) -> bool:
        logger.info("🚀 Starting detection experiment pipeline...")

        steps = [("Environment Setup", self.setup_environment), ("Verification", self.verify_detectors)]
        steps.extend((f"{name} Sweep", lambda name=name: self.run_setup(name)) for name in setups)

        for step_name, step_func in steps:
            logger.info("=" * 60)
            logger.info(f"STEP: {step_name}")
            logger.info("=" * 60)
            if not step_func():
                logger.error(f"❌ Pipeline failed at step: {step_name}")
                return False

        self.generate_summary_report()
        logger.info("🎉 Experiment pipeline completed successfully!")
        return True


@click.command()
@click.option("--signals", type=int, default=None, help="Signals per SNR point (default 100000)")
@click.option("--workers", type=int, default=None, help="Worker processes (default MIMO_WORKERS)")
@click.option("--setup", "setups", type=click.Choice(sorted(SETUPS)), multiple=True,
              help="Antenna setups to sweep (default all)")
@click.option("--verify-instances", type=int, default=1000, show_default=True)
def main(signals, workers, setups, verify_instances):
    """Run verification and the 4x4 and 6x6 detector comparisons."""
    configure_logging(log_file="experiments.log")
    runner = DetectionExperimentRunner(signals=signals, workers=workers, verify_instances=verify_instances)
    success = runner.run_complete_pipeline(setups or ("4x4", "6x6"))
    sys.exit(0 if success else 1)


if __name__ == '__main__':
    main()
