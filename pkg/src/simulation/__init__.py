from .config_parser import overrides_to_text, parse_config
from .export import emit_csv, emit_gnuplot, read_csv, result_frame
from .harness import (
    BlockRecord,
    TrialOutcome,
    aggregate_stats,
    run_sweep,
    run_trial,
    simulate_block,
    validate_experiment,
)
from .schemas import CSV_COLUMNS, ExperimentConfig, SweepPoint, SweepResult, default_detectors
from .verification import VerificationReport, run_verification

__all__ = [
    "BlockRecord",
    "CSV_COLUMNS",
    "ExperimentConfig",
    "SweepPoint",
    "SweepResult",
    "TrialOutcome",
    "VerificationReport",
    "aggregate_stats",
    "default_detectors",
    "emit_csv",
    "emit_gnuplot",
    "overrides_to_text",
    "parse_config",
    "read_csv",
    "result_frame",
    "run_sweep",
    "run_trial",
    "run_verification",
    "simulate_block",
    "validate_experiment",
]
