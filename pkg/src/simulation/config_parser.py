"""
Key=value experiment configuration.

    # comments and blank lines are ignored; a key may repeat, the last wins
    t = 4
    r = 4
    order = 16
    snr = 10, 15, 20, 25, 30
    signals = 100000
    fading_block = 100
    seed = 20240101
    M = 16
    X = 2
    L = 16, 5
    N = 1
    detectors = ml, qrd_mld, qrd_mld_improved, dijkstra

An empty text yields the default 4x4 16-QAM experiment.
"""

from typing import Callable, Dict, List, Mapping, Optional, Tuple

from loguru import logger
from pydantic import ValidationError

from ..detectors import Algorithm, DetectorConfig
from ..exceptions import ConfigInvalid, ParseError, RangeError
from .harness import validate_experiment
from .schemas import (
    DEFAULT_FADING_BLOCK,
    DEFAULT_L,
    DEFAULT_M,
    DEFAULT_SEED,
    DEFAULT_SIGNALS,
    DEFAULT_SNR_GRID,
    DEFAULT_X,
    ExperimentConfig,
    ml_detector,
)

DEFAULT_DETECTOR_NAMES = ("ml", "qrd_mld", "qrd_mld_improved", "dijkstra")

# Canonical key for every accepted spelling
KEY_ALIASES: Dict[str, str] = {
    "t": "t",
    "r": "r",
    "order": "order",
    "qam": "order",
    "snr": "snr",
    "snr_db": "snr",
    "snr_grid": "snr",
    "signals": "signals",
    "signals_total": "signals",
    "fading_block": "fading_block",
    "block": "fading_block",
    "seed": "seed",
    "m": "M",
    "x": "X",
    "l": "L",
    "n": "N",
    "detectors": "detectors",
}


def _to_int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _split(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _int_list(text: str) -> List[int]:
    return [_to_int(item) for item in _split(text)]


def _float_list(text: str) -> List[float]:
    return [float(item) for item in _split(text)]


def _names(text: str) -> List[str]:
    return [item.lower() for item in _split(text)]


PARSERS: Dict[str, Callable[[str], object]] = {
    "t": _to_int,
    "r": _to_int,
    "order": _to_int,
    "snr": _float_list,
    "signals": _to_int,
    "fading_block": _to_int,
    "seed": _to_int,
    "M": _to_int,
    "X": float,
    "L": _int_list,
    "N": _to_int,
    "detectors": _names,
}


def parse_lines(text: str) -> Tuple[Dict[str, object], Dict[str, int]]:
    """Parse raw key=value lines into typed values and the line each came from"""
    values: Dict[str, object] = {}
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", line=number)
        key_text, value_text = (part.strip() for part in line.split("=", 1))
        key = KEY_ALIASES.get(key_text.lower())
        if key is None:
            raise ParseError("unknown key", line=number, field=key_text)
        if not value_text:
            raise ParseError("missing value", line=number, field=key_text)
        try:
            values[key] = PARSERS[key](value_text)
        except ValueError as e:
            raise ParseError(f"invalid value {value_text!r} ({e})", line=number, field=key_text) from e
        lines[key] = number
    return values, lines


def build_detectors(
    names: List[str],
    t: int,
    order: int,
    M: int,
    X: float,
    L: List[int],
    N: int,
    line: Optional[int] = None,
) -> List[DetectorConfig]:
    detectors: List[DetectorConfig] = []
    for name in names:
        if name == "ml":
            detectors.append(ml_detector(t, order, N))
        elif name in ("bruteforce", "bruteforce_ml", "ml_bruteforce"):
            detectors.append(DetectorConfig(algorithm=Algorithm.BRUTE_FORCE_ML, N=N))
        elif name in ("ml_dijkstra", "dijkstra_unbounded"):
            detectors.append(DetectorConfig(algorithm=Algorithm.DIJKSTRA_UNBOUNDED, N=N))
        elif name in ("ml_best_first", "best_first_ml"):
            detectors.append(DetectorConfig(algorithm=Algorithm.BEST_FIRST_ML, N=N))
        elif name == "qrd_mld":
            detectors.append(DetectorConfig(algorithm=Algorithm.QRD_MLD, M=M, N=N))
        elif name == "qrd_mld_improved":
            detectors.append(DetectorConfig(algorithm=Algorithm.QRD_MLD_IMPROVED, M=M, X=X, N=N))
        elif name in ("dijkstra", "dijkstra_bounded"):
            detectors.extend(DetectorConfig(algorithm=Algorithm.DIJKSTRA_BOUNDED, L=bound, N=N) for bound in L)
        elif name == "greedy":
            detectors.append(DetectorConfig(algorithm=Algorithm.GREEDY))
        else:
            raise ParseError(f"unknown detector {name!r}", line=line, field="detectors")
    return detectors


def parse_config(text: str) -> ExperimentConfig:
    """
    Parse and validate a key=value experiment configuration.

    Raises:
        ParseError: malformed lines, unknown keys or detector names, non-numeric values
        RangeError: well-formed values outside their admissible range
    """
    values, lines = parse_lines(text or "")

    t = values.get("t", 4)
    order = values.get("order", 16)
    L = values.get("L", list(DEFAULT_L))
    if not L:
        raise RangeError("L must list at least one list size")

    try:
        detectors = build_detectors(
            values.get("detectors", list(DEFAULT_DETECTOR_NAMES)),
            t=t,
            order=order,
            M=values.get("M", DEFAULT_M),
            X=values.get("X", DEFAULT_X),
            L=L,
            N=values.get("N", 1),
            line=lines.get("detectors"),
        )
        cfg = ExperimentConfig(
            t=t,
            r=values.get("r", t),
            order=order,
            snr_grid=values.get("snr", list(DEFAULT_SNR_GRID)),
            signals_total=values.get("signals", DEFAULT_SIGNALS),
            fading_block=values.get("fading_block", DEFAULT_FADING_BLOCK),
            seed=values.get("seed", DEFAULT_SEED),
            detectors=detectors,
        )
        validate_experiment(cfg)
    except ValidationError as e:
        raise RangeError(_describe(e)) from e
    except (ParseError, RangeError):
        raise
    except ConfigInvalid as e:
        raise RangeError(str(e)) from e

    logger.debug(f"Parsed experiment config: {cfg.t}x{cfg.r}, order {cfg.order}, {len(cfg.detectors)} detectors")
    return cfg


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item.get("loc", ()))
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


def overrides_to_text(overrides: Mapping[str, object]) -> str:
    """Render CLI overrides as key=value lines that win over a config file"""
    lines = []
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, (list, tuple)):
            if not value:
                continue
            value = ", ".join(str(item) for item in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines)
