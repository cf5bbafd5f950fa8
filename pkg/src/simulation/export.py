#!/usr/bin/env python3
"""
Result export.

CSV: one row per (detector, SNR) with the columns of CSV_COLUMNS, written
with full round-trip float precision and '\\n' line endings so identical
sweeps give byte-identical files.

Gnuplot: one whitespace-separated block per detector, blocks separated by
two blank lines so `index i` selects detector i.

Figure mapping (4x4 and 6x6 setups alike): SER vs SNR -> ser (ser_stderr
for error bars); average / maximum complexity -> avg_muldiv / max_muldiv;
average / maximum detection nodes -> avg_nodes / max_nodes; average /
maximum comparisons of real numbers -> avg_cmps / max_cmps.
"""

import io
from pathlib import Path
from typing import Union

import pandas as pd
from loguru import logger

from ..exceptions import ExportError
from .schemas import CSV_COLUMNS, SweepPoint, SweepResult

INTEGER_COLUMNS = ("max_muldiv", "max_nodes", "max_cmps", "trials")


def result_frame(result: SweepResult) -> pd.DataFrame:
    """Sweep result as a DataFrame with the CSV column order"""
    frame = pd.DataFrame([point.csv_row() for point in result.points], columns=list(CSV_COLUMNS))
    for column in INTEGER_COLUMNS:
        frame[column] = frame[column].astype("int64")
    return frame


def emit_csv(result: SweepResult, path: Union[str, Path]) -> Path:
    """Write the sweep as CSV; returns the written path"""
    if not result.points:
        raise ExportError("Refusing to write an empty sweep result")
    output_path = Path(path)
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        result_frame(result).to_csv(output_path, index=False, lineterminator="\n")
    except OSError as e:
        logger.error(f"❌ Error exporting sweep results: {e}")
        raise ExportError(f"Cannot write {output_path}: {e}") from e
    logger.info(f"✅ Exported {len(result.points)} rows to {output_path}")
    return output_path


def read_csv(path: Union[str, Path]) -> SweepResult:
    """Parse a CSV written by emit_csv back into a SweepResult"""
    try:
        frame = pd.read_csv(path, float_precision="round_trip", dtype={"detector": str})
    except (OSError, pd.errors.ParserError) as e:
        raise ExportError(f"Cannot read {path}: {e}") from e
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise ExportError(f"{path} lacks columns: {', '.join(missing)}")

    points = []
    for row in frame.to_dict(orient="records"):
        values = {column: row[column] for column in CSV_COLUMNS}
        for column in INTEGER_COLUMNS:
            values[column] = int(values[column])
        for column in CSV_COLUMNS:
            if column not in INTEGER_COLUMNS and column != "detector":
                values[column] = float(values[column])
        points.append(SweepPoint(**values))
    return SweepResult(points=points)


def emit_gnuplot(result: SweepResult, path: Union[str, Path]) -> Path:
    """Write one gnuplot data block per detector"""
    frame = result_frame(result)
    columns = [column for column in CSV_COLUMNS if column != "detector"]
    buffer = io.StringIO()
    for block, label in enumerate(result.detector_labels):
        if block:
            buffer.write("\n\n")
        buffer.write(f"# detector: {label}\n")
        buffer.write("# " + " ".join(columns) + "\n")
        subset = frame.loc[frame["detector"] == label, columns]
        buffer.write(subset.to_csv(sep=" ", header=False, index=False, lineterminator="\n"))

    output_path = Path(path)
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(buffer.getvalue(), encoding="utf-8")
    except OSError as e:
        logger.error(f"❌ Error exporting gnuplot data: {e}")
        raise ExportError(f"Cannot write {output_path}: {e}") from e
    logger.info(f"✅ Exported gnuplot data to {output_path}")
    return output_path
