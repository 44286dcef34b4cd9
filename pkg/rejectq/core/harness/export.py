"""
CSV and JSON result files.

Only seeded quantities are written, so two runs with the same configuration
produce byte-identical files. Floats use ``repr`` (shortest round-trip form).
"""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from rejectq.core.config.settings import OutputFormat
from rejectq.core.errors import OutputError
from rejectq.core.harness.stats import ExperimentStats

logger = logging.getLogger("rejectq.harness")

CSV_FIELDS = (
    "param",
    "trials",
    "accept_rate",
    "accept_lo",
    "accept_hi",
    "mean_fidelity",
    "fatal_rate",
    "fatal_lo",
    "fatal_hi",
    "seed",
)


def row_dict(stats: ExperimentStats) -> Dict[str, Any]:
    return {field: getattr(stats, field) for field in CSV_FIELDS}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(rows: Sequence[ExperimentStats]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for stats in rows:
        writer.writerow([_cell(value) for value in row_dict(stats).values()])
    return buffer.getvalue()


def to_json(rows: Sequence[ExperimentStats]) -> str:
    """JSON array with the same field names as the CSV header; missing values are null."""
    records: List[Dict[str, Any]] = [row_dict(stats) for stats in rows]
    return json.dumps(records, indent=2) + "\n"


def write_results(
    rows: Sequence[ExperimentStats],
    path: Union[str, Path],
    output_format: OutputFormat = OutputFormat.CSV,
) -> Path:
    """Write result rows to ``path``, creating parent directories.

    Raises:
        OutputError: if the file cannot be written
    """
    target = Path(path)
    text = to_json(rows) if output_format is OutputFormat.JSON else to_csv(rows)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OutputError(f"Cannot write results to {target}: {e}") from e
    logger.info("Wrote %d row(s) to %s", len(rows), target)
    return target
