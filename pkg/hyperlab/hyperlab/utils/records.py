"""
Report files: one CSV of raw trials and one JSON summary per experiment
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("experiment", "seed", "r", "C", "c", "queries", "success", "final_distance")


def plain(value: Any) -> Any:
    """numpy scalars, arrays and tuples as JSON-ready Python values"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


def format_cell(value: Any) -> str:
    value = plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _row_key(row: dict) -> tuple:
    seed = row.get("seed")
    r = row.get("r")
    return (
        math.inf if seed is None else seed,
        math.inf if r is None else r,
        str(row.get("experiment", "")),
    )


def write_trials_csv(path: Path, rows: Iterable[dict]) -> Path:
    """Write rows ordered by (seed, r); missing columns are left empty"""
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sorted(rows, key=_row_key)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in ordered:
            writer.writerow([format_cell(row.get(column)) for column in CSV_COLUMNS])
    logger.info(f"Wrote {len(ordered)} trial rows to {path}")
    return path


def write_summary_json(path: Path, summary: dict, config_hash: str, config: dict) -> Path:
    document = {"config_hash": config_hash, "config": plain(config), "summary": plain(summary)}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote summary to {path}")
    return path


def read_trials_csv(path: Path) -> list[dict[str, str]]:
    with Path(path).open(encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
