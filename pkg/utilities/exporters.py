"""Export utilities for saving reports as JSON and CSV."""

import csv
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from utilities.logger import get_logger

logger = get_logger("exporters")

_NON_FINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars and arrays, enums and non-finite floats for ``json``."""
    if isinstance(value, Enum):
        return to_jsonable(value.value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def from_jsonable(value: Any) -> Any:
    """Inverse of :func:`to_jsonable` for the non-finite markers."""
    if isinstance(value, dict):
        return {k: from_jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_jsonable(v) for v in value]
    if isinstance(value, str) and value in _NON_FINITE:
        return _NON_FINITE[value]
    return value


def format_cell(value: Any) -> str:
    """CSV cell text: shortest round-trip floats, lowercase booleans, empty for ``None``."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


class ReportExporter:
    """Writes run artifacts into one output directory."""

    def __init__(self, output_dir: Union[str, Path] = "output"):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        logger.debug(f"ReportExporter initialized with output directory: {self.output_dir}")

    def save_json(self, filename: str, payload: Any) -> Path:
        filepath = self.output_dir / filename
        with open(filepath, "w", encoding="utf-8", newline="\n") as f:
            json.dump(to_jsonable(payload), f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
        logger.success(f"JSON saved to: {filepath}")
        return filepath

    def save_csv(
        self, filename: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Path:
        filepath = self.output_dir / filename
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(list(header))
            for row in rows:
                writer.writerow([format_cell(cell) for cell in row])
        logger.success(f"CSV saved to: {filepath}")
        return filepath


def load_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return from_jsonable(json.load(f))


def load_csv(path: Union[str, Path]) -> Tuple[List[str], List[List[str]]]:
    """Header and data rows as strings."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        return [], []
    return rows[0], rows[1:]


def parse_float(cell: str) -> Optional[float]:
    return None if cell == "" else float(cell)
