"""Report store module for SemiLab.

This module persists scenario results as canonical JSON and CSV files in an
output directory. Canonical JSON has sorted keys and every float written with
17 significant digits, so identical runs produce byte-identical files.
"""
import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np

from config import settings
from core.errors import InvalidParameter, IoFailure
from core.scenarios.base import ScenarioResult
from utils.logging import get_logger

INDENT = "  "


def format_float(value: float) -> str:
    """17-significant-digit text for a float; non-finite values as names."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _plain(value: Any) -> Any:
    """Map numpy scalars, enums, tuples and complex numbers onto JSON types."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def _encode(value: Any, depth: int) -> str:
    pad = INDENT * (depth + 1)
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = format_float(value)
        return text if math.isfinite(value) else json.dumps(text)
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in value):
            return "[" + ", ".join(_encode(v, depth + 1) for v in value) + "]"
        items = [pad + _encode(v, depth + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + INDENT * depth + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(key, ensure_ascii=False)}: {_encode(value[key], depth + 1)}"
            for key in sorted(value)
        ]
        return "{\n" + ",\n".join(items) + "\n" + INDENT * depth + "}"
    raise TypeError(f"cannot encode {type(value).__name__} as JSON")


def canonical_json(data: Any) -> str:
    """Serialize ``data`` canonically (sorted keys, 17-digit floats, trailing newline)."""
    return _encode(_plain(data), 0) + "\n"


def _csv_cell(value: Any) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


class ReportStore:
    """Writer for report files under one output directory.

    Stores write from the caller's thread; the CLI emits one scenario at a
    time once the runner has gathered every result.

    Attributes:
        output_dir: Directory receiving the reports.
        formats: Enabled formats, a subset of {"json", "csv"}.
        logger: Logger for this store.
    """

    def __init__(
        self,
        output_dir: Optional[str] = None,
        formats: Sequence[str] = settings.REPORT_FORMATS
    ) -> None:
        unknown = set(formats) - set(settings.REPORT_FORMATS)
        if unknown:
            raise InvalidParameter(f"unknown report formats: {', '.join(sorted(unknown))}")
        self.output_dir = Path(output_dir or settings.OUTPUT_DIR)
        self.formats = tuple(f for f in settings.REPORT_FORMATS if f in formats)
        self.logger = get_logger("reports")

    def open(self) -> "ReportStore":
        """Create the output directory.

        Raises:
            IoFailure: If the directory cannot be created.
        """
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            self.logger.error(f"Cannot create output directory {self.output_dir}: {e}")
            raise IoFailure(f"cannot create output directory {self.output_dir}: {e}") from e
        self.logger.debug(f"Report store ready at {self.output_dir}")
        return self

    def _write(self, filename: str, text: str) -> Path:
        path = self.output_dir / filename
        try:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        except OSError as e:
            self.logger.error(f"Failed to write {path}: {e}")
            raise IoFailure(f"cannot write {path}: {e}") from e
        self.logger.debug(f"Wrote {path}")
        return path

    def write_json(self, stem: str, data: Any) -> Path:
        """Write ``<stem>.json`` canonically."""
        return self._write(f"{stem}.json", canonical_json(data))

    def write_csv(self, stem: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        """Write ``<stem>.csv`` with a header row."""
        lines: List[List[str]] = [list(header)] + [[_csv_cell(v) for v in row] for row in rows]
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(lines)
        return self._write(f"{stem}.csv", buffer.getvalue())


def emit_report(
    result: ScenarioResult,
    store: ReportStore,
    formats: Optional[Sequence[str]] = None
) -> List[Path]:
    """Write a scenario result: ``<name>.json`` plus one CSV per attached table.

    Raises:
        IoFailure: If any file cannot be written.
    """
    formats = store.formats if formats is None else formats
    written = []
    if "json" in formats:
        written.append(store.write_json(result.name, result.to_json()))
    if "csv" in formats:
        for stem in sorted(result.tables):
            table = result.tables[stem]
            written.append(store.write_csv(stem, table.header, table.rows))
    store.logger.info(f"Report for {result.name}: {', '.join(p.name for p in written) or 'nothing written'}")
    return written
