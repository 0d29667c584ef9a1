"""
Experiment Results
Row tables produced by the case studies and their CSV serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from src.core.exceptions import OutputError
from src.core.logger import get_logger

logger = get_logger(__name__)

COMM_COLUMNS = ("arch", "snr_db", "mean_se_bps_hz", "std_se", "trials")
SENSE_COLUMNS = ("arch", "snr_db", "rmse_deg", "crb_deg", "trials")
COMPLEXITY_COLUMNS = ("arch", "M", "N", "K", "L", "count")

# Shared CSV dialect: header row, comma separator, '.' decimal, LF endings
_CSV_OPTIONS: dict[str, Any] = {"index": False, "float_format": "%.12g", "lineterminator": "\n"}


@dataclass
class ExperimentResult:
    """
    Rows of one experiment, in the order they were produced.

    failed_trials counts Monte Carlo trials excluded from the aggregates.
    """

    name: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    failed_trials: int = 0

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(tuple(values))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=list(self.columns))

    def column(self, name: str, arch: str | None = None) -> list[Any]:
        """Values of one column, optionally restricted to one architecture."""
        frame = self.to_frame()
        if arch is not None:
            frame = frame[frame["arch"] == arch]
        return frame[name].tolist()

    def write_csv(self, path: Path) -> Path:
        """
        Write the table as CSV.

        Raises:
            OutputError: If the file cannot be written
        """
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self.to_frame().to_csv(path, **_CSV_OPTIONS)
        except OSError as exc:
            raise OutputError(f"Cannot write {path}", str(exc)) from exc
        logger.info(f"Wrote {len(self.rows)} rows to {path}")
        return path
