"""
Result Plots
Static SVG line plots, one per result CSV.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from src.core.exceptions import OutputError, ResultFormatError
from src.core.logger import get_logger
from src.evaluation.results import COMM_COLUMNS, COMPLEXITY_COLUMNS, SENSE_COLUMNS

logger = get_logger(__name__)

SCHEMAS: dict[str, tuple[str, ...]] = {
    "comm": COMM_COLUMNS,
    "sense": SENSE_COLUMNS,
    "complexity": COMPLEXITY_COLUMNS,
}

# Fixed id salt and no timestamp keep SVG output byte-stable
matplotlib.rcParams["svg.hashsalt"] = "wavebench"


def _detect_kind(path: Path, frame: pd.DataFrame) -> str:
    if path.stem in SCHEMAS:
        return path.stem
    overlap = {kind: len(set(columns) & set(frame.columns)) for kind, columns in SCHEMAS.items()}
    return max(overlap, key=overlap.get)


def read_result(path: Path) -> tuple[str, pd.DataFrame]:
    """
    Load a result CSV and check it against its schema.

    Raises:
        ResultFormatError: Naming the first missing column
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ResultFormatError(str(path), "<header>") from exc
    kind = _detect_kind(path, frame)
    for column in SCHEMAS[kind]:
        if column not in frame.columns:
            raise ResultFormatError(str(path), column)
    return kind, frame


def build_figure(kind: str, frame: pd.DataFrame) -> Figure:
    """
    Line plot for one result table.

    comm: spectral efficiency vs SNR, one line per architecture
    sense: RMSE (solid) and CRB (dashed) vs SNR on a log axis
    complexity: component count vs M on log-log axes
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for arch, group in frame.groupby("arch", sort=False):
        if kind == "comm":
            ax.plot(group["snr_db"], group["mean_se_bps_hz"], marker="o", label=arch)
        elif kind == "sense":
            (line,) = ax.plot(group["snr_db"], group["rmse_deg"], marker="o", label=f"{arch} RMSE")
            ax.plot(group["snr_db"], group["crb_deg"], linestyle="--", color=line.get_color(), label=f"{arch} CRB")
        else:
            counts = group["count"].astype(float).where(group["count"] > 0, np.nan)
            ax.plot(group["M"], counts, marker="o", label=arch)

    if kind == "comm":
        ax.set_xlabel("SNR [dB]")
        ax.set_ylabel("Spectral efficiency [bit/s/Hz]")
    elif kind == "sense":
        ax.set_xlabel("SNR [dB]")
        ax.set_ylabel("AoD error [deg]")
        ax.set_yscale("log")
    else:
        ax.set_xlabel("M (environment-facing elements)")
        ax.set_ylabel("Tunable components")
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def render_plots(csv_paths: Iterable[Path], out_dir: Path | None = None) -> list[Path]:
    """
    Render one SVG per result CSV.

    Args:
        csv_paths: Result files (comm.csv, sense.csv, complexity.csv)
        out_dir: Destination; defaults to each CSV's directory

    Returns:
        Paths of the written SVG files

    Raises:
        ResultFormatError: If a CSV lacks a required column
        OutputError: If a figure cannot be written
    """
    written = []
    for csv_path in csv_paths:
        csv_path = Path(csv_path)
        kind, frame = read_result(csv_path)
        fig = build_figure(kind, frame)
        target = Path(out_dir or csv_path.parent) / f"{csv_path.stem}.svg"
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(target, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OutputError(f"Cannot write {target}", str(exc)) from exc
        finally:
            plt.close(fig)
        logger.info(f"Plot written to {target}")
        written.append(target)
    return written
