# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Bit-stable CSV, summary and plot-script output."""

import csv
import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

import numpy as np
from slugify import slugify

from src.models.grid import Grid

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


def format_number(value: float | int) -> str:
    """Render a number with 12 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.{SIGNIFICANT_DIGITS}g}"


def output_name(*parts: str, suffix: str = ".csv") -> str:
    """File name built from slugified parts."""
    return slugify("_".join(parts), lowercase=True, separator="_") + suffix


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[float | int]]
) -> Path:
    """Write a header row and numeric rows with '\\n' line endings."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
    logger.info(f"Wrote {path}")
    return path


def write_field(
    path: Path, grid: Grid, columns: Mapping[str, np.ndarray]
) -> Path:
    """Coordinates of every grid point followed by one column per field."""
    mesh = grid.cartesian()
    coords = [mesh["xyz".index(name)].ravel() for name in grid.names]
    values = [np.asarray(field, dtype=float).ravel() for field in columns.values()]
    rows = zip(*coords, *values, strict=True)
    return write_csv(path, (*grid.names, *columns.keys()), rows)


def write_summary(
    directory: Path, title: str, values: Mapping[str, float | int | str]
) -> tuple[Path, Path]:
    """Human-readable summary.txt and machine-readable summary.kv."""
    directory.mkdir(parents=True, exist_ok=True)
    width = max((len(key) for key in values), default=0)
    text_lines = [title, "=" * len(title)]
    kv_lines = []
    for key, value in values.items():
        rendered = value if isinstance(value, str) else format_number(value)
        text_lines.append(f"{key.ljust(width)}  {rendered}")
        kv_lines.append(f"{key}={rendered}")
    text_path = directory / "summary.txt"
    kv_path = directory / "summary.kv"
    text_path.write_text("\n".join(text_lines) + "\n", encoding="utf-8")
    kv_path.write_text("\n".join(kv_lines) + "\n", encoding="utf-8")
    logger.info(f"Wrote {text_path} and {kv_path}")
    return text_path, kv_path


def write_gnuplot(
    path: Path, data_file: str, x_label: str, y_label: str, title: str
) -> Path:
    """Line-plot script for a two-column CSV next to it."""
    script = "\n".join(
        [
            "set datafile separator ','",
            "set key off",
            f"set title {title!r}",
            f"set xlabel {x_label!r}",
            f"set ylabel {y_label!r}",
            "set terminal pngcairo size 800,500",
            f"set output {str(Path(data_file).with_suffix('.png'))!r}",
            f"plot {data_file!r} using 1:2 every ::1 with lines lw 2",
            "",
        ]
    )
    path.write_text(script, encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
