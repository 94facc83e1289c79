# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Workbook report of a run: one sheet per fidelity curve plus a summary."""

import io
import logging
from collections.abc import Mapping, Sequence
from datetime import datetime
from pathlib import Path

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter
from slugify import slugify

logger = logging.getLogger(__name__)

# Excel limits sheet titles to 31 characters.
_SHEET_TITLE_LIMIT = 31

Curve = tuple[float, float]


def _sheet_title(name: str) -> str:
    """Create a sheet title from a curve name."""
    return slugify(name, lowercase=True, separator="_")[:_SHEET_TITLE_LIMIT]


class RunReportGenerator:
    """Collects curves and summary values and renders them as xlsx."""

    def __init__(self, title: str) -> None:
        """Initialize an empty report.

        Args:
            title: Heading written on the summary sheet.
        """
        self.title = title
        self.curves: dict[str, tuple[tuple[str, str], Sequence[Curve]]] = {}
        self.summary: dict[str, float | int | str] = {}

    def add_curve(
        self,
        name: str,
        rows: Sequence[tuple[float, float]],
        header: tuple[str, str] = ("t_over_tau", "fidelity"),
    ) -> None:
        """Add a two-column curve as its own sheet."""
        self.curves[name] = (header, rows)

    def add_summary(self, values: Mapping[str, float | int | str]) -> None:
        """Add key-value pairs to the summary sheet."""
        self.summary.update(values)

    def _create_excel(self) -> bytes:
        """Create the workbook."""
        wb = Workbook()
        ws = wb.active
        ws.title = "Summary"

        header_font = Font(bold=True, color="FFFFFF")
        header_fill = PatternFill(
            start_color="4472C4", end_color="4472C4", fill_type="solid"
        )
        header_alignment = Alignment(horizontal="center", vertical="center")
        border = Border(
            left=Side(style="thin"),
            right=Side(style="thin"),
            top=Side(style="thin"),
            bottom=Side(style="thin"),
        )

        ws.merge_cells("A1:B1")
        title_cell = ws["A1"]
        title_cell.value = self.title
        title_cell.font = Font(bold=True, size=14)
        title_cell.alignment = Alignment(horizontal="center")
        ws["A2"] = f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M')}"

        header_row = 4
        for col, header in enumerate(("Quantity", "Value"), 1):
            cell = ws.cell(row=header_row, column=col, value=header)
            cell.font = header_font
            cell.fill = header_fill
            cell.alignment = header_alignment
            cell.border = border
        for idx, (key, value) in enumerate(self.summary.items(), 1):
            row = header_row + idx
            ws.cell(row=row, column=1, value=key).border = border
            ws.cell(row=row, column=2, value=value).border = border
        for col, width in enumerate((28, 22), 1):
            ws.column_dimensions[get_column_letter(col)].width = width

        for name, (header, rows) in self.curves.items():
            sheet = wb.create_sheet(_sheet_title(name))
            for col, label in enumerate(header, 1):
                cell = sheet.cell(row=1, column=col, value=label)
                cell.font = header_font
                cell.fill = header_fill
                cell.alignment = header_alignment
            for idx, (x, y) in enumerate(rows, 2):
                sheet.cell(row=idx, column=1, value=float(x))
                sheet.cell(row=idx, column=2, value=float(y)).number_format = "0.000000"
            for col in (1, 2):
                sheet.column_dimensions[get_column_letter(col)].width = 16

        output = io.BytesIO()
        wb.save(output)
        return output.getvalue()

    def write(self, directory: Path) -> Path:
        """Write the workbook as ``<slug of title>.xlsx`` into ``directory``."""
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{slugify(self.title, lowercase=True, separator='_')}.xlsx"
        path.write_bytes(self._create_excel())
        logger.info(f"Wrote {path}")
        return path
