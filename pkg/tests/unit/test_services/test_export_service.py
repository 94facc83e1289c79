# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Unit tests for CSV, summary, plot-script and workbook output."""
import numpy as np
from openpyxl import load_workbook

from src.models.grid import Grid
from src.services import export_service
from src.services.report_generator import RunReportGenerator


class TestFormatting:
    """Test number formatting and file naming."""

    def test_format_number(self):
        """Test 12 significant digits and plain integers."""
        assert export_service.format_number(0.1) == "0.1"
        assert export_service.format_number(1 / 3) == "0.333333333333"
        assert export_service.format_number(7) == "7"
        assert export_service.format_number(True) == "true"
        assert export_service.format_number(1.5e-9) == "1.5e-09"

    def test_output_name(self):
        """Test slugified names."""
        assert export_service.output_name("sweep_T_F") == "sweep_t_f.csv"
        assert export_service.output_name("trace", "step2", suffix=".gp") == (
            "trace_step2.gp"
        )


class TestWriteCsv:
    """Test CSV output."""

    def test_content(self, tmp_path):
        """Test the header, rows and line endings."""
        path = export_service.write_csv(
            tmp_path / "trace.csv",
            ("t_over_tau", "fidelity"),
            [(0.0, 1.0), (0.5, 0.25)],
        )

        assert path.read_bytes() == b"t_over_tau,fidelity\n0,1\n0.5,0.25\n"

    def test_deterministic(self, tmp_path):
        """Test that identical input gives identical bytes."""
        rows = [(0.1 * i, np.sin(i)) for i in range(50)]
        a = export_service.write_csv(tmp_path / "a.csv", ("x", "y"), rows)
        b = export_service.write_csv(tmp_path / "b.csv", ("x", "y"), rows)

        assert a.read_bytes() == b.read_bytes()

    def test_field(self, tmp_path):
        """Test one row per grid point with coordinates first."""
        grid = Grid.build({"x": (0.0, 1.0), "z": (1.0, 2.0)}, 2)
        values = np.array([[1.0, 2.0], [3.0, 4.0]])

        path = export_service.write_field(tmp_path / "f.csv", grid, {"v_er": values})

        lines = path.read_text().splitlines()
        assert lines[0] == "x,z,v_er"
        assert lines[1:] == ["0,1,1", "0,1.5,2", "0.5,1,3", "0.5,1.5,4"]


class TestWriteSummary:
    """Test the summary files."""

    def test_text_and_key_value(self, tmp_path):
        """Test both renderings of the same values."""
        text, kv = export_service.write_summary(
            tmp_path, "Gate budget", {"T_overall_ms": 8.4627, "F_overall": 0.9227}
        )

        assert kv.read_text() == "T_overall_ms=8.4627\nF_overall=0.9227\n"
        assert text.read_text().startswith("Gate budget\n===========\n")


class TestWriteGnuplot:
    """Test plot scripts."""

    def test_script_references_data(self, tmp_path):
        """Test that the script plots the CSV next to it."""
        path = export_service.write_gnuplot(
            tmp_path / "sweep.gp", "sweep.csv", "T_F", "fidelity", "Step 1"
        )

        script = path.read_text()
        assert "plot 'sweep.csv' using 1:2" in script
        assert "set output 'sweep.png'" in script


class TestRunReportGenerator:
    """Test the xlsx report."""

    def test_sheets(self, tmp_path):
        """Test a summary sheet plus one sheet per curve."""
        report = RunReportGenerator("atomgate step1")
        report.add_curve("trace_step1", [(0.0, 0.5), (1.0, 0.99)])
        report.add_summary({"fidelity": 0.99, "dips": 12})

        path = report.write(tmp_path)

        assert path.name == "atomgate_step1.xlsx"
        workbook = load_workbook(path)
        assert workbook.sheetnames == ["Summary", "trace_step1"]
        curve = workbook["trace_step1"]
        assert curve["A1"].value == "t_over_tau"
        assert curve["B3"].value == 0.99
        assert workbook["Summary"]["B5"].value == 0.99
