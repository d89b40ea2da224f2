"""
Unit tests for Exporter classes
"""
import os
import json
import csv
import tempfile
import shutil
import pytest
from crowdfusion.analysis.audit import AUDIT_COLUMNS, AuditRow
from crowdfusion.exporters.exporters import (
    FIGURE_COLUMNS,
    REPORT_COLUMNS,
    AuditCSVExporter,
    ExporterFactory,
    FigureCSVExporter,
    JSONExporter,
    ReportCSVExporter,
    emit_report,
    format_cell,
    metadata_path,
)
from crowdfusion.models.fusion_models import StrategyKind
from crowdfusion.models.report_models import ExperimentReport, ReportRow, standard_error

@pytest.fixture
def temp_dir():
    temp_path = tempfile.mkdtemp()
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)

@pytest.fixture
def sample_report():
    rows = [
        ReportRow(sweep=0.1, method="oblivious", pc=0.75, stderr=0.0125, analytic_pc=0.7512, runtime_ms=12.5),
        ReportRow(sweep=0.1, method="expurgation", pc=0.5, stderr=0.02),
        ReportRow(sweep=0.2, method="oblivious", pc=0.7, stderr=0.013, analytic_pc=0.69),
    ]
    return ExperimentReport(rows=rows, metadata={"seed": 7, "runs": 1000})

def _read_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.reader(f))

class TestFormatCell:
    def test_none_is_empty(self):
        assert format_cell(None) == ""

    def test_bool(self):
        assert format_cell(True) == "true"
        assert format_cell(False) == "false"

    def test_float_precision(self):
        assert format_cell(0.1 + 0.2) == "0.3"
        assert format_cell(1.0 / 3.0) == "0.333333333333"

    def test_enum_uses_value(self):
        assert format_cell(StrategyKind.EXPURGATION) == "expurgation"

    def test_int_and_str(self):
        assert format_cell(3) == "3"
        assert format_cell("honest") == "honest"

class TestJSONExporter:
    def test_export_creates_json_file(self, temp_dir, sample_report):
        exporter = JSONExporter()
        result_path = exporter.export(sample_report, os.path.join(temp_dir, "report"))
        assert os.path.exists(result_path)
        assert result_path.endswith(".json")

    def test_export_json_structure(self, temp_dir, sample_report):
        filepath = JSONExporter().export(sample_report, os.path.join(temp_dir, "report.json"))
        with open(filepath, "r", encoding="utf-8") as f:
            data = json.load(f)
        assert data["metadata"] == {"seed": 7, "runs": 1000}
        assert len(data["rows"]) == 3
        assert data["rows"][1]["analytic_pc"] is None

    def test_report_survives_json(self, temp_dir, sample_report):
        filepath = JSONExporter().export(sample_report, os.path.join(temp_dir, "report.json"))
        with open(filepath, "r", encoding="utf-8") as f:
            restored = ExperimentReport.from_dict(json.load(f))
        assert restored.rows == sample_report.rows
        assert restored.methods() == ["oblivious", "expurgation"]

    def test_plain_dict_and_trailing_newline(self, temp_dir):
        filepath = JSONExporter().export({"b": 1, "a": "λ"}, os.path.join(temp_dir, "plain.json"))
        with open(filepath, "r", encoding="utf-8") as f:
            text = f.read()
        assert text.endswith("}\n")
        assert text.index('"a"') < text.index('"b"')
        assert "λ" in text

    def test_get_extension(self):
        assert JSONExporter().get_extension() == ".json"

class TestReportCSVExporter:
    def test_columns_and_rows(self, temp_dir, sample_report):
        filepath = ReportCSVExporter().export(sample_report, os.path.join(temp_dir, "out", "report"))
        rows = _read_csv(filepath)
        assert rows[0] == REPORT_COLUMNS
        assert rows[1] == ["0.1", "oblivious", "0.75", "0.0125", "0.7512", "12.5"]
        assert rows[2] == ["0.1", "expurgation", "0.5", "0.02", "", ""]
        assert len(rows) == 4

    def test_lf_line_endings(self, temp_dir, sample_report):
        filepath = ReportCSVExporter().export(sample_report, os.path.join(temp_dir, "report.csv"))
        with open(filepath, "rb") as f:
            raw = f.read()
        assert b"\r\n" not in raw
        assert raw.endswith(b"\n")

    def test_metadata_sidecar(self, temp_dir, sample_report):
        filepath = ReportCSVExporter().export(sample_report, os.path.join(temp_dir, "report.csv"))
        meta = metadata_path(filepath)
        assert meta.endswith("report.meta.json")
        with open(meta, "r", encoding="utf-8") as f:
            assert json.load(f) == {"runs": 1000, "seed": 7}

    def test_metadata_can_be_disabled(self, temp_dir, sample_report):
        filepath = ReportCSVExporter(write_metadata=False).export(sample_report, os.path.join(temp_dir, "report.csv"))
        assert not os.path.exists(metadata_path(filepath))

    def test_empty_report(self, temp_dir):
        filepath = ReportCSVExporter().export(ExperimentReport(), os.path.join(temp_dir, "empty.csv"))
        assert _read_csv(filepath) == [REPORT_COLUMNS]

class TestFigureCSVExporter:
    def test_columns(self, temp_dir, sample_report):
        filepath = FigureCSVExporter().export(sample_report, os.path.join(temp_dir, "fig2.csv"))
        rows = _read_csv(filepath)
        assert rows[0] == FIGURE_COLUMNS
        assert rows[3] == ["0.2", "oblivious", "0.7", "0.013", "0.69"]

    def test_no_metadata_without_content(self, temp_dir):
        report = ExperimentReport(rows=[ReportRow(sweep=1.0, method="honest", pc=0.9)])
        filepath = FigureCSVExporter().export(report, os.path.join(temp_dir, "fig.csv"))
        assert not os.path.exists(metadata_path(filepath))

class TestAuditCSVExporter:
    def test_export(self, temp_dir):
        rows = [
            AuditRow(strategy=StrategyKind.OBLIVIOUS, mu=0.8, m=0.4, alpha=0.0, verbatim=0.9, corrected=0.9, oracle=0.9),
            AuditRow(strategy=StrategyKind.EXPURGATION, mu=0.8, m=0.4, alpha=0.5, verbatim=0.6, corrected=0.7, oracle=0.7),
        ]
        filepath = AuditCSVExporter().export(rows, os.path.join(temp_dir, "audit"))
        data = _read_csv(filepath)
        assert data[0] == AUDIT_COLUMNS
        assert data[1][0] == "oblivious"
        assert data[1][-1] == "true"
        assert data[2][-1] == "false"

class TestExporterFactory:
    @pytest.mark.parametrize("name,cls", [
        ("json", JSONExporter),
        ("report", ReportCSVExporter),
        ("CSV", ReportCSVExporter),
        ("figure", FigureCSVExporter),
        ("audit", AuditCSVExporter),
    ])
    def test_create(self, name, cls):
        assert isinstance(ExporterFactory.create(name), cls)

    def test_kwargs_are_forwarded(self):
        exporter = ExporterFactory.create("report", write_metadata=False)
        assert exporter.write_metadata is False

    def test_unsupported_format(self):
        with pytest.raises(ValueError) as exc_info:
            ExporterFactory.create("xml")
        assert "Unsupported format" in str(exc_info.value)

    def test_supported_formats(self):
        assert set(ExporterFactory.get_supported_formats()) == {"json", "report", "csv", "figure", "audit"}

class TestEmitReport:
    def test_json_by_extension(self, temp_dir, sample_report):
        filepath = emit_report(sample_report, os.path.join(temp_dir, "r.json"))
        with open(filepath, "r", encoding="utf-8") as f:
            assert "rows" in json.load(f)

    def test_csv_by_default(self, temp_dir, sample_report):
        filepath = emit_report(sample_report, os.path.join(temp_dir, "r"))
        assert filepath.endswith(".csv")
        assert _read_csv(filepath)[0] == REPORT_COLUMNS

class TestReportModels:
    def test_standard_error(self):
        assert standard_error(0.5, 100) == pytest.approx(0.05)
        assert standard_error(1.0, 10) == 0.0
        with pytest.raises(ValueError):
            standard_error(0.5, 0)

    def test_row_validation(self):
        with pytest.raises(ValueError):
            ReportRow(sweep=None, method="x", pc=1.2)
        with pytest.raises(ValueError):
            ReportRow(sweep=None, method="x", pc=0.5, stderr=-0.1)

    def test_curve_and_extend(self, sample_report):
        other = ExperimentReport(rows=[ReportRow(sweep=0.3, method="honest", pc=0.8)])
        sample_report.extend(other)
        assert [r.sweep for r in sample_report.curve("oblivious")] == [0.1, 0.2]
        assert sample_report.methods() == ["oblivious", "expurgation", "honest"]
