# Exporters Package
"""답안 파일 입출력 및 보고서 내보내기 모듈"""

from .answer_file import (
    parse_symbol,
    parse_answer_text,
    parse_answer_file,
    parse_gold_file,
    format_answers,
    write_answer_file
)
from .exporters import (
    REPORT_COLUMNS,
    FIGURE_COLUMNS,
    BaseExporter,
    JSONExporter,
    ReportCSVExporter,
    FigureCSVExporter,
    AuditCSVExporter,
    ExporterFactory,
    emit_report,
    format_cell,
    metadata_path
)

__all__ = [
    "parse_symbol",
    "parse_answer_text",
    "parse_answer_file",
    "parse_gold_file",
    "format_answers",
    "write_answer_file",
    "REPORT_COLUMNS",
    "FIGURE_COLUMNS",
    "BaseExporter",
    "JSONExporter",
    "ReportCSVExporter",
    "FigureCSVExporter",
    "AuditCSVExporter",
    "ExporterFactory",
    "emit_report",
    "format_cell",
    "metadata_path"
]
