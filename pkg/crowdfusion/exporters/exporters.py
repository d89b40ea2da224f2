"""
Exporter 클래스 구현

- 보고서 CSV (sweep,method,pc,stderr,analytic_pc,runtime_ms) + 메타데이터 JSON
- 그림 CSV (x,method,pc,stderr,analytic_pc)
- 공식 점검 CSV
- JSON (보고서 / 결정 보고서)

CSV는 고정 열 순서, '.' 소수점, LF 줄바꿈, 유효숫자 12자리로 쓴다.
"""

import csv
import json
import logging
import os
from abc import ABC, abstractmethod
from typing import Any, Iterable, List, Optional, Sequence

from crowdfusion.analysis.audit import AUDIT_COLUMNS, AuditRow
from crowdfusion.models.report_models import ExperimentReport, ReportRow


logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["sweep", "method", "pc", "stderr", "analytic_pc", "runtime_ms"]
FIGURE_COLUMNS = ["x", "method", "pc", "stderr", "analytic_pc"]


def format_cell(value: Any) -> str:
    """CSV 셀 서식 (None은 빈 문자열, 실수는 .12g)"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _prepare_path(filepath: str, extension: str) -> str:
    if not filepath.endswith(extension):
        filepath = f"{filepath}{extension}"
    dir_path = os.path.dirname(filepath)
    if dir_path:
        os.makedirs(dir_path, exist_ok=True)
    return filepath


def _write_csv(filepath: str, fieldnames: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(filepath, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def metadata_path(filepath: str) -> str:
    """CSV 경로에 대응하는 메타데이터 JSON 경로"""
    root, _ = os.path.splitext(filepath)
    return f"{root}.meta.json"


def dump_json(data: Any, filepath: str, indent: int = 2, ensure_ascii: bool = False) -> None:
    with open(filepath, "w", encoding="utf-8", newline="") as f:
        json.dump(data, f, ensure_ascii=ensure_ascii, indent=indent, sort_keys=True)
        f.write("\n")


class BaseExporter(ABC):
    """내보내기 기본 클래스"""

    @abstractmethod
    def export(self, data: Any, filepath: str) -> str:
        """데이터를 파일로 내보내기

        Args:
            data: 내보낼 데이터
            filepath: 저장할 파일 경로

        Returns:
            저장된 파일 경로
        """
        pass

    @abstractmethod
    def get_extension(self) -> str:
        """파일 확장자 반환"""
        pass


class JSONExporter(BaseExporter):
    """JSON 형식 내보내기

    to_dict()가 있는 객체, dict, list를 받는다. 키는 정렬해서 쓴다.
    """

    def __init__(self, indent: int = 2, ensure_ascii: bool = False):
        self.indent = indent
        self.ensure_ascii = ensure_ascii

    def export(self, data: Any, filepath: str) -> str:
        filepath = _prepare_path(filepath, ".json")
        payload = data.to_dict() if hasattr(data, "to_dict") else data
        dump_json(payload, filepath, indent=self.indent, ensure_ascii=self.ensure_ascii)
        logger.info(f"JSON 저장: {filepath}")
        return filepath

    def get_extension(self) -> str:
        return ".json"


class ReportCSVExporter(BaseExporter):
    """실험 보고서 CSV 내보내기

    메타데이터는 같은 이름의 .meta.json 파일에 저장한다.
    """

    def __init__(self, write_metadata: bool = True):
        self.write_metadata = write_metadata

    @staticmethod
    def _row(row: ReportRow) -> List[Any]:
        return [row.sweep, row.method, row.pc, row.stderr, row.analytic_pc, row.runtime_ms]

    def export(self, data: ExperimentReport, filepath: str) -> str:
        filepath = _prepare_path(filepath, ".csv")
        _write_csv(filepath, REPORT_COLUMNS, (self._row(r) for r in data.rows))
        if self.write_metadata:
            dump_json(data.metadata, metadata_path(filepath))
        logger.info(f"보고서 저장: {filepath} ({len(data.rows)}행)")
        return filepath

    def get_extension(self) -> str:
        return ".csv"


class FigureCSVExporter(BaseExporter):
    """그림 데이터 CSV 내보내기 (한 곡선 또는 여러 곡선)"""

    def __init__(self, write_metadata: bool = True):
        self.write_metadata = write_metadata

    def export(self, data: ExperimentReport, filepath: str) -> str:
        filepath = _prepare_path(filepath, ".csv")
        rows = ([r.sweep, r.method, r.pc, r.stderr, r.analytic_pc] for r in data.rows)
        _write_csv(filepath, FIGURE_COLUMNS, rows)
        if self.write_metadata and data.metadata:
            dump_json(data.metadata, metadata_path(filepath))
        logger.info(f"그림 데이터 저장: {filepath} ({len(data.rows)}행)")
        return filepath

    def get_extension(self) -> str:
        return ".csv"


class AuditCSVExporter(BaseExporter):
    """공식 점검 결과 CSV 내보내기"""

    def export(self, data: Sequence[AuditRow], filepath: str) -> str:
        filepath = _prepare_path(filepath, ".csv")
        rows = ([row.to_dict()[c] for c in AUDIT_COLUMNS] for row in data)
        _write_csv(filepath, AUDIT_COLUMNS, rows)
        logger.info(f"공식 점검 보고서 저장: {filepath} ({len(data)}행)")
        return filepath

    def get_extension(self) -> str:
        return ".csv"


class ExporterFactory:
    """Exporter 팩토리 클래스"""

    _exporters = {
        "json": JSONExporter,
        "report": ReportCSVExporter,
        "csv": ReportCSVExporter,
        "figure": FigureCSVExporter,
        "audit": AuditCSVExporter
    }

    @classmethod
    def create(cls, format_type: str, **kwargs) -> BaseExporter:
        """Exporter 인스턴스 생성

        Raises:
            ValueError: 지원하지 않는 형식
        """
        format_type = format_type.lower()
        if format_type not in cls._exporters:
            raise ValueError(f"Unsupported format: {format_type}. Supported: {list(cls._exporters.keys())}")
        return cls._exporters[format_type](**kwargs)

    @classmethod
    def get_supported_formats(cls) -> List[str]:
        return list(cls._exporters.keys())


def emit_report(report: ExperimentReport, path: str, format_type: Optional[str] = None) -> str:
    """보고서 저장 (확장자 .json이면 JSON, 그 외는 보고서 CSV)

    Returns:
        저장된 파일 경로
    """
    if format_type is None:
        format_type = "json" if path.endswith(".json") else "report"
    return ExporterFactory.create(format_type).export(report, path)
