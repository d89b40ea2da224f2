"""
실험 보고서 데이터 모델

- ReportRow: (스윕 값, 방법, P̂_c, 표준오차, 해석 P_c, 실행 시간) 한 행
- ExperimentReport: 행 목록과 메타데이터
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

SweepValue = Union[float, str, None]


def standard_error(pc: float, trials: int) -> float:
    """√(P̂(1-P̂)/trials)"""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return math.sqrt(max(pc * (1.0 - pc), 0.0) / trials)


@dataclass
class ReportRow:
    """보고서 한 행

    - sweep: 스윕 파라미터 값 (스윕이 없으면 None)
    - method: 방법 레이블
    - pc: P_c 추정값 (0~1)
    - stderr: Monte Carlo 표준오차 (해석값만 있는 행은 None)
    - analytic_pc: 해석 P_c (없으면 None)
    - runtime_ms: 실행 시간 (record_runtime일 때만)
    """
    sweep: SweepValue
    method: str
    pc: float
    stderr: Optional[float] = None
    analytic_pc: Optional[float] = None
    runtime_ms: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.pc <= 1.0:
            raise ValueError(f"pc must be in [0, 1], got {self.pc}")
        if self.stderr is not None and self.stderr < 0:
            raise ValueError(f"stderr must be non-negative, got {self.stderr}")

    def to_dict(self) -> dict:
        return {
            "sweep": self.sweep,
            "method": self.method,
            "pc": self.pc,
            "stderr": self.stderr,
            "analytic_pc": self.analytic_pc,
            "runtime_ms": self.runtime_ms
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReportRow":
        return cls(
            sweep=data.get("sweep"),
            method=data["method"],
            pc=data["pc"],
            stderr=data.get("stderr"),
            analytic_pc=data.get("analytic_pc"),
            runtime_ms=data.get("runtime_ms")
        )


@dataclass
class ExperimentReport:
    """실험 보고서

    metadata에는 설정 원본, 시드, 버전 문자열 등이 들어간다.
    """
    rows: List[ReportRow] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def methods(self) -> List[str]:
        """등장 순서를 유지한 방법 레이블 목록"""
        seen: List[str] = []
        for row in self.rows:
            if row.method not in seen:
                seen.append(row.method)
        return seen

    def curve(self, method: str) -> List[ReportRow]:
        """한 방법의 행만 반환"""
        return [row for row in self.rows if row.method == method]

    def extend(self, other: "ExperimentReport") -> None:
        self.rows.extend(other.rows)

    def to_dict(self) -> dict:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "metadata": self.metadata
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentReport":
        return cls(
            rows=[ReportRow.from_dict(r) for r in data.get("rows", [])],
            metadata=dict(data.get("metadata", {}))
        )
