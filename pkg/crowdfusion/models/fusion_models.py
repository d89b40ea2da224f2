"""
융합 및 추정 데이터 모델 정의

- WeightScheme: 작업자 답안 가중치 방식
- StrategyKind: 탐욕 작업자 대응 전략
- FusionResult: 비트별 융합 결과
- EstimationResult: μ, m, α 추정 결과
- LengthHistogram: 확정 답안 길이 히스토그램
- StrategyDecision: 전략 선택 결과
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

import numpy as np

from crowdfusion.models.crowd_models import SKIP_CODE


class WeightKind(Enum):
    """가중치 방식 종류"""
    UNIFORM = "uniform"
    REJECT_WEIGHTED = "reject_weighted"
    EXPURGATION = "expurgation"
    ORACLE = "oracle"


class StrategyKind(Enum):
    """탐욕 작업자 대응 전략

    - HONEST: 탐욕 작업자가 없다고 가정
    - OBLIVIOUS: 탐욕 여부를 무시하고 μ^-n 가중치 적용
    - EXPURGATION: 스킵 없는 답안을 모두 버린 뒤 (μx)^-n 가중치 적용
    """
    HONEST = "honest"
    OBLIVIOUS = "oblivious"
    EXPURGATION = "expurgation"


@dataclass(frozen=True)
class WeightScheme:
    """답안 가중치 방식

    - kind: 방식 종류
    - mu: 신뢰도 평균 (REJECT_WEIGHTED, EXPURGATION)
    - x: 정규화 근 (EXPURGATION)
    - reliabilities: (W, N) 신뢰도 표 (ORACLE)
    """
    kind: WeightKind
    mu: Optional[float] = None
    x: Optional[float] = None
    reliabilities: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        if self.kind in (WeightKind.REJECT_WEIGHTED, WeightKind.EXPURGATION):
            if self.mu is None or not 0.5 <= self.mu <= 1.0:
                raise ValueError(f"mu must be in [0.5, 1] for {self.kind.value}, got {self.mu}")
        if self.kind is WeightKind.EXPURGATION:
            if self.x is None or not self.x > 0:
                raise ValueError(f"x must be positive for expurgation, got {self.x}")
        if self.kind is WeightKind.ORACLE:
            if self.reliabilities is None:
                raise ValueError("oracle scheme requires reliabilities")
            table = tuple(tuple(float(r) for r in row) for row in self.reliabilities)
            object.__setattr__(self, "reliabilities", table)
            for row in table:
                for r in row:
                    if not 0.0 < r < 1.0:
                        raise ValueError(f"oracle reliabilities must be in (0, 1), got {r}")

    @classmethod
    def uniform(cls) -> "WeightScheme":
        return cls(kind=WeightKind.UNIFORM)

    @classmethod
    def reject_weighted(cls, mu: float) -> "WeightScheme":
        return cls(kind=WeightKind.REJECT_WEIGHTED, mu=float(mu))

    @classmethod
    def expurgation(cls, mu: float, x: float) -> "WeightScheme":
        return cls(kind=WeightKind.EXPURGATION, mu=float(mu), x=float(x))

    @classmethod
    def oracle(cls, reliabilities) -> "WeightScheme":
        return cls(kind=WeightKind.ORACLE, reliabilities=tuple(tuple(row) for row in reliabilities))

    @property
    def base(self) -> float:
        """가중치 W = base^-n 의 밑 (UNIFORM은 1)"""
        if self.kind is WeightKind.UNIFORM:
            return 1.0
        if self.kind is WeightKind.REJECT_WEIGHTED:
            return self.mu
        if self.kind is WeightKind.EXPURGATION:
            return self.mu * self.x
        raise ValueError("oracle scheme has no length-based weight")

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value}
        if self.mu is not None:
            data["mu"] = self.mu
        if self.x is not None:
            data["x"] = self.x
        return data


@dataclass(frozen=True)
class FusionResult:
    """비트별 융합 결과

    - decided_bits: 결정된 N 비트
    - tie_bits: 동전 던지기로 결정된 비트 위치 (1부터 시작)
    - class_index: 결정 클래스, 존재하지 않는 부호어면 INVALID_CODEWORD
    """
    decided_bits: Tuple[int, ...]
    tie_bits: FrozenSet[int] = field(default_factory=frozenset)
    class_index: int = -1

    def __post_init__(self):
        object.__setattr__(self, "decided_bits", tuple(int(b) for b in self.decided_bits))
        object.__setattr__(self, "tie_bits", frozenset(int(i) for i in self.tie_bits))
        N = len(self.decided_bits)
        if any(not 1 <= i <= N for i in self.tie_bits):
            raise ValueError(f"tie_bits must be within 1..{N}, got {sorted(self.tie_bits)}")

    @property
    def all_ties(self) -> bool:
        """모든 비트가 동점으로 결정되었는지 (저신뢰 결정)"""
        return len(self.tie_bits) == len(self.decided_bits)

    def to_dict(self) -> dict:
        return {
            "decided_bits": list(self.decided_bits),
            "tie_bits": sorted(self.tie_bits),
            "class_index": self.class_index
        }


@dataclass(frozen=True)
class EstimationResult:
    """파라미터 추정 결과

    - mu_hat: 신뢰도 평균 추정값
    - m_hat / alpha_hat: 스킵 확률 평균 / 탐욕 비율 추정값 (선택)
    - excluded_workers: 모든 답을 스킵한 작업자 수 ε
    - per_worker: 작업자별 r(w)
    """
    mu_hat: float
    m_hat: Optional[float] = None
    alpha_hat: Optional[float] = None
    excluded_workers: int = 0
    per_worker: Tuple[float, ...] = ()

    def __post_init__(self):
        for name in ("mu_hat", "m_hat", "alpha_hat"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.excluded_workers < 0:
            raise ValueError("excluded_workers must be non-negative")
        if self.per_worker and self.excluded_workers > len(self.per_worker):
            raise ValueError("excluded_workers cannot exceed the number of workers")

    def to_dict(self) -> dict:
        return {
            "mu_hat": self.mu_hat,
            "m_hat": self.m_hat,
            "alpha_hat": self.alpha_hat,
            "excluded_workers": self.excluded_workers
        }


@dataclass(frozen=True)
class LengthHistogram:
    """확정 답안 수 n = 0..N 별 작업자 수"""
    counts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts:
            raise ValueError("counts must cover n = 0..N")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @property
    def N(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> "LengthHistogram":
        """(W, N) 코드 배열에서 히스토그램 생성"""
        codes = np.asarray(codes)
        N = codes.shape[1]
        lengths = (codes != SKIP_CODE).sum(axis=1)
        return cls(counts=tuple(np.bincount(lengths, minlength=N + 1)[:N + 1]))

    def to_dict(self) -> dict:
        return {"counts": list(self.counts)}


@dataclass(frozen=True)
class StrategyDecision:
    """전략 선택 결과

    - threshold: 스위칭 임계값 α* ([0, 1]로 제한)
    - unclamped_threshold: 제한 전 α*
    - chosen: 선택된 전략
    """
    threshold: float
    chosen: StrategyKind
    mu_hat: float
    m_hat: float
    alpha_hat: float
    N: int
    unclamped_threshold: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "unclamped_threshold": self.unclamped_threshold,
            "chosen": self.chosen.value,
            "mu_hat": self.mu_hat,
            "m_hat": self.m_hat,
            "alpha_hat": self.alpha_hat,
            "N": self.N
        }

