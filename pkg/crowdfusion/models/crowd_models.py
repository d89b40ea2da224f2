"""
크라우드 도메인 모델 정의

- AnswerSymbol: 마이크로태스크 답안 기호 (0 / 1 / λ)
- AnswerWord: 작업자 한 명의 N-기호 답안
- WorkerProfile: 작업자별 스킵 확률, 신뢰도, 탐욕 여부
- DistributionSpec: 스킵 확률/신뢰도 분포 (고정값 또는 균등분포)
- CrowdModel: 크라우드 모집단 파라미터 (W, N, M, 분포, α)
- TruthWord: 정답 클래스와 이진 부호
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np


# 배열 표현에서 사용하는 기호 코드
ZERO_CODE = 0
ONE_CODE = 1
SKIP_CODE = 2


class AnswerSymbol(Enum):
    """답안 기호. SKIP은 거부 기호 λ"""
    ZERO = "0"
    ONE = "1"
    SKIP = "λ"

    @property
    def code(self) -> int:
        """배열 코드 (0, 1, 2)"""
        return _SYMBOL_TO_CODE[self]

    @property
    def is_definitive(self) -> bool:
        return self is not AnswerSymbol.SKIP

    @classmethod
    def from_code(cls, code: int) -> "AnswerSymbol":
        try:
            return _CODE_TO_SYMBOL[int(code)]
        except KeyError:
            raise ValueError(f"unknown symbol code: {code}") from None


_SYMBOL_TO_CODE = {AnswerSymbol.ZERO: ZERO_CODE, AnswerSymbol.ONE: ONE_CODE, AnswerSymbol.SKIP: SKIP_CODE}
_CODE_TO_SYMBOL = {code: symbol for symbol, code in _SYMBOL_TO_CODE.items()}


def greedy_count(W: int, alpha: float) -> int:
    """탐욕 작업자 수 round(W·α), 0.5는 올림"""
    return int(math.floor(W * alpha + 0.5))


@dataclass(frozen=True)
class AnswerWord:
    """작업자 한 명의 답안 단어

    - worker_id: 작업자 인덱스
    - symbols: 길이 N의 답안 기호 시퀀스
    """
    worker_id: int
    symbols: Tuple[AnswerSymbol, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("symbols must not be empty")
        # 리스트로 들어와도 불변 튜플로 고정
        object.__setattr__(self, "symbols", tuple(self.symbols))

    @property
    def length(self) -> int:
        return len(self.symbols)

    @property
    def n_definitive(self) -> int:
        """λ가 아닌 확정 답안 수 n"""
        return sum(1 for s in self.symbols if s.is_definitive)

    @property
    def is_full_length(self) -> bool:
        """스킵이 하나도 없는 답안인지 여부"""
        return self.n_definitive == self.length

    def to_codes(self) -> np.ndarray:
        """기호 코드 배열 (int8)로 변환"""
        return np.array([s.code for s in self.symbols], dtype=np.int8)

    @classmethod
    def from_codes(cls, worker_id: int, codes: Sequence[int]) -> "AnswerWord":
        return cls(worker_id=worker_id, symbols=tuple(AnswerSymbol.from_code(c) for c in codes))

    def to_dict(self) -> dict:
        """딕셔너리로 변환"""
        return {
            "worker_id": self.worker_id,
            "symbols": [s.value for s in self.symbols]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnswerWord":
        """딕셔너리에서 객체 생성"""
        return cls(
            worker_id=data["worker_id"],
            symbols=tuple(AnswerSymbol(s) for s in data["symbols"])
        )


def words_to_array(words: Sequence[AnswerWord]) -> np.ndarray:
    """답안 단어 목록을 (W, N) 코드 배열로 변환

    Raises:
        ValueError: 답안 길이가 서로 다른 경우
    """
    if not words:
        return np.zeros((0, 0), dtype=np.int8)
    length = words[0].length
    for word in words:
        if word.length != length:
            raise ValueError(
                f"inconsistent answer length: worker {word.worker_id} has {word.length}, expected {length}"
            )
    return np.stack([w.to_codes() for w in words])


@dataclass(frozen=True)
class WorkerProfile:
    """작업자 프로필

    - skip_probs: 마이크로태스크별 λ 제출 확률 p_{w,i}
    - reliabilities: 확정 답안이 맞을 확률 ρ_{w,i}
    - greedy: 탐욕 작업자 여부 (스킵 없음, 정답 확률 1/2)
    """
    skip_probs: Tuple[float, ...]
    reliabilities: Tuple[float, ...]
    greedy: bool = False

    def __post_init__(self):
        object.__setattr__(self, "skip_probs", tuple(float(p) for p in self.skip_probs))
        object.__setattr__(self, "reliabilities", tuple(float(r) for r in self.reliabilities))
        if len(self.skip_probs) != len(self.reliabilities):
            raise ValueError("skip_probs and reliabilities must have the same length")
        for value in self.skip_probs + self.reliabilities:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"probabilities must be in [0, 1], got {value}")
        if self.greedy:
            if any(p != 0.0 for p in self.skip_probs) or any(r != 0.5 for r in self.reliabilities):
                raise ValueError("greedy profile must have skip_probs 0 and reliabilities 0.5")

    @property
    def length(self) -> int:
        return len(self.skip_probs)

    @classmethod
    def greedy_profile(cls, N: int) -> "WorkerProfile":
        """탐욕 작업자 프로필 생성"""
        return cls(skip_probs=(0.0,) * N, reliabilities=(0.5,) * N, greedy=True)

    def to_dict(self) -> dict:
        return {
            "skip_probs": list(self.skip_probs),
            "reliabilities": list(self.reliabilities),
            "greedy": self.greedy
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WorkerProfile":
        return cls(
            skip_probs=tuple(data["skip_probs"]),
            reliabilities=tuple(data["reliabilities"]),
            greedy=data.get("greedy", False)
        )


class DistributionKind(Enum):
    """분포 종류"""
    FIXED = "fixed"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class DistributionSpec:
    """확률 파라미터 분포 (F_P, F_ρ)

    FIXED는 value, UNIFORM은 [lo, hi] 구간을 사용한다.
    """
    kind: DistributionKind
    value: float = 0.0
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.kind is DistributionKind.FIXED:
            if not 0.0 <= self.value <= 1.0:
                raise ValueError(f"fixed value must be in [0, 1], got {self.value}")
        else:
            if not 0.0 <= self.lo <= self.hi <= 1.0:
                raise ValueError(f"uniform bounds must satisfy 0 <= lo <= hi <= 1, got ({self.lo}, {self.hi})")

    @classmethod
    def fixed(cls, value: float) -> "DistributionSpec":
        return cls(kind=DistributionKind.FIXED, value=float(value))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DistributionSpec":
        return cls(kind=DistributionKind.UNIFORM, lo=float(lo), hi=float(hi))

    @property
    def mean(self) -> float:
        if self.kind is DistributionKind.FIXED:
            return self.value
        return (self.lo + self.hi) / 2.0

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """분포에서 독립 표본 추출"""
        if self.kind is DistributionKind.FIXED:
            return np.full(size, self.value, dtype=float)
        return rng.uniform(self.lo, self.hi, size=size)

    def to_dict(self) -> dict:
        if self.kind is DistributionKind.FIXED:
            return {"kind": self.kind.value, "value": self.value}
        return {"kind": self.kind.value, "lo": self.lo, "hi": self.hi}

    @classmethod
    def from_dict(cls, data: dict) -> "DistributionSpec":
        kind = DistributionKind(data["kind"])
        if kind is DistributionKind.FIXED:
            return cls.fixed(data["value"])
        return cls.uniform(data["lo"], data["hi"])

    def __str__(self) -> str:
        if self.kind is DistributionKind.FIXED:
            return f"Fixed({self.value:g})"
        return f"U({self.lo:g},{self.hi:g})"


@dataclass(frozen=True)
class CrowdModel:
    """크라우드 모집단 파라미터

    - W: 작업자 수
    - N: 마이크로태스크 수 (N >= ceil(log2 M))
    - M: 클래스 수
    - p_dist: 스킵 확률 분포 (평균 m)
    - rho_dist: 신뢰도 분포 (평균 μ)
    - alpha: 탐욕 작업자 비율
    """
    W: int
    N: int
    M: int
    p_dist: DistributionSpec = field(default_factory=lambda: DistributionSpec.uniform(0.0, 1.0))
    rho_dist: DistributionSpec = field(default_factory=lambda: DistributionSpec.uniform(0.5, 1.0))
    alpha: float = 0.0

    def __post_init__(self):
        if self.W < 1:
            raise ValueError(f"W must be >= 1, got {self.W}")
        if self.M < 2:
            raise ValueError(f"M must be >= 2, got {self.M}")
        required = math.ceil(math.log2(self.M))
        if self.N < required:
            raise ValueError(f"N must be >= ceil(log2 M) = {required}, got {self.N}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    @property
    def m(self) -> float:
        """스킵 확률 평균"""
        return self.p_dist.mean

    @property
    def mu(self) -> float:
        """신뢰도 평균"""
        return self.rho_dist.mean

    @property
    def n_greedy(self) -> int:
        return greedy_count(self.W, self.alpha)

    @property
    def n_honest(self) -> int:
        return self.W - self.n_greedy

    def to_dict(self) -> dict:
        return {
            "W": self.W,
            "N": self.N,
            "M": self.M,
            "p_dist": self.p_dist.to_dict(),
            "rho_dist": self.rho_dist.to_dict(),
            "alpha": self.alpha,
            "n_greedy": self.n_greedy
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CrowdModel":
        return cls(
            W=data["W"],
            N=data["N"],
            M=data["M"],
            p_dist=DistributionSpec.from_dict(data["p_dist"]),
            rho_dist=DistributionSpec.from_dict(data["rho_dist"]),
            alpha=data.get("alpha", 0.0)
        )


@dataclass(frozen=True)
class TruthWord:
    """정답 클래스와 그 이진 부호 (첫 비트가 MSB)"""
    class_index: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        if value != self.class_index:
            raise ValueError(f"bits {self.bits} do not encode class {self.class_index}")

    @property
    def length(self) -> int:
        return len(self.bits)

    def to_dict(self) -> dict:
        return {"class_index": self.class_index, "bits": list(self.bits)}


INVALID_CODEWORD = -1
"""decode_class가 존재하지 않는 클래스에 대해 반환하는 표식 (오분류로 집계)"""


def class_bit_table(M: int, N: int) -> np.ndarray:
    """클래스 0..M-1의 이진 부호 표 (M, N)"""
    classes = np.arange(M, dtype=np.int64)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((classes[:, None] >> shifts[None, :]) & 1).astype(np.int8)


def bits_to_class(bits: np.ndarray) -> np.ndarray:
    """(..., N) 비트 배열을 정수 값으로 변환"""
    bits = np.asarray(bits, dtype=np.int64)
    N = bits.shape[-1]
    weights = 1 << np.arange(N - 1, -1, -1, dtype=np.int64)
    return bits @ weights


def profiles_to_arrays(profiles: List[WorkerProfile]) -> Tuple[np.ndarray, np.ndarray]:
    """프로필 목록을 (W, N) 스킵 확률 / 신뢰도 배열로 변환"""
    skip = np.array([p.skip_probs for p in profiles], dtype=float)
    rho = np.array([p.reliabilities for p in profiles], dtype=float)
    return skip, rho
