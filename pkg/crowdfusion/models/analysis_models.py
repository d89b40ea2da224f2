"""
분석용 데이터 모델 정의

- ProfileCount: 기준 비트에 대한 부호 있는 답안 길이별 작업자 수 Q
- TwPmf: 작업자 한 명의 가중 투표 T_w 확률질량함수
- AsymptoticMoments: 가중 투표 합의 평균/분산
"""

from dataclasses import dataclass
from typing import Dict, Tuple


@dataclass(frozen=True)
class ProfileCount:
    """프로필 Q = (q_{-N}, ..., q_N)

    q_n (n > 0)은 기준 비트에 1을 투표하고 확정 답안이 n개인 작업자 수,
    q_{-n}은 0을 투표한 작업자 수, q_0은 기준 비트를 스킵한 작업자 수이다.
    """
    q: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(v) for v in self.q))
        if len(self.q) % 2 != 1:
            raise ValueError("q must have odd length 2N+1")
        if any(v < 0 for v in self.q):
            raise ValueError("q entries must be non-negative")

    @property
    def N(self) -> int:
        return (len(self.q) - 1) // 2

    @property
    def total(self) -> int:
        return sum(self.q)

    def count(self, n: int) -> int:
        """q_n 조회 (n은 -N..N)"""
        if not -self.N <= n <= self.N:
            raise IndexError(f"n must be within -{self.N}..{self.N}, got {n}")
        return self.q[n + self.N]

    def to_dict(self) -> dict:
        return {"q": list(self.q)}


@dataclass(frozen=True)
class TwPmf:
    """T_w 확률질량함수

    support는 0, ±μ^-n (n=1..N) 값을 담고, probs_h1/probs_h0는
    같은 순서의 H1/H0 하 확률이다.
    """
    mu: float
    m: float
    N: int
    support: Tuple[float, ...]
    probs_h1: Tuple[float, ...]
    probs_h0: Tuple[float, ...]

    def __post_init__(self):
        if not len(self.support) == len(self.probs_h1) == len(self.probs_h0):
            raise ValueError("support and probability vectors must align")

    def prob(self, value: float, hypothesis: int) -> float:
        """지지점 value의 확률 (hypothesis는 0 또는 1)"""
        probs = self.probs_h1 if hypothesis == 1 else self.probs_h0
        for point, p in zip(self.support, probs):
            if point == value:
                return p
        return 0.0

    def as_dict(self, hypothesis: int) -> Dict[float, float]:
        probs = self.probs_h1 if hypothesis == 1 else self.probs_h0
        return dict(zip(self.support, probs))

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "m": self.m,
            "N": self.N,
            "support": list(self.support),
            "probs_h1": list(self.probs_h1),
            "probs_h0": list(self.probs_h0)
        }


@dataclass(frozen=True)
class AsymptoticMoments:
    """가중 투표 합의 평균 M과 분산 V (V는 0 아래로 내려가지 않도록 보정)"""
    mean: float
    variance: float

    def __post_init__(self):
        if self.variance < -1e-12:
            raise ValueError(f"variance must be non-negative, got {self.variance}")
        if self.variance < 0:
            object.__setattr__(self, "variance", 0.0)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "variance": self.variance}
