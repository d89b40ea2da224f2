"""
작업자 답안 가중치

- 거부 가중 방식: W_w = μ^-n
- Expurgation 방식: W_w = (μx)^-n, x는 정규화 식의 근
- 균등 방식: W_w = 1

정규화 상수(K, β 등)는 모든 작업자에 공통인 배수라 결정에 영향이 없으므로 생략한다.
"""

import logging

import numpy as np

from crowdfusion.models.crowd_models import SKIP_CODE, AnswerWord
from crowdfusion.models.errors import LimitUndefinedError, UnsupportedSchemeError
from crowdfusion.models.fusion_models import WeightKind, WeightScheme


logger = logging.getLogger(__name__)


def compute_weight(scheme: WeightScheme, word: AnswerWord) -> float:
    """답안 단어 하나의 가중치 계산

    Args:
        scheme: 가중치 방식
        word: 작업자 답안

    Returns:
        음이 아닌 가중치

    Raises:
        UnsupportedSchemeError: ORACLE 방식 (비트별 로그 오즈는 chair_varshney_fuse에서 적용)
    """
    if scheme.kind is WeightKind.ORACLE:
        raise UnsupportedSchemeError("oracle weights are applied per bit inside chair_varshney_fuse")
    return float(scheme.base ** (-word.n_definitive))


def length_weights(codes: np.ndarray, scheme: WeightScheme) -> np.ndarray:
    """(..., W, N) 코드 배열의 작업자별 가중치 (..., W)"""
    if scheme.kind is WeightKind.ORACLE:
        raise UnsupportedSchemeError("oracle weights are applied per bit inside chair_varshney_fuse")
    n = (np.asarray(codes) != SKIP_CODE).sum(axis=-1)
    return np.power(scheme.base, -n.astype(float))


def solve_x(m: float, N: int) -> float:
    """Expurgation 정규화 근 x

    (1 - m + m·x)^N - (1 - m)^N = 1 을 만족하는 양의 x.

    Args:
        m: 스킵 확률 평균 (0 < m <= 1)
        N: 마이크로태스크 수

    Returns:
        x = ((1 + (1-m)^N)^(1/N) + m - 1) / m

    Raises:
        LimitUndefinedError: m = 0 (아무도 스킵하지 않아 식이 0/0)
    """
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if m == 0.0:
        raise LimitUndefinedError("x is undefined at m = 0")
    return ((1.0 + (1.0 - m) ** N) ** (1.0 / N) + m - 1.0) / m


def normalization_residual(x: float, m: float, N: int) -> float:
    """(1 - m + m·x)^N - (1 - m)^N - 1"""
    return (1.0 - m + m * x) ** N - (1.0 - m) ** N - 1.0

