"""
탐욕 작업자 대응 전략

- Oblivious: 모든 답안을 μ^-n 가중치로 사용 (Honest와 동일한 필터)
- Expurgation: 스킵이 하나도 없는 답안을 버리고 (μx)^-n 가중치 사용
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from crowdfusion.models.crowd_models import SKIP_CODE, AnswerWord
from crowdfusion.models.fusion_models import StrategyKind, WeightScheme
from crowdfusion.fusion.weights import compute_weight, solve_x


logger = logging.getLogger(__name__)


def strategy_scheme(kind: StrategyKind, mu: float, m: Optional[float] = None, N: Optional[int] = None) -> WeightScheme:
    """전략에 대응하는 가중치 방식

    Raises:
        ValueError: EXPURGATION에 m 또는 N이 없는 경우
        LimitUndefinedError: EXPURGATION에서 m = 0
    """
    if kind is StrategyKind.EXPURGATION:
        if m is None or N is None:
            raise ValueError("expurgation requires m and N")
        return WeightScheme.expurgation(mu, solve_x(m, N))
    return WeightScheme.reject_weighted(mu)


def apply_strategy(
    answers: Sequence[AnswerWord],
    kind: StrategyKind,
    mu: float,
    m: Optional[float] = None
) -> Tuple[List[AnswerWord], List[float]]:
    """전략 필터와 가중치 적용

    Args:
        answers: 작업자 답안 목록
        kind: 전략
        mu: 신뢰도 평균 (추정값)
        m: 스킵 확률 평균 (EXPURGATION에 필요)

    Returns:
        (유지된 답안, 답안별 가중치). EXPURGATION은 빈 목록을 반환할 수 있다.
    """
    if not answers:
        return [], []
    N = answers[0].length
    scheme = strategy_scheme(kind, mu, m, N)
    if kind is StrategyKind.EXPURGATION:
        retained = [word for word in answers if not word.is_full_length]
        dropped = len(answers) - len(retained)
        if dropped:
            logger.debug(f"Expurgation: 전체 길이 답안 {dropped}개 제외")
        if not retained:
            logger.warning("Expurgation 후 남은 답안이 없습니다. 모든 비트가 동점으로 결정됩니다.")
    else:
        retained = list(answers)
    return retained, [compute_weight(scheme, word) for word in retained]


def strategy_weights(codes: np.ndarray, kind: StrategyKind, base) -> np.ndarray:
    """(..., W, N) 코드 배열의 전략 가중치 (..., W)

    Args:
        codes: (..., W, N) 코드 배열
        kind: 전략
        base: 가중치 밑 (스칼라 또는 시행별 (...,) 배열, 예: scheme.base)

    EXPURGATION에서 버려진 답안은 가중치 0 (투표 합에서 제외와 동일).
    """
    codes = np.asarray(codes)
    n = (codes != SKIP_CODE).sum(axis=-1)
    base = np.asarray(base, dtype=float)
    if base.ndim:
        base = base[..., None]
    weights = np.power(base, -n.astype(float))
    if kind is StrategyKind.EXPURGATION:
        weights = np.where(n == codes.shape[-1], 0.0, weights)
    return weights
