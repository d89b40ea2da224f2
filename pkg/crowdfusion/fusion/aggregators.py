"""
답안 융합 규칙

- fuse_bitwise: 비트별 가중 다수결
- fuse_classwise: 클래스 단위 가중 투표
- chair_varshney_fuse: 신뢰도 로그 오즈 가중 (최적 베이즈 규칙)

Monte Carlo 엔진과 전수 오라클은 bit_margins / bit_outcomes 커널을 공유한다.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.special import logit

from crowdfusion.crowd.generator import decode_class
from crowdfusion.models.config import get_settings
from crowdfusion.models.crowd_models import (
    ONE_CODE,
    SKIP_CODE,
    ZERO_CODE,
    AnswerWord,
    class_bit_table,
    words_to_array,
)
from crowdfusion.models.errors import DegenerateReliabilityError
from crowdfusion.models.fusion_models import FusionResult, WeightKind, WeightScheme
from crowdfusion.fusion.weights import length_weights


logger = logging.getLogger(__name__)


def bit_margins(codes: np.ndarray, weights: np.ndarray):
    """비트별 가중 투표 합 S1, S0

    Args:
        codes: (..., W, N) 코드 배열
        weights: (..., W) 작업자 가중치 또는 (..., W, N) 비트별 가중치

    Returns:
        (S1, S0), 각각 (..., N)
    """
    codes = np.asarray(codes)
    weights = np.asarray(weights, dtype=float)
    if weights.ndim == codes.ndim - 1:
        weights = weights[..., None]
    s1 = np.where(codes == ONE_CODE, weights, 0.0).sum(axis=-2)
    s0 = np.where(codes == ZERO_CODE, weights, 0.0).sum(axis=-2)
    return s1, s0


def bit_outcomes(s1: np.ndarray, s0: np.ndarray, rtol: Optional[float] = None):
    """투표 합 비교

    |S1 - S0| <= rtol·(|S1| + |S0|) 이면 동점 (0 대 0 포함).

    Returns:
        (wins_one, ties) 불리언 배열
    """
    if rtol is None:
        rtol = get_settings().tie_rtol
    ties = np.abs(s1 - s0) <= rtol * (np.abs(s1) + np.abs(s0))
    wins_one = (s1 > s0) & ~ties
    return wins_one, ties


def resolve_bits(s1: np.ndarray, s0: np.ndarray, coins: np.ndarray, rtol: Optional[float] = None):
    """동점은 coins 비트로 결정한 최종 비트와 동점 마스크"""
    wins_one, ties = bit_outcomes(s1, s0, rtol)
    bits = np.where(ties, coins, wins_one).astype(np.int8)
    return bits, ties


def _fusion_result(bits: np.ndarray, ties: np.ndarray, M: int) -> FusionResult:
    tie_bits = frozenset(int(i) + 1 for i in np.flatnonzero(ties))
    return FusionResult(
        decided_bits=tuple(int(b) for b in bits),
        tie_bits=tie_bits,
        class_index=decode_class(bits, M)
    )


def _codes_or_empty(answers: Sequence[AnswerWord], N: Optional[int]) -> np.ndarray:
    if answers:
        codes = words_to_array(answers)
        if N is not None and codes.shape[1] != N:
            raise ValueError(f"answer length {codes.shape[1]} does not match N={N}")
        return codes
    if N is None:
        raise ValueError("N is required when no answers are given")
    return np.zeros((0, N), dtype=np.int8)


def fuse_bitwise(
    answers: Sequence[AnswerWord],
    scheme: WeightScheme,
    M: int,
    rng: np.random.Generator,
    weights: Optional[Sequence[float]] = None,
    N: Optional[int] = None
) -> FusionResult:
    """비트별 가중 다수결

    비트 i마다 1을 답한 작업자 가중치 합과 0을 답한 합을 비교하고,
    동점이면 rng의 공정한 동전으로 결정한다.

    Args:
        answers: 작업자 답안 목록 (비어 있으면 N 필요, 모든 비트 동점)
        scheme: 가중치 방식 (ORACLE이면 chair_varshney_fuse로 위임)
        M: 클래스 수
        rng: 난수 스트림
        weights: 외부에서 계산한 작업자별 가중치 (apply_strategy 결과)
        N: 답안 길이

    Returns:
        FusionResult
    """
    if scheme.kind is WeightKind.ORACLE and weights is None:
        return chair_varshney_fuse(answers, np.asarray(scheme.reliabilities), M, rng)

    codes = _codes_or_empty(answers, N)
    if weights is None:
        w = length_weights(codes, scheme)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (codes.shape[0],):
            raise ValueError("weights must have one entry per answer")
    coins = rng.integers(0, 2, size=codes.shape[1])
    s1, s0 = bit_margins(codes, w)
    bits, ties = resolve_bits(s1, s0, coins)
    if ties.any():
        logger.debug(f"동점 비트 {int(ties.sum())}개를 동전으로 결정")
    return _fusion_result(bits, ties, M)


def class_consistency(codes: np.ndarray, M: int) -> np.ndarray:
    """작업자 답안과 모순되지 않는 클래스 마스크 (W, M)"""
    codes = np.asarray(codes)
    table = class_bit_table(M, codes.shape[1])
    matches = (codes[:, None, :] == SKIP_CODE) | (codes[:, None, :] == table[None, :, :])
    return matches.all(axis=-1)


def fuse_classwise(
    answers: Sequence[AnswerWord],
    scheme: WeightScheme,
    M: int,
    rng: np.random.Generator,
    weights: Optional[Sequence[float]] = None
) -> int:
    """클래스 단위 가중 투표

    각 답안이 허용하는 클래스 집합 D_w에 가중치를 더하고 최고 점수 클래스를
    반환한다. 최고 점수가 여럿이면 rng로 균등 선택.

    Returns:
        결정 클래스 인덱스 (0..M-1)
    """
    codes = words_to_array(answers)
    if codes.size == 0:
        raise ValueError("answers must not be empty")
    w = length_weights(codes, scheme) if weights is None else np.asarray(weights, dtype=float)
    scores = w @ class_consistency(codes, M).astype(float)
    best = scores.max()
    rtol = get_settings().tie_rtol
    candidates = np.flatnonzero(np.abs(scores - best) <= rtol * abs(best))
    if len(candidates) == 1:
        return int(candidates[0])
    return int(candidates[rng.integers(0, len(candidates))])


def log_odds(reliabilities: np.ndarray, clip: Optional[float] = None) -> np.ndarray:
    """신뢰도 로그 오즈 log(ρ / (1 - ρ))

    clip이 주어지면 ρ를 [clip, 1 - clip]으로 제한한다.
    """
    rho = np.asarray(reliabilities, dtype=float)
    if clip is not None:
        rho = np.clip(rho, clip, 1.0 - clip)
    return logit(rho)


def chair_varshney_fuse(
    answers: Sequence[AnswerWord],
    reliabilities: np.ndarray,
    M: int,
    rng: np.random.Generator
) -> FusionResult:
    """Chair-Varshney 융합

    비트별로 1을 답한 작업자들의 로그 오즈 합과 0을 답한 합을 비교한다.

    Args:
        answers: 작업자 답안 목록
        reliabilities: (W, N) 작업자-비트별 신뢰도
        M: 클래스 수
        rng: 난수 스트림

    Returns:
        FusionResult

    Raises:
        DegenerateReliabilityError: 확정 답안의 신뢰도가 0 또는 1인 경우
    """
    codes = words_to_array(answers)
    rho = np.asarray(reliabilities, dtype=float)
    if rho.shape != codes.shape:
        raise ValueError(f"reliabilities shape {rho.shape} does not match answers {codes.shape}")
    definitive = codes != SKIP_CODE
    if np.any(definitive & ((rho <= 0.0) | (rho >= 1.0))):
        raise DegenerateReliabilityError("reliability of a definitive answer is 0 or 1; log-odds diverge")
    lo = np.where(definitive, log_odds(np.where(definitive, rho, 0.5)), 0.0)
    coins = rng.integers(0, 2, size=codes.shape[1])
    s1, s0 = bit_margins(codes, lo)
    bits, ties = resolve_bits(s1, s0, coins)
    return _fusion_result(bits, ties, M)
