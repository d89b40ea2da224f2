"""
신뢰도 평균 μ 추정

- estimate_mu_training: 정답이 알려진 훈련 문항 T개로 추정
- estimate_mu_benchmark: 다수결 결과를 기준(benchmark)으로 삼아 추정

작업자별 r(w) = (기준과 일치한 확정 답안 수) / I(w), I(w)는 확정 답안 수.
모든 답을 스킵한 작업자 수 ε를 제외하고 μ̂ = Σ r(w) / (W - ε).
"""

import logging
from typing import Optional, Sequence

import numpy as np

from crowdfusion.models.crowd_models import ONE_CODE, SKIP_CODE, ZERO_CODE, AnswerWord, words_to_array
from crowdfusion.models.fusion_models import EstimationResult


logger = logging.getLogger(__name__)

FALLBACK_MU = 0.5


def _ratio_estimate(codes: np.ndarray, reference: np.ndarray, keep: Optional[np.ndarray] = None):
    """기준 부호 대비 r(w)와 μ̂ (배치)

    Args:
        codes: (B, W, K) 코드 배열
        reference: (B, K) 기준 비트 (SKIP_CODE는 어떤 답과도 일치하지 않음)
        keep: (B, W) 사용할 작업자 마스크

    Returns:
        (mu_hat (B,), ratios (B, W), excluded (B,))
    """
    codes = np.asarray(codes)
    if keep is None:
        keep = np.ones(codes.shape[:2], dtype=bool)
    definitive = codes != SKIP_CODE
    answered = definitive.sum(axis=-1)
    matches = (definitive & (codes == np.asarray(reference)[:, None, :])).sum(axis=-1)
    ratios = np.divide(matches, answered, out=np.zeros(answered.shape, dtype=float), where=answered > 0)
    ratios = np.where(keep, ratios, 0.0)
    all_skip = keep & (answered == 0)
    excluded = all_skip.sum(axis=-1)
    usable = keep.sum(axis=-1) - excluded
    mu_hat = np.divide(ratios.sum(axis=-1), usable, out=np.full(usable.shape, FALLBACK_MU), where=usable > 0)
    return mu_hat, ratios, excluded


def mu_training_batch(codes: np.ndarray, gold: np.ndarray) -> np.ndarray:
    """훈련 문항 기반 μ̂ 배치 계산

    Args:
        codes: (B, W, T) 훈련 문항 답안
        gold: (B, T) 훈련 문항 정답

    Returns:
        (B,) μ̂
    """
    mu_hat, _, _ = _ratio_estimate(codes, gold)
    return mu_hat


def majority_benchmark(codes: np.ndarray, coins: np.ndarray, keep: Optional[np.ndarray] = None) -> np.ndarray:
    """비가중 다수결 기준 비트 (B, N)

    모든 작업자가 스킵한 비트는 SKIP_CODE, 동점은 coins로 결정.
    """
    codes = np.asarray(codes)
    if keep is None:
        keep = np.ones(codes.shape[:2], dtype=bool)
    kept = keep[..., None]
    ones = ((codes == ONE_CODE) & kept).sum(axis=-2)
    zeros = ((codes == ZERO_CODE) & kept).sum(axis=-2)
    bench = np.where(ones > zeros, ONE_CODE, ZERO_CODE)
    bench = np.where(ones == zeros, coins, bench)
    return np.where(ones + zeros == 0, SKIP_CODE, bench).astype(np.int8)


def mu_benchmark_batch(codes: np.ndarray, coins: np.ndarray, exclude_full_length: bool = False) -> np.ndarray:
    """다수결 기준 μ̂ 배치 계산

    Args:
        codes: (B, W, N) 답안
        coins: (B, N) 동점 결정 비트
        exclude_full_length: 스킵 없는 답안을 기준/비율 계산에서 제외

    Returns:
        (B,) μ̂
    """
    codes = np.asarray(codes)
    keep = None
    if exclude_full_length:
        keep = (codes == SKIP_CODE).any(axis=-1)
    bench = majority_benchmark(codes, coins, keep)
    mu_hat, _, _ = _ratio_estimate(codes, bench, keep)
    return mu_hat


def estimate_mu_training(answers: Sequence[AnswerWord], gold: Sequence[int]) -> EstimationResult:
    """훈련 문항으로 μ 추정

    Args:
        answers: 훈련 문항 T개에 대한 작업자 답안
        gold: 훈련 문항 정답 (길이 T)

    Returns:
        EstimationResult (모두 스킵했으면 μ̂ = 0.5)

    Raises:
        ValueError: 답안 길이와 정답 길이가 다른 경우
    """
    gold_arr = np.asarray(gold, dtype=np.int8)
    if gold_arr.ndim != 1 or gold_arr.size < 1:
        raise ValueError("gold must be a non-empty bit sequence")
    if np.any((gold_arr != 0) & (gold_arr != 1)):
        raise ValueError("gold entries must be 0 or 1")
    codes = words_to_array(answers)
    if codes.size == 0:
        raise ValueError("answers must not be empty")
    if codes.shape[1] != gold_arr.size:
        raise ValueError(f"answer length {codes.shape[1]} does not match gold length {gold_arr.size}")

    mu_hat, ratios, excluded = _ratio_estimate(codes[None], gold_arr[None])
    if excluded[0] == codes.shape[0]:
        logger.warning("모든 작업자가 훈련 문항을 스킵했습니다. μ̂ = 0.5 사용")
    return EstimationResult(
        mu_hat=float(mu_hat[0]),
        excluded_workers=int(excluded[0]),
        per_worker=tuple(float(r) for r in ratios[0])
    )


def estimate_mu_benchmark(
    answers: Sequence[AnswerWord],
    rng: np.random.Generator,
    exclude_full_length: bool = False
) -> EstimationResult:
    """다수결 기준으로 μ 추정

    Args:
        answers: 작업자 답안
        rng: 다수결 동점 결정용 난수 스트림 (derive_stream으로 파생, 필수)
        exclude_full_length: 스킵 없는 답안 제외 (탐욕 작업자 대응 파이프라인)

    Returns:
        EstimationResult
    """
    codes = words_to_array(answers)
    if codes.size == 0:
        raise ValueError("answers must not be empty")
    coins = rng.integers(0, 2, size=(1, codes.shape[1]))
    keep = None
    if exclude_full_length:
        keep = (codes == SKIP_CODE).any(axis=-1)[None]
        if not keep.any():
            logger.warning("스킵 없는 답안을 제외하니 남은 답안이 없습니다. μ̂ = 0.5 사용")
    bench = majority_benchmark(codes[None], coins, keep)
    mu_hat, ratios, excluded = _ratio_estimate(codes[None], bench, keep)
    return EstimationResult(
        mu_hat=float(mu_hat[0]),
        excluded_workers=int(excluded[0]),
        per_worker=tuple(float(r) for r in ratios[0])
    )


def clamp_mu(mu_hat: float) -> float:
    """가중치용 μ̂을 [0.5, 1]로 제한"""
    if mu_hat < 0.5:
        logger.warning(f"μ̂={mu_hat:.4f} < 0.5, 가중치 계산에 0.5 사용")
        return 0.5
    return min(float(mu_hat), 1.0)
