"""
실제 답안 파일 오프라인 집계

μ 추정 → 길이 히스토그램으로 (m, α) 추정 → 전략 선택 → 전략 적용 → 비트별 융합 → 복호화.
모든 비트가 동점으로 결정되면 저신뢰(low_confidence)로 표시한다.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from crowdfusion.estimation.greedy_mle import estimate_m_alpha
from crowdfusion.estimation.mu_estimators import clamp_mu, estimate_mu_benchmark, estimate_mu_training
from crowdfusion.estimation.switching import select_strategy
from crowdfusion.exporters.answer_file import parse_answer_file, parse_gold_file
from crowdfusion.fusion.aggregators import fuse_bitwise
from crowdfusion.fusion.strategies import apply_strategy
from crowdfusion.models.config import MuSourceKind, SchemeName, StrategyName
from crowdfusion.models.crowd_models import SKIP_CODE, AnswerWord, words_to_array
from crowdfusion.models.errors import UnsupportedSchemeError
from crowdfusion.models.fusion_models import (
    FusionResult,
    LengthHistogram,
    StrategyDecision,
    StrategyKind,
    WeightScheme,
)
from crowdfusion.utils.rng import derive_stream


logger = logging.getLogger(__name__)

MIN_M_HAT = 0.01
OFFLINE_TAG = "offline"


@dataclass
class OfflineDecision:
    """오프라인 집계 결정 보고서"""
    fusion: FusionResult
    strategy: StrategyKind
    scheme: SchemeName
    mu_hat: float
    m_hat: float
    alpha_hat: float
    W: int
    N: int
    M: int
    retained: int
    decision: Optional[StrategyDecision] = None
    warnings: List[str] = field(default_factory=list)

    @property
    def low_confidence(self) -> bool:
        """모든 비트가 동점으로 결정되었는지"""
        return self.fusion.all_ties

    def to_dict(self) -> dict:
        return {
            "class_index": self.fusion.class_index,
            "decided_bits": list(self.fusion.decided_bits),
            "tie_bits": sorted(self.fusion.tie_bits),
            "low_confidence": self.low_confidence,
            "strategy": self.strategy.value,
            "scheme": self.scheme.value,
            "mu_hat": self.mu_hat,
            "m_hat": self.m_hat,
            "alpha_hat": self.alpha_hat,
            "W": self.W,
            "N": self.N,
            "M": self.M,
            "retained": self.retained,
            "decision": self.decision.to_dict() if self.decision else None,
            "warnings": self.warnings
        }


def aggregate_answers(
    words: Sequence[AnswerWord],
    N: int,
    scheme: SchemeName = SchemeName.REJECT_WEIGHTED,
    strategy: StrategyName = StrategyName.ADAPTIVE,
    mu_source: MuSourceKind = MuSourceKind.BENCHMARK,
    M: Optional[int] = None,
    seed: int = 0,
    mu: Optional[float] = None,
    training: Optional[Sequence[AnswerWord]] = None,
    gold: Optional[Sequence[int]] = None
) -> OfflineDecision:
    """메모리 상의 답안 집계

    Args:
        words: 작업자 답안
        N: 답안 길이
        scheme: reject_weighted, uniform, forced_mv
        strategy: honest, oblivious, expurgation, adaptive
        mu_source: benchmark, known (mu 필요), training (training + gold 필요)
        M: 클래스 수 (None이면 2^N)
        seed: 동점/기준 동전용 시드

    Returns:
        OfflineDecision

    Raises:
        ValueError: M 범위 오류, 빈 입력, 필요한 옵션 누락
        UnsupportedSchemeError: chair_varshney (작업자별 신뢰도가 필요)
    """
    if not words:
        raise ValueError("answers must not be empty")
    M = 2 ** N if M is None else M
    if not 2 <= M <= 2 ** N:
        raise ValueError(f"M must be in [2, 2^N={2 ** N}], got {M}")
    if scheme is SchemeName.CHAIR_VARSHNEY:
        raise UnsupportedSchemeError("chair_varshney needs per-worker reliabilities, which answer files do not carry")

    rng = derive_stream(seed, 0, OFFLINE_TAG)
    codes = words_to_array(words)
    W = codes.shape[0]
    warnings: List[str] = []

    greedy_handling = strategy is not StrategyName.HONEST
    if greedy_handling and not (codes == SKIP_CODE).any():
        warnings.append("no answer word contains a skip; mu is estimated from all words")
        logger.warning("스킵이 있는 답안이 없어 모든 답안으로 μ를 추정합니다.")
        greedy_handling = False

    if mu_source is MuSourceKind.KNOWN:
        if mu is None:
            raise ValueError("mu_source=known requires mu")
        mu_hat = float(mu)
    elif mu_source is MuSourceKind.TRAINING:
        if training is None or gold is None:
            raise ValueError("mu_source=training requires training answers and gold bits")
        mu_hat = estimate_mu_training(training, gold).mu_hat
    else:
        mu_hat = estimate_mu_benchmark(words, rng, exclude_full_length=greedy_handling).mu_hat

    m_hat, alpha_hat = estimate_m_alpha(LengthHistogram.from_codes(codes), W, N)
    mu_weight = clamp_mu(mu_hat)
    m_weight = max(m_hat, MIN_M_HAT)

    decision = None
    if strategy is StrategyName.ADAPTIVE:
        decision = select_strategy(mu_weight, m_weight, alpha_hat, N)
        kind = decision.chosen
    else:
        kind = StrategyKind(strategy.value)

    if scheme is SchemeName.FORCED_MV:
        guesses = rng.integers(0, 2, size=codes.shape)
        forced = np.where(codes == SKIP_CODE, guesses, codes)
        retained = [AnswerWord.from_codes(word.worker_id, forced[i]) for i, word in enumerate(words)]
        weights = [1.0] * len(retained)
    else:
        retained, weights = apply_strategy(words, kind, mu_weight, m_weight)
        if scheme is SchemeName.UNIFORM:
            weights = [1.0] * len(retained)

    result = fuse_bitwise(retained, WeightScheme.uniform(), M, rng, weights=weights, N=N)
    if result.all_ties:
        message = "all bits were decided by coin flips; decision is low-confidence"
        warnings.append(message)
        logger.warning(f"모든 비트가 동점입니다 (남은 답안 {len(retained)}개). 저신뢰 결정")

    logger.info(
        f"오프라인 집계 완료: class={result.class_index}, strategy={kind.value}, "
        f"μ̂={mu_hat:.3f}, m̂={m_hat:.3f}, α̂={alpha_hat:.3f}"
    )
    return OfflineDecision(
        fusion=result,
        strategy=kind,
        scheme=scheme,
        mu_hat=mu_hat,
        m_hat=m_hat,
        alpha_hat=alpha_hat,
        W=W,
        N=N,
        M=M,
        retained=len(retained),
        decision=decision,
        warnings=warnings
    )


def aggregate_offline(
    answers_path: str,
    scheme: SchemeName = SchemeName.REJECT_WEIGHTED,
    strategy: StrategyName = StrategyName.ADAPTIVE,
    mu_source: MuSourceKind = MuSourceKind.BENCHMARK,
    M: Optional[int] = None,
    seed: int = 0,
    mu: Optional[float] = None,
    training_path: Optional[str] = None,
    gold_path: Optional[str] = None
) -> OfflineDecision:
    """답안 파일 집계

    Args:
        answers_path: 답안 CSV 경로
        training_path / gold_path: mu_source=training 일 때 훈련 답안과 정답 파일

    Raises:
        AnswerParseError: 파일 형식 오류
        OSError: 파일 읽기 실패
    """
    N, words = parse_answer_file(answers_path)
    training = gold = None
    if training_path is not None:
        _, training = parse_answer_file(training_path)
    if gold_path is not None:
        gold = parse_gold_file(gold_path)
    return aggregate_answers(
        words, N,
        scheme=scheme,
        strategy=strategy,
        mu_source=mu_source,
        M=M,
        seed=seed,
        mu=mu,
        training=training,
        gold=gold
    )
