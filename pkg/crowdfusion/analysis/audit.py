"""
탐욕 작업자 공식 점검

원래의 Oblivious / Expurgation 정확 공식(verbatim)과 보정식을 전수 열거 오라클과
비교해 일치/불일치 보고서를 만든다.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

from crowdfusion.analysis.exact import exact_pc_expurgation, exact_pc_oblivious
from crowdfusion.analysis.oracle import oracle_pc
from crowdfusion.models.fusion_models import StrategyKind


logger = logging.getLogger(__name__)

AGREEMENT_TOL = 1e-12


@dataclass
class AuditRow:
    """공식 점검 결과 한 행"""
    strategy: StrategyKind
    mu: float
    m: float
    alpha: float
    verbatim: float
    corrected: float
    oracle: float

    @property
    def divergence(self) -> float:
        """|verbatim - oracle|"""
        return abs(self.verbatim - self.oracle)

    @property
    def corrected_divergence(self) -> float:
        return abs(self.corrected - self.oracle)

    @property
    def agrees(self) -> bool:
        return self.divergence <= AGREEMENT_TOL

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy.value,
            "mu": self.mu,
            "m": self.m,
            "alpha": self.alpha,
            "verbatim": self.verbatim,
            "corrected": self.corrected,
            "oracle": self.oracle,
            "divergence": self.divergence,
            "corrected_divergence": self.corrected_divergence,
            "agrees": self.agrees
        }


AUDIT_COLUMNS = [
    "strategy", "mu", "m", "alpha", "verbatim", "corrected", "oracle",
    "divergence", "corrected_divergence", "agrees"
]


def audit_greedy_formulas(
    W: int,
    N: int,
    mus: Sequence[float],
    ms: Sequence[float],
    alphas: Sequence[float]
) -> List[AuditRow]:
    """Oblivious / Expurgation 공식을 오라클과 비교

    Args:
        W, N: 크라우드 크기 (오라클 열거가 가능한 작은 값)
        mus, ms, alphas: 점검 격자

    Returns:
        AuditRow 목록 (전략, μ, m, α 순)
    """
    rows: List[AuditRow] = []
    for strategy in (StrategyKind.OBLIVIOUS, StrategyKind.EXPURGATION):
        exact_fn = exact_pc_oblivious if strategy is StrategyKind.OBLIVIOUS else exact_pc_expurgation
        for mu in mus:
            for m in ms:
                for alpha in alphas:
                    row = AuditRow(
                        strategy=strategy,
                        mu=mu,
                        m=m,
                        alpha=alpha,
                        verbatim=exact_fn(W, N, mu, m, alpha, verbatim=True),
                        corrected=exact_fn(W, N, mu, m, alpha, verbatim=False),
                        oracle=oracle_pc(W, N, mu, m, alpha, strategy)
                    )
                    rows.append(row)

    diverging = sum(1 for row in rows if not row.agrees)
    logger.info(f"공식 점검 완료: {len(rows)}개 중 불일치 {diverging}개 (W={W}, N={N})")
    return rows
