"""
전략 전환 기준

탐욕 작업자 비율 α가 임계값 α*를 넘으면 Expurgation, 아니면 Oblivious.

    γ1 = ((1-m)/μ + 2mx)^N - ((1-m)/μ)^N
    γ2 = ((1-m)/μ + 2m)^N
    α* = (γ1 - γ2) / ((1/μ)^N - γ1·(1/(2μ))^N - γ2 + γ1)
"""

import logging
from dataclasses import dataclass

from crowdfusion.fusion.weights import solve_x
from crowdfusion.models.fusion_models import StrategyDecision, StrategyKind


logger = logging.getLogger(__name__)

COEFFICIENT_TOL = 1e-12


@dataclass(frozen=True)
class SwitchingTerms:
    """임계값 계산 중간값"""
    gamma1: float
    gamma2: float
    coefficient: float
    unclamped: float
    gap: float = 0.0

    @property
    def threshold(self) -> float:
        return min(1.0, max(0.0, self.unclamped))

    def prefers_expurgation(self, alpha: float) -> bool:
        """α에서 Expurgation이 유리한지 (경계값은 Oblivious)"""
        return alpha * self.coefficient > self.gap


def switching_terms(mu: float, m: float, N: int) -> SwitchingTerms:
    """γ1, γ2, α 계수와 제한 전 임계값 계산

    Raises:
        ValueError: μ, m 범위 오류
        LimitUndefinedError: m = 0
    """
    if not 0.5 <= mu <= 1.0:
        raise ValueError(f"mu must be in [0.5, 1], got {mu}")
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    x = solve_x(m, N)
    honest_part = (1.0 - m) / mu
    gamma1 = (honest_part + 2.0 * m * x) ** N - honest_part ** N
    gamma2 = (honest_part + 2.0 * m) ** N
    top = (1.0 / mu) ** N
    scale = max(1.0, top, gamma1, gamma2)
    # μ = 1/2 에서 γ1 = γ2 (반올림 오차 제거)
    gap = gamma1 - gamma2
    if abs(gap) <= COEFFICIENT_TOL * scale:
        gap = 0.0
    coefficient = top - gamma1 * (1.0 / (2.0 * mu)) ** N - gamma2 + gamma1
    # m = 1 에서는 계수가 해석적으로 0 (반올림 오차 제거)
    if abs(coefficient) <= COEFFICIENT_TOL * scale:
        coefficient = 0.0
    if coefficient == 0.0:
        unclamped = float("inf") if gap > 0 else float("-inf")
    else:
        unclamped = gap / coefficient
    return SwitchingTerms(gamma1=gamma1, gamma2=gamma2, coefficient=coefficient, unclamped=unclamped, gap=gap)


def switching_threshold(mu: float, m: float, N: int) -> float:
    """스위칭 임계값 α* ([0, 1]로 제한)

    Args:
        mu: 신뢰도 평균
        m: 스킵 확률 평균 (0 < m)
        N: 마이크로태스크 수

    Returns:
        α*. 제한 전 값은 switching_terms(...).unclamped
    """
    return switching_terms(mu, m, N).threshold


def select_strategy(mu_hat: float, m_hat: float, alpha_hat: float, N: int) -> StrategyDecision:
    """추정값으로 전략 선택

    α̂ > α* 이면 Expurgation, 같거나 작으면 Oblivious.

    Returns:
        StrategyDecision
    """
    terms = switching_terms(mu_hat, m_hat, N)
    if terms.coefficient > 0:
        chosen = StrategyKind.EXPURGATION if alpha_hat > terms.unclamped else StrategyKind.OBLIVIOUS
    elif terms.coefficient == 0:
        logger.debug(f"α 계수가 0 입니다 (m={m_hat}). 제한된 임계값 {terms.threshold} 과 비교")
        chosen = StrategyKind.EXPURGATION if alpha_hat > terms.threshold else StrategyKind.OBLIVIOUS
    else:
        logger.warning(
            f"α 계수가 음수입니다 (coef={terms.coefficient:.6g}, μ={mu_hat}, m={m_hat}, N={N}). "
            f"부등식 α·coef > γ1-γ2 로 결정합니다."
        )
        chosen = StrategyKind.EXPURGATION if terms.prefers_expurgation(alpha_hat) else StrategyKind.OBLIVIOUS

    logger.info(
        f"전략 선택: {chosen.value} (α̂={alpha_hat:.3f}, α*={terms.threshold:.4f}, μ̂={mu_hat:.3f}, m̂={m_hat:.3f})"
    )
    return StrategyDecision(
        threshold=terms.threshold,
        chosen=chosen,
        mu_hat=mu_hat,
        m_hat=m_hat,
        alpha_hat=alpha_hat,
        N=N,
        unclamped_threshold=terms.unclamped
    )
