"""
점근 성능 (W → ∞)

중심극한정리로 가중 투표 합을 정규분포로 근사한다.

    M = W(2μ-1)(1-m)/μ · ((1-(1-μ)m)/μ)^(N-1)
    V = W(1-m)/μ² · ((1-(1-μ²)m)/μ²)^(N-1) - M²/W
    P_c = Φ(M/√V)^N

f, g 지표:
    g(μ, m) = (1-(1-μ)m)² / (1-(1-μ²)m)
    f(μ, m) = (1-m)(2μ-1)² g^(N-1),   P_c = Φ(√(W/(1/f - 1)))^N
"""

import logging
import math
from typing import Tuple

from scipy.stats import norm

from crowdfusion.models.analysis_models import AsymptoticMoments


logger = logging.getLogger(__name__)

DEGENERATE_VARIANCE = 1e-15


def _check(mu: float, m: float, N: int) -> None:
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must be in (0, 1], got {mu}")
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")


def moments(W: int, N: int, mu: float, m: float) -> AsymptoticMoments:
    """가중 투표 합의 평균 M과 분산 V (H1 기준)"""
    _check(mu, m, N)
    mean = W * (2.0 * mu - 1.0) * (1.0 - m) / mu * ((1.0 - (1.0 - mu) * m) / mu) ** (N - 1)
    second = W * (1.0 - m) / mu ** 2 * ((1.0 - (1.0 - mu ** 2) * m) / mu ** 2) ** (N - 1)
    variance = second - mean ** 2 / W
    # 반올림으로 생긴 음수는 0으로
    if -1e-12 * max(1.0, second) <= variance < 0.0:
        variance = 0.0
    return AsymptoticMoments(mean=mean, variance=variance)


def asymptotic_pc(W: int, N: int, mu: float, m: float) -> float:
    """점근 P_c = Φ(M/√V)^N

    V ≤ 1e-15 이면 M > 0 일 때 1, M = 0 일 때 2^-N.

    Raises:
        ValueError: V = 0 에서 M < 0 (μ < 1/2)
    """
    mo = moments(W, N, mu, m)
    if mo.variance <= DEGENERATE_VARIANCE:
        if mo.mean > DEGENERATE_VARIANCE:
            return 1.0
        if abs(mo.mean) <= DEGENERATE_VARIANCE:
            return 0.5 ** N
        raise ValueError(f"negative mean with zero variance (mu={mu}, m={m})")
    return float(norm.cdf(mo.mean / math.sqrt(mo.variance))) ** N


def forced_response_accuracy(mu: float, m: float) -> float:
    """강제 응답 시 비트별 정답 확률 l = μ + m(1/2 - μ)"""
    return mu + m * (0.5 - mu)


def asymptotic_pc_mv(W: int, N: int, mu: float, m: float, printed_form: bool = False) -> float:
    """강제 응답 다수결의 점근 P_c

    스킵하려던 작업자가 무작위로 답할 때 비트별 정답 확률 l을 쓰고
    Φ(W(2l-1)/√(4Wl(1-l)))^N 을 반환한다.

    Args:
        printed_form: True면 Φ(√(W²(2l-1)/(4l-4l²)))^N 형태로 계산 (비교용)
    """
    _check(mu, m, N)
    l = forced_response_accuracy(mu, m)
    spread = l * (1.0 - l)
    if spread <= 0.0:
        return 1.0 if l >= 1.0 else 0.0
    if printed_form:
        z = math.sqrt(max(0.0, W ** 2 * (2.0 * l - 1.0) / (4.0 * spread)))
    else:
        z = W * (2.0 * l - 1.0) / math.sqrt(4.0 * W * spread)
    return float(norm.cdf(z)) ** N


def f_g_metrics(mu: float, m: float, N: int) -> Tuple[float, float]:
    """성능 지표 (f, g)"""
    _check(mu, m, N)
    g = (1.0 - (1.0 - mu) * m) ** 2 / (1.0 - (1.0 - mu ** 2) * m)
    f = (1.0 - m) * (2.0 * mu - 1.0) ** 2 * g ** (N - 1)
    return f, g


def asymptotic_pc_from_f(W: int, N: int, mu: float, m: float) -> float:
    """Φ(√(W/(1/f - 1)))^N 형태의 점근 P_c"""
    f, _ = f_g_metrics(mu, m, N)
    if f >= 1.0:
        return 1.0
    if f <= 0.0:
        return 0.5 ** N
    return float(norm.cdf(math.sqrt(W / (1.0 / f - 1.0)))) ** N


def f_m_derivative(mu: float, m: float, N: int) -> float:
    """∂f/∂m 해석식

    A = 1-(1-μ)m, B = 1-(1-μ²)m, h = A²/B 일 때
    ∂f/∂m = (2μ-1)² h^(N-2) [(N-1)(1-m)h' - h],
    h' = 2A(μ-1)/B - A²(μ²-1)/B².
    """
    _check(mu, m, N)
    A = 1.0 - (1.0 - mu) * m
    B = 1.0 - (1.0 - mu ** 2) * m
    h = A ** 2 / B
    dh = 2.0 * A * (mu - 1.0) / B - A ** 2 * (mu ** 2 - 1.0) / B ** 2
    return (2.0 * mu - 1.0) ** 2 * (h ** (N - 2) * (N - 1) * (1.0 - m) * dh - h ** (N - 1))


def f_m_increase_condition(mu: float, m: float, N: int) -> bool:
    """∂f/∂m > 0 이 보장되는 조건

    h'/h = (1-μ)²(m(1+μ)-1)/(AB) 이므로 m > 1/(1+μ) 이고
    N ≥ AB / ((1-m)(1-μ)²(m(1+μ)-1)) + 1 일 때 성립한다.
    m ≤ 1/(1+μ) 이면 ∂f/∂m < 0.
    """
    _check(mu, m, N)
    if mu >= 1.0 or m >= 1.0 or m * (1.0 + mu) <= 1.0:
        return False
    A = 1.0 - (1.0 - mu) * m
    B = 1.0 - (1.0 - mu ** 2) * m
    bound = A * B / ((1.0 - m) * (1.0 - mu) ** 2 * (m * (1.0 + mu) - 1.0)) + 1.0
    return N >= bound
