"""
스킵 확률 평균 m과 탐욕 작업자 비율 α의 최대우도 추정

확정 답안 수 n별 작업자 수 c_n을 독립 관측으로 보고 로그우도를 더한다.

- n < N: c_n ~ Binomial(W - g, A_n),  A_n = C(N,n)(1-m)^n m^(N-n)
- n = N: log C(W-g, c_N-g) + N(c_N-g)·log(1-m) + log(1-(1-m)^N)

g = round(W·α)는 탐욕 작업자 수. 지지 범위를 벗어난 항은 -inf.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.special import comb, gammaln, xlogy
from scipy.stats import binom

from crowdfusion.models.crowd_models import greedy_count
from crowdfusion.models.fusion_models import LengthHistogram


logger = logging.getLogger(__name__)

COARSE_STEP = 0.01
FINE_STEP = 0.001


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(round((hi - lo) / step)) + 1
    return np.round(np.linspace(lo, hi, count), 6)


def log_likelihood_grid(hist: LengthHistogram, W: int, N: int, ms: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """(α, m) 격자 위 로그우도

    Args:
        hist: 확정 답안 길이 히스토그램
        W: 작업자 수
        N: 마이크로태스크 수
        ms: m 값 배열
        alphas: α 값 배열

    Returns:
        (len(alphas), len(ms)) 배열, 행이 α
    """
    counts = np.asarray(hist.counts, dtype=float)
    ms = np.asarray(ms, dtype=float)[None, :]
    g = np.array([greedy_count(W, a) for a in np.asarray(alphas, dtype=float)], dtype=float)[:, None]
    honest = W - g

    total = np.zeros((g.shape[0], ms.shape[1]))
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in range(N):
            a_n = comb(N, n) * (1.0 - ms) ** n * ms ** (N - n)
            term = binom.logpmf(counts[n], honest, a_n)
            total = total + np.nan_to_num(term, nan=-np.inf)

        k = counts[N] - g
        valid = (k >= 0) & (k <= honest)
        k_safe = np.where(valid, k, 0.0)
        log_coef = gammaln(honest + 1) - gammaln(k_safe + 1) - gammaln(honest - k_safe + 1)
        last = log_coef + xlogy(N * k_safe, 1.0 - ms) + np.log1p(-(1.0 - ms) ** N)
        last = np.where(valid, last, -np.inf)
        total = total + np.nan_to_num(last, nan=-np.inf)
    return total


def log_likelihood(hist: LengthHistogram, W: int, N: int, m: float, alpha: float) -> float:
    """단일 (m, α)에서의 로그우도"""
    return float(log_likelihood_grid(hist, W, N, np.array([m]), np.array([alpha]))[0, 0])


def _argmax(values: np.ndarray) -> Tuple[int, int]:
    # 행(α) 우선 평탄화라 첫 최댓값이 작은 α, 그다음 작은 m
    flat = int(np.argmax(values))
    return divmod(flat, values.shape[1])


def estimate_m_alpha(hist: LengthHistogram, W: int, N: int, refine: bool = True) -> Tuple[float, float]:
    """(m, α) 최대우도 추정

    0.01 간격 격자 탐색 후, 최댓값 주변 ±0.01 구간을 0.001 간격으로 다시 탐색한다.
    동점은 작은 α, 그다음 작은 m 쪽으로 결정.

    Args:
        hist: 확정 답안 길이 히스토그램 (n = 0..N)
        W: 작업자 수
        N: 마이크로태스크 수
        refine: 세밀 격자 재탐색 여부

    Returns:
        (m̂, α̂)

    Raises:
        ValueError: 히스토그램 길이 또는 합이 맞지 않는 경우
    """
    if hist.N != N:
        raise ValueError(f"histogram covers n=0..{hist.N}, expected N={N}")
    if hist.total != W:
        raise ValueError(f"histogram total {hist.total} does not match W={W}")

    ms = _grid(0.0, 1.0, COARSE_STEP)
    alphas = _grid(0.0, 1.0, COARSE_STEP)
    values = log_likelihood_grid(hist, W, N, ms, alphas)
    ai, mi = _argmax(values)
    m_hat, alpha_hat = float(ms[mi]), float(alphas[ai])

    if refine:
        fine_ms = _grid(max(0.0, m_hat - COARSE_STEP), min(1.0, m_hat + COARSE_STEP), FINE_STEP)
        fine_alphas = _grid(max(0.0, alpha_hat - COARSE_STEP), min(1.0, alpha_hat + COARSE_STEP), FINE_STEP)
        fine = log_likelihood_grid(hist, W, N, fine_ms, fine_alphas)
        fai, fmi = _argmax(fine)
        if fine[fai, fmi] > values[ai, mi]:
            m_hat, alpha_hat = float(fine_ms[fmi]), float(fine_alphas[fai])

    if not np.isfinite(values[ai, mi]):
        logger.warning(f"모든 격자점의 우도가 0입니다: counts={list(hist.counts)}")
    logger.debug(f"MLE 결과: m̂={m_hat:.3f}, α̂={alpha_hat:.3f}")
    return m_hat, alpha_hat
