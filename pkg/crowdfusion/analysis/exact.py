"""
정확한 분류 성공 확률 P_c

기준 비트 하나의 정답 확률을 프로필 Q 열거로 구하고 N제곱한다.

    P_c,i = 1/2 + 1/2·Σ_S C(Q)(F - F') + 1/4·Σ_S' C(Q)(F - F')

S는 가중 투표 차이가 양수인 프로필, S'는 동점 프로필이다.
F는 H1, F'는 H0 하 프로필 확률이며 로그 공간에서 계산한다.

탐욕 작업자 공식은 두 가지를 제공한다.
- verbatim=True: 원래 식 그대로 (W! 계수, 1/2^g 인자, +μ^-N·g 이동)
- verbatim=False: 탐욕 투표의 이항 분할과 제외 범주를 반영한 보정식
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import comb, gammaln, xlogy

from crowdfusion.analysis.profiles import check_enumeration, iter_compositions, phi
from crowdfusion.fusion.weights import solve_x
from crowdfusion.models.config import get_settings
from crowdfusion.models.crowd_models import greedy_count


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Categories:
    """기준 비트 기준 작업자 범주 표

    - p1 / p0: H1 / H0 하 범주 확률
    - values: 범주의 투표 값 (1 투표 +w, 0 투표 -w, 스킵/제외 0)
    - factorial: 다항 계수 분모에 q! 를 넣는 범주
    """
    p1: np.ndarray
    p0: np.ndarray
    values: np.ndarray
    factorial: np.ndarray
    integer_values: Optional[np.ndarray] = None


def _integer_base(base: float) -> Optional[int]:
    inverse = 1.0 / base
    rounded = round(inverse)
    if rounded >= 1 and abs(inverse - rounded) < 1e-12:
        return int(rounded)
    return None


def _signed_categories(mu: float, m: float, N: int, base: float, max_n: int) -> _Categories:
    """n = -max_n..max_n 범주 (0은 기준 비트 스킵)"""
    phis = phi(m, N)[:max_n]
    ns = np.arange(1, max_n + 1)
    weights = base ** (-ns.astype(float))
    p1 = np.concatenate([((1.0 - mu) * phis)[::-1], [m], mu * phis])
    p0 = np.concatenate([(mu * phis)[::-1], [m], (1.0 - mu) * phis])
    values = np.concatenate([-weights[::-1], [0.0], weights])
    integer_values = None
    inverse = _integer_base(base)
    if inverse is not None:
        powers = np.array([inverse ** int(n) for n in ns], dtype=np.int64)
        integer_values = np.concatenate([-powers[::-1], [0], powers]).astype(np.int64)
    return _Categories(
        p1=p1,
        p0=p0,
        values=values,
        factorial=np.ones(2 * max_n + 1, dtype=bool),
        integer_values=integer_values
    )


def _with_extra_category(cats: _Categories, prob: float, factorial: bool) -> _Categories:
    """투표 값 0인 범주 추가 (제외 답안 또는 여유 슬롯)"""
    integer_values = None
    if cats.integer_values is not None:
        integer_values = np.append(cats.integer_values, 0).astype(np.int64)
    return _Categories(
        p1=np.append(cats.p1, prob),
        p0=np.append(cats.p0, prob),
        values=np.append(cats.values, 0.0),
        factorial=np.append(cats.factorial, factorial),
        integer_values=integer_values
    )


def _per_bit_probability(
    total: int,
    cats: _Categories,
    log_norm: float,
    shifts: Sequence[float],
    shift_probs: Sequence[float],
    integer_shifts: Optional[Sequence[int]] = None,
    cap: Optional[int] = None
) -> float:
    """프로필 열거로 기준 비트 정답 확률 계산

    Args:
        total: 프로필에 배분할 작업자 수
        cats: 범주 표
        log_norm: 다항 계수 분자(로그)와 공통 인자
        shifts: 탐욕 투표에 의한 투표 차이 이동값
        shift_probs: 각 이동값의 확률
        integer_shifts: 정수 투표 값일 때 정확 비교용 이동값
        cap: 열거 상한

    Raises:
        EnumerationTooLargeError: 프로필 수가 상한을 넘는 경우
    """
    parts = len(cats.p1)
    size = check_enumeration(total, parts, cap)
    rtol = get_settings().tie_rtol
    exact = cats.integer_values is not None and integer_shifts is not None
    logger.debug(f"프로필 열거: total={total}, parts={parts}, size={size}, shifts={len(shifts)}")

    wins: List[float] = []
    ties: List[float] = []
    abs_values = np.abs(cats.values)
    for Q in iter_compositions(total, parts):
        log_coef = log_norm - gammaln(Q[:, cats.factorial] + 1.0).sum(axis=1)
        with np.errstate(divide="ignore"):
            f1 = np.exp(log_coef + xlogy(Q, cats.p1).sum(axis=1))
            f0 = np.exp(log_coef + xlogy(Q, cats.p0).sum(axis=1))
        diff = f1 - f0
        margin = Q @ cats.values
        scale = Q @ abs_values
        int_margin = Q @ cats.integer_values if exact else None

        for k, (shift, prob) in enumerate(zip(shifts, shift_probs)):
            if prob == 0.0:
                continue
            if exact:
                shifted = int_margin + int(integer_shifts[k])
                is_tie = shifted == 0
                is_win = shifted > 0
            else:
                shifted = margin + shift
                is_tie = np.abs(shifted) <= rtol * (scale + abs(shift))
                is_win = (shifted > 0) & ~is_tie
            wins.append(prob * math.fsum(diff[is_win]))
            ties.append(prob * math.fsum(diff[is_tie]))

    return 0.5 + 0.5 * math.fsum(wins) + 0.25 * math.fsum(ties)


def _check_params(W: int, N: int, mu: float, m: float, alpha: float = 0.0) -> None:
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must be in (0, 1], got {mu}")
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")


def per_bit_honest(W: int, N: int, mu: float, m: float, cap: Optional[int] = None) -> float:
    """정직한 크라우드의 비트별 정답 확률"""
    _check_params(W, N, mu, m)
    cats = _signed_categories(mu, m, N, mu, N)
    return _per_bit_probability(W, cats, gammaln(W + 1.0), [0.0], [1.0], [0], cap)


def exact_pc_honest(W: int, N: int, mu: float, m: float, cap: Optional[int] = None) -> float:
    """정직한 크라우드의 정확한 P_c

    Args:
        W: 작업자 수
        N: 마이크로태스크 수
        mu: 신뢰도 평균
        m: 스킵 확률 평균
        cap: 프로필 열거 상한 (None이면 설정값)

    Returns:
        P_c = (비트별 정답 확률)^N

    Raises:
        EnumerationTooLargeError: C(W+2N, 2N)이 상한을 넘는 경우
    """
    return per_bit_honest(W, N, mu, m, cap) ** N


def per_bit_oblivious(
    W: int, N: int, mu: float, m: float, alpha: float,
    verbatim: bool = True, cap: Optional[int] = None
) -> float:
    """Oblivious 전략의 비트별 정답 확률"""
    _check_params(W, N, mu, m, alpha)
    g = greedy_count(W, alpha)
    honest = W - g
    cats = _signed_categories(mu, m, N, mu, N)
    top = mu ** (-N)
    inverse = _integer_base(mu)

    if verbatim:
        log_norm = gammaln(W + 1.0) - g * math.log(2.0)
        shifts = [top * g]
        probs = [1.0]
        int_shifts = [inverse ** N * g] if inverse is not None else None
    else:
        # 탐욕 투표 중 j개가 1, g-j개가 0
        log_norm = gammaln(honest + 1.0)
        js = np.arange(g + 1)
        shifts = [top * (2 * j - g) for j in js]
        probs = [float(comb(g, j, exact=True)) / 2.0 ** g for j in js]
        int_shifts = [inverse ** N * (2 * int(j) - g) for j in js] if inverse is not None else None
    return _per_bit_probability(honest, cats, log_norm, shifts, probs, int_shifts, cap)


def exact_pc_oblivious(
    W: int, N: int, mu: float, m: float, alpha: float,
    verbatim: bool = True, cap: Optional[int] = None
) -> float:
    """Oblivious 전략의 정확한 P_c

    verbatim=True는 원래 식 그대로 정직 작업자 W-g명 프로필에 W! 계수,
    1/2^g 인자, 투표 차이 +μ^-N·g를 쓴다. verbatim=False는 탐욕 투표를
    이항 분포로 나누고 (W-g)! 계수를 쓴다.
    """
    return per_bit_oblivious(W, N, mu, m, alpha, verbatim, cap) ** N


def per_bit_expurgation(
    W: int, N: int, mu: float, m: float, alpha: float,
    verbatim: bool = True, cap: Optional[int] = None
) -> float:
    """Expurgation 전략의 비트별 정답 확률

    Raises:
        LimitUndefinedError: m = 0
    """
    _check_params(W, N, mu, m, alpha)
    x = solve_x(m, N)
    g = greedy_count(W, alpha)
    honest = W - g
    cats = _signed_categories(mu, m, N, mu * x, N - 1)

    if verbatim:
        # 합이 W-g 이하인 프로필: 계수에 들어가지 않는 여유 슬롯으로 표현
        cats = _with_extra_category(cats, 1.0, factorial=False)
        log_norm = gammaln(W + 1.0)
    else:
        cats = _with_extra_category(cats, (1.0 - m) ** N, factorial=True)
        log_norm = gammaln(honest + 1.0)
    return _per_bit_probability(honest, cats, log_norm, [0.0], [1.0], [0], cap)


def exact_pc_expurgation(
    W: int, N: int, mu: float, m: float, alpha: float,
    verbatim: bool = True, cap: Optional[int] = None
) -> float:
    """Expurgation 전략의 정확한 P_c

    가중치 (μx)^-n, x = solve_x(m, N). verbatim=False는 스킵 없는 정직 답안을
    확률 (1-m)^N 의 제외 범주로 두고 W-g명에 대한 다항 분포를 쓴다.
    """
    return per_bit_expurgation(W, N, mu, m, alpha, verbatim, cap) ** N


def profile_measure_total(W: int, N: int, mu: float, m: float, hypothesis: int = 1) -> float:
    """Σ_Q C(Q)·F(Q) (정규화 확인용, 1이어야 함)"""
    _check_params(W, N, mu, m)
    cats = _signed_categories(mu, m, N, mu, N)
    probs = cats.p1 if hypothesis == 1 else cats.p0
    terms = []
    for Q in iter_compositions(W, len(probs)):
        log_coef = gammaln(W + 1.0) - gammaln(Q + 1.0).sum(axis=1)
        with np.errstate(divide="ignore"):
            terms.append(math.fsum(np.exp(log_coef + xlogy(Q, probs).sum(axis=1))))
    return math.fsum(terms)
