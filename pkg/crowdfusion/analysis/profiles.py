"""
프로필 열거와 T_w 확률질량함수

기준 비트 하나에 대해 작업자를 범주(부호 있는 답안 길이, 스킵, 제외)로 나누고,
W명을 범주에 배분하는 모든 프로필 Q를 별과 막대 방식으로 열거한다.
"""

import itertools
import logging
import math
from typing import Iterator, Optional

import numpy as np
from scipy.special import comb

from crowdfusion.models.analysis_models import ProfileCount, TwPmf
from crowdfusion.models.config import get_settings
from crowdfusion.models.errors import EnumerationTooLargeError


logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 100_000


def phi(m: float, N: int) -> np.ndarray:
    """φ_n = C(N-1, n-1)(1-m)^n m^(N-n), n = 1..N

    기준 비트에 답하고 전체 확정 답안이 n개일 확률.
    """
    n = np.arange(1, N + 1)
    return comb(N - 1, n - 1) * (1.0 - m) ** n * m ** (N - n)


def tw_pmf(mu: float, m: float, N: int) -> TwPmf:
    """가중 투표 T_w의 확률질량함수

    지지점 순서: 0, +μ^-1, -μ^-1, ..., +μ^-N, -μ^-N

    Args:
        mu: 신뢰도 평균
        m: 스킵 확률 평균
        N: 마이크로태스크 수

    Returns:
        TwPmf (H1, H0 하 확률)
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must be in (0, 1], got {mu}")
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must be in [0, 1], got {m}")
    phis = phi(m, N)
    support = [0.0]
    h1 = [m]
    h0 = [m]
    for n in range(1, N + 1):
        weight = mu ** (-n)
        support.extend([weight, -weight])
        h1.extend([mu * phis[n - 1], (1.0 - mu) * phis[n - 1]])
        h0.extend([(1.0 - mu) * phis[n - 1], mu * phis[n - 1]])
    return TwPmf(mu=mu, m=m, N=N, support=tuple(support), probs_h1=tuple(h1), probs_h0=tuple(h0))


def enumeration_size(total: int, parts: int) -> int:
    """total을 parts개 음이 아닌 정수로 나누는 방법 수 C(total+parts-1, parts-1)"""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    return math.comb(total + parts - 1, parts - 1)


def check_enumeration(total: int, parts: int, cap: Optional[int] = None) -> int:
    """열거 크기 확인

    Raises:
        EnumerationTooLargeError: 크기가 상한을 넘는 경우
    """
    cap = get_settings().exact_profile_cap if cap is None else cap
    size = enumeration_size(total, parts)
    if size > cap:
        raise EnumerationTooLargeError(size, cap, what="profiles")
    return size


def iter_compositions(total: int, parts: int, chunk: int = DEFAULT_CHUNK) -> Iterator[np.ndarray]:
    """total을 parts개로 나누는 모든 조합을 (K, parts) 배열 청크로 생성

    막대 위치 조합을 사전식으로 생성하고 간격을 부품 크기로 변환한다.
    """
    slots = total + parts - 1
    bars = itertools.combinations(range(slots), parts - 1)
    while True:
        block = list(itertools.islice(bars, chunk))
        if not block:
            return
        if parts == 1:
            yield np.full((len(block), 1), total, dtype=np.int64)
            continue
        positions = np.array(block, dtype=np.int64).reshape(len(block), parts - 1)
        edges = np.concatenate([
            np.full((len(block), 1), -1, dtype=np.int64),
            positions,
            np.full((len(block), 1), slots, dtype=np.int64)
        ], axis=1)
        yield np.diff(edges, axis=1) - 1


def iter_profiles(W: int, N: int) -> Iterator[ProfileCount]:
    """W명에 대한 모든 프로필 Q = (q_{-N}..q_N) 생성"""
    for block in iter_compositions(W, 2 * N + 1):
        for row in block:
            yield ProfileCount(q=tuple(row))
