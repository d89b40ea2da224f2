"""
전수 열거 오라클

모든 작업자-비트 결과 조합을 열거해 P_c를 정확히 계산한다.
정직 작업자는 비트마다 (스킵, 정답, 오답) 확률 (m, (1-m)μ, (1-m)(1-μ)),
탐욕 작업자는 (정답, 오답) 각 1/2. 정답 부호는 모든 비트 1로 고정한다
(가중치가 답안 길이에만 의존하므로 대칭).

융합은 fusion 모듈과 같은 bit_margins / bit_outcomes 커널을 쓴다.
동점 비트는 1/2 로 센다.
"""

import logging
import math
from typing import Optional

import numpy as np

from crowdfusion.fusion.aggregators import bit_margins, bit_outcomes
from crowdfusion.fusion.strategies import strategy_scheme, strategy_weights
from crowdfusion.models.config import get_settings
from crowdfusion.models.crowd_models import ONE_CODE, SKIP_CODE, ZERO_CODE, greedy_count
from crowdfusion.models.errors import EnumerationTooLargeError
from crowdfusion.models.fusion_models import StrategyKind, WeightScheme


logger = logging.getLogger(__name__)

CHUNK = 1 << 15


def _outcome_table(symbols, N: int) -> np.ndarray:
    """비트별 기호 조합 표 (len(symbols)^N, N)"""
    grids = np.meshgrid(*([np.asarray(symbols, dtype=np.int8)] * N), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def _outcome_probs(table: np.ndarray, probs: dict) -> np.ndarray:
    out = np.ones(table.shape[0])
    for symbol, p in probs.items():
        out = out * np.where(table == symbol, p, 1.0).prod(axis=1)
    return out


def oracle_size(W: int, N: int, alpha: float = 0.0) -> int:
    """열거할 결합 결과 수 3^((W-g)N) · 2^(gN)"""
    g = greedy_count(W, alpha)
    return 3 ** ((W - g) * N) * 2 ** (g * N)


def oracle_pc(
    W: int,
    N: int,
    mu: float,
    m: float,
    alpha: float = 0.0,
    strategy: StrategyKind = StrategyKind.HONEST,
    joint: bool = False,
    cap: Optional[int] = None
) -> float:
    """전수 열거 P_c

    Args:
        W, N, mu, m, alpha: 크라우드 파라미터 (p=m, ρ=μ 고정)
        strategy: 융합 전략
        joint: True면 모든 비트가 동시에 맞을 확률, False면 비트별 주변확률의 곱
        cap: 결합 결과 수 상한 (None이면 설정값)

    Returns:
        P_c

    Raises:
        EnumerationTooLargeError: 결합 결과 수가 상한을 넘는 경우
    """
    if not 0.0 <= m <= 1.0 or not 0.5 <= mu <= 1.0:
        raise ValueError(f"invalid parameters mu={mu}, m={m}")
    cap = get_settings().oracle_term_cap if cap is None else cap
    size = oracle_size(W, N, alpha)
    if size > cap:
        raise EnumerationTooLargeError(size, cap, what="oracle terms")

    g = greedy_count(W, alpha)
    honest_table = _outcome_table([SKIP_CODE, ONE_CODE, ZERO_CODE], N)
    honest_probs = _outcome_probs(honest_table, {
        SKIP_CODE: m,
        ONE_CODE: (1.0 - m) * mu,
        ZERO_CODE: (1.0 - m) * (1.0 - mu)
    })
    greedy_table = _outcome_table([ONE_CODE, ZERO_CODE], N)
    greedy_probs = np.full(greedy_table.shape[0], 0.5 ** N)

    # Expurgation은 m = 0 이면 모든 답안이 버려져 x가 쓰이지 않음
    if strategy is StrategyKind.EXPURGATION and m == 0.0:
        scheme = WeightScheme.expurgation(mu, 1.0)
    else:
        scheme = strategy_scheme(strategy, mu, m, N)

    dims = (greedy_table.shape[0],) * g + (honest_table.shape[0],) * (W - g)
    tables = [greedy_table] * g + [honest_table] * (W - g)
    prob_tables = [greedy_probs] * g + [honest_probs] * (W - g)

    bit_sums = []
    joint_sums = []
    for start in range(0, size, CHUNK):
        index = np.arange(start, min(start + CHUNK, size), dtype=np.int64)
        digits = np.unravel_index(index, dims)
        codes = np.stack([tables[w][digits[w]] for w in range(W)], axis=1)
        probs = np.ones(len(index))
        for w in range(W):
            probs = probs * prob_tables[w][digits[w]]
        weights = strategy_weights(codes, strategy, scheme.base)
        s1, s0 = bit_margins(codes, weights)
        wins_one, ties = bit_outcomes(s1, s0)
        scores = np.where(wins_one, 1.0, np.where(ties, 0.5, 0.0))
        bit_sums.append((probs[:, None] * scores).sum(axis=0))
        joint_sums.append(math.fsum(probs * scores.prod(axis=1)))

    if joint:
        return math.fsum(joint_sums)
    per_bit = [math.fsum(column) for column in np.array(bit_sums).T]
    return math.prod(per_bit)
