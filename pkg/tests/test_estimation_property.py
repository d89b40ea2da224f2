"""
Property-Based Tests for estimators and the switching rule
"""
import numpy as np
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from crowdfusion.estimation.greedy_mle import estimate_m_alpha
from crowdfusion.estimation.mu_estimators import estimate_mu_benchmark, estimate_mu_training
from crowdfusion.estimation.switching import select_strategy, switching_terms
from crowdfusion.models.crowd_models import SKIP_CODE, AnswerWord, greedy_count
from crowdfusion.models.fusion_models import LengthHistogram, StrategyKind
from crowdfusion.utils.rng import derive_stream


reliability = st.floats(min_value=0.5, max_value=1.0, allow_nan=False)
skip_mean = st.floats(min_value=0.01, max_value=1.0, allow_nan=False)


@st.composite
def noiseless_training_strategy(draw):
    """정답 또는 λ만 답하는 훈련 답안 (적어도 한 명은 하나 이상 답함)"""
    T = draw(st.integers(min_value=1, max_value=8))
    gold = draw(st.lists(st.integers(min_value=0, max_value=1), min_size=T, max_size=T))
    W = draw(st.integers(min_value=1, max_value=10))
    words = []
    for w in range(W):
        mask = draw(st.lists(st.booleans(), min_size=T, max_size=T))
        words.append(AnswerWord.from_codes(w, [g if keep else SKIP_CODE for g, keep in zip(gold, mask)]))
    assume(any(word.n_definitive > 0 for word in words))
    return words, gold


class TestMuEstimatorProperties:
    @settings(max_examples=100, suppress_health_check=[HealthCheck.too_slow], deadline=None)
    @given(data=noiseless_training_strategy())
    def test_noiseless_training_gives_one(self, data):
        """확정 답안이 모두 정답이면 스킵 패턴과 무관하게 μ̂=1"""
        words, gold = data
        result = estimate_mu_training(words, gold)
        assert result.mu_hat == 1.0
        assert result.excluded_workers < len(words)

    @settings(max_examples=100, suppress_health_check=[HealthCheck.too_slow], deadline=None)
    @given(
        rows=st.lists(
            st.lists(st.sampled_from([0, 1, SKIP_CODE]), min_size=3, max_size=3),
            min_size=1, max_size=12
        ),
        seed=st.integers(min_value=0, max_value=10_000)
    )
    def test_benchmark_estimate_is_probability(self, rows, seed):
        words = [AnswerWord.from_codes(i, row) for i, row in enumerate(rows)]
        result = estimate_mu_benchmark(words, derive_stream(seed, 0, "bench"))
        assert 0.0 <= result.mu_hat <= 1.0
        assert result.excluded_workers == sum(1 for w in words if w.n_definitive == 0)


class TestMleProperties:
    @settings(max_examples=30, suppress_health_check=[HealthCheck.too_slow], deadline=None)
    @given(counts=st.lists(st.integers(min_value=0, max_value=15), min_size=4, max_size=4))
    def test_estimate_stays_on_grid_and_support(self, counts):
        """추정값은 [0,1] 안에 있고 g ≤ (스킵 없는 답안 수)"""
        assume(sum(counts) > 0)
        W = sum(counts)
        m_hat, alpha_hat = estimate_m_alpha(LengthHistogram(counts=tuple(counts)), W, 3)
        assert 0.0 <= m_hat <= 1.0
        assert 0.0 <= alpha_hat <= 1.0
        assert greedy_count(W, alpha_hat) <= counts[-1]


class TestSwitchingProperties:
    @settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow], deadline=None)
    @given(mu=reliability, m=skip_mean, N=st.integers(min_value=1, max_value=8))
    def test_no_greedy_workers_never_expurgates(self, mu, m, N):
        assert select_strategy(mu, m, 0.0, N).chosen is StrategyKind.OBLIVIOUS

    @settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow], deadline=None)
    @given(mu=reliability, m=skip_mean, N=st.integers(min_value=1, max_value=8))
    def test_threshold_is_clamped(self, mu, m, N):
        terms = switching_terms(mu, m, N)
        assert 0.0 <= terms.threshold <= 1.0
        if 0.0 <= terms.unclamped <= 1.0:
            assert terms.threshold == terms.unclamped

    @settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow], deadline=None)
    @given(
        mu=reliability,
        m=skip_mean,
        N=st.integers(min_value=1, max_value=8),
        a=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
        b=st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
    )
    def test_choice_is_monotone_in_alpha(self, mu, m, N, a, b):
        """계수가 양수면 α가 커질 때 Oblivious로 되돌아가지 않음"""
        terms = switching_terms(mu, m, N)
        assume(terms.coefficient > 0)
        lo, hi = sorted((a, b))
        if select_strategy(mu, m, lo, N).chosen is StrategyKind.EXPURGATION:
            assert select_strategy(mu, m, hi, N).chosen is StrategyKind.EXPURGATION
