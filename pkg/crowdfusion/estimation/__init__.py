# Estimation Package
"""μ, m, α 추정과 전략 전환 기준"""

from crowdfusion.estimation.mu_estimators import (
    estimate_mu_training,
    estimate_mu_benchmark,
    mu_training_batch,
    mu_benchmark_batch,
    clamp_mu,
)
from crowdfusion.estimation.greedy_mle import estimate_m_alpha, log_likelihood
from crowdfusion.estimation.switching import (
    SwitchingTerms,
    switching_terms,
    switching_threshold,
    select_strategy,
)

__all__ = [
    "estimate_mu_training",
    "estimate_mu_benchmark",
    "mu_training_batch",
    "mu_benchmark_batch",
    "clamp_mu",
    "estimate_m_alpha",
    "log_likelihood",
    "SwitchingTerms",
    "switching_terms",
    "switching_threshold",
    "select_strategy",
]
