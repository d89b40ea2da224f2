# Fusion Package
"""가중치, 융합 규칙, 탐욕 작업자 대응 전략"""

from crowdfusion.fusion.weights import compute_weight, length_weights, solve_x, normalization_residual
from crowdfusion.fusion.aggregators import (
    bit_margins,
    bit_outcomes,
    resolve_bits,
    fuse_bitwise,
    fuse_classwise,
    chair_varshney_fuse,
)
from crowdfusion.fusion.strategies import apply_strategy, strategy_scheme, strategy_weights

__all__ = [
    "compute_weight",
    "length_weights",
    "solve_x",
    "normalization_residual",
    "bit_margins",
    "bit_outcomes",
    "resolve_bits",
    "fuse_bitwise",
    "fuse_classwise",
    "chair_varshney_fuse",
    "apply_strategy",
    "strategy_scheme",
    "strategy_weights",
]
