# Data Models Package
"""데이터 모델 정의"""

from .crowd_models import (
    AnswerSymbol,
    AnswerWord,
    WorkerProfile,
    DistributionKind,
    DistributionSpec,
    CrowdModel,
    TruthWord,
    INVALID_CODEWORD,
    SKIP_CODE,
    greedy_count
)
from .fusion_models import (
    WeightKind,
    WeightScheme,
    StrategyKind,
    FusionResult,
    EstimationResult,
    LengthHistogram,
    StrategyDecision
)
from .analysis_models import ProfileCount, TwPmf, AsymptoticMoments
from .report_models import ReportRow, ExperimentReport, standard_error
from .errors import (
    CrowdFusionError,
    UnsupportedSchemeError,
    DegenerateReliabilityError,
    LimitUndefinedError,
    ConfigError,
    EnumerationTooLargeError,
    AnswerParseError
)

__all__ = [
    # 크라우드 모델
    "AnswerSymbol",
    "AnswerWord",
    "WorkerProfile",
    "DistributionKind",
    "DistributionSpec",
    "CrowdModel",
    "TruthWord",
    "INVALID_CODEWORD",
    "SKIP_CODE",
    "greedy_count",
    # 융합/추정 모델
    "WeightKind",
    "WeightScheme",
    "StrategyKind",
    "FusionResult",
    "EstimationResult",
    "LengthHistogram",
    "StrategyDecision",
    # 분석 모델
    "ProfileCount",
    "TwPmf",
    "AsymptoticMoments",
    # 보고서 모델
    "ReportRow",
    "ExperimentReport",
    "standard_error",
    # 예외
    "CrowdFusionError",
    "UnsupportedSchemeError",
    "DegenerateReliabilityError",
    "LimitUndefinedError",
    "ConfigError",
    "EnumerationTooLargeError",
    "AnswerParseError"
]
