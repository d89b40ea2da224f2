"""
실험 설정 및 런타임 설정

- ExperimentConfig: Monte Carlo 실험 설정 (YAML 문서에서 로드)
- FusionSettings: 환경 변수(CROWDFUSION_*) / .env 기반 런타임 설정
"""

import logging
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from crowdfusion.models.crowd_models import CrowdModel, DistributionSpec
from crowdfusion.models.errors import ConfigError


logger = logging.getLogger(__name__)


class FusionSettings(BaseSettings):
    """런타임 설정

    환경 변수 CROWDFUSION_EXACT_PROFILE_CAP 등으로 덮어쓸 수 있다.
    """
    model_config = SettingsConfigDict(env_prefix="CROWDFUSION_", env_file=".env", extra="ignore")

    exact_profile_cap: int = 10_000_000
    oracle_term_cap: int = 100_000_000
    block_size: int = 1000
    workers: int = 1
    log_level: str = "INFO"
    tie_rtol: float = 1e-9


@lru_cache(maxsize=1)
def get_settings() -> FusionSettings:
    """캐시된 런타임 설정 반환"""
    return FusionSettings()


class SchemeName(str, Enum):
    """Monte Carlo 융합 방식"""
    REJECT_WEIGHTED = "reject_weighted"
    UNIFORM = "uniform"
    FORCED_MV = "forced_mv"
    CHAIR_VARSHNEY = "chair_varshney"


class StrategyName(str, Enum):
    """Monte Carlo 전략 (ADAPTIVE는 추정 후 전략 선택)"""
    HONEST = "honest"
    OBLIVIOUS = "oblivious"
    EXPURGATION = "expurgation"
    ADAPTIVE = "adaptive"


class MuSourceKind(str, Enum):
    """μ 출처"""
    KNOWN = "known"
    TRAINING = "training"
    BENCHMARK = "benchmark"


class SweepParameter(str, Enum):
    """스윕 가능한 파라미터"""
    W = "W"
    P = "p"
    RHO = "rho"
    ALPHA = "alpha"
    T = "T"


class DistributionConfig(BaseModel):
    """분포 설정: kind=fixed 이면 value, uniform 이면 lo/hi"""
    model_config = ConfigDict(extra="forbid")

    kind: str = "fixed"
    value: Optional[float] = None
    lo: Optional[float] = None
    hi: Optional[float] = None

    @model_validator(mode="after")
    def _check_fields(self) -> "DistributionConfig":
        if self.kind == "fixed":
            if self.value is None or not 0.0 <= self.value <= 1.0:
                raise ValueError("fixed distribution requires value in [0, 1]")
        elif self.kind == "uniform":
            if self.lo is None or self.hi is None or not 0.0 <= self.lo <= self.hi <= 1.0:
                raise ValueError("uniform distribution requires 0 <= lo <= hi <= 1")
        else:
            raise ValueError(f"unknown distribution kind: {self.kind}")
        return self

    def to_spec(self) -> DistributionSpec:
        if self.kind == "fixed":
            return DistributionSpec.fixed(self.value)
        return DistributionSpec.uniform(self.lo, self.hi)

    @classmethod
    def from_spec(cls, spec: DistributionSpec) -> "DistributionConfig":
        return cls(**spec.to_dict())


class CrowdModelConfig(BaseModel):
    """크라우드 모델 설정"""
    model_config = ConfigDict(extra="forbid")

    W: int = Field(ge=1)
    N: int = Field(ge=1)
    M: int = Field(ge=2)
    p: DistributionConfig
    rho: DistributionConfig
    alpha: float = Field(default=0.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_code_length(self) -> "CrowdModelConfig":
        if self.M > 2 ** self.N:
            raise ValueError(f"M={self.M} cannot be encoded with N={self.N} bits")
        return self

    def to_model(self) -> CrowdModel:
        return CrowdModel(
            W=self.W,
            N=self.N,
            M=self.M,
            p_dist=self.p.to_spec(),
            rho_dist=self.rho.to_spec(),
            alpha=self.alpha
        )


class SweepConfig(BaseModel):
    """스윕 설정"""
    model_config = ConfigDict(extra="forbid")

    parameter: SweepParameter
    values: List[float] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_domain(self) -> "SweepConfig":
        for value in self.values:
            if self.parameter in (SweepParameter.W, SweepParameter.T):
                if value < 1 or value != int(value):
                    raise ValueError(f"{self.parameter.value} sweep values must be positive integers, got {value}")
            elif not 0.0 <= value <= 1.0:
                raise ValueError(f"{self.parameter.value} sweep values must be in [0, 1], got {value}")
        return self


class ExperimentConfig(BaseModel):
    """Monte Carlo 실험 설정

    - model: 크라우드 모델
    - scheme / strategy / mu_source: 융합 파이프라인 선택
    - training_items: mu_source=training 일 때 훈련 문항 수 T
    - trials / seed: 시행 수와 64비트 마스터 시드
    - sweep: 선택적 파라미터 스윕
    - block_size: 난수 스트림 블록 크기 (결과는 workers 수와 무관)
    """
    model_config = ConfigDict(extra="forbid")

    model: CrowdModelConfig
    scheme: SchemeName = SchemeName.REJECT_WEIGHTED
    strategy: StrategyName = StrategyName.HONEST
    mu_source: MuSourceKind = MuSourceKind.KNOWN
    training_items: int = Field(default=0, ge=0)
    trials: int = Field(default=10000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    sweep: Optional[SweepConfig] = None
    workers: Optional[int] = Field(default=None, ge=1)
    block_size: Optional[int] = Field(default=None, ge=1)
    calibration_trials: int = Field(default=20, ge=1)
    record_runtime: bool = False
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_mu_source(self) -> "ExperimentConfig":
        if self.mu_source is MuSourceKind.TRAINING and self.training_items < 1:
            if self.sweep is None or self.sweep.parameter is not SweepParameter.T:
                raise ValueError("mu_source=training requires training_items >= 1")
        return self

    @model_validator(mode="after")
    def _check_scheme_strategy(self) -> "ExperimentConfig":
        if self.scheme in (SchemeName.FORCED_MV, SchemeName.CHAIR_VARSHNEY) and self.strategy is not StrategyName.HONEST:
            raise ValueError(f"scheme={self.scheme.value} supports only strategy=honest")
        if self.strategy is StrategyName.ADAPTIVE and self.scheme is not SchemeName.REJECT_WEIGHTED:
            raise ValueError("strategy=adaptive requires scheme=reject_weighted")
        return self

    @property
    def method_label(self) -> str:
        """보고서 method 열에 쓰이는 레이블"""
        if self.label:
            return self.label
        parts = [self.scheme.value, self.strategy.value, self.mu_source.value]
        if self.mu_source is MuSourceKind.TRAINING:
            parts[-1] = f"training{self.training_items}"
        return "/".join(parts)

    def resolved_block_size(self) -> int:
        return self.block_size or get_settings().block_size

    def resolved_workers(self) -> int:
        return self.workers or get_settings().workers


def load_experiment_config(source: Union[str, Path]) -> ExperimentConfig:
    """YAML 문서에서 실험 설정 로드

    Args:
        source: 설정 파일 경로

    Returns:
        ExperimentConfig: 검증된 설정

    Raises:
        ConfigError: 파일 파싱 또는 검증 실패 시
    """
    path = Path(source)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: YAML 파싱 실패: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"{path}: 설정 문서는 매핑이어야 합니다.")

    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: 설정 검증 실패: {e}") from e

    logger.info(f"실험 설정 로드 완료: {path} ({config.method_label})")
    return config
