"""
Unit tests for experiment configuration

YAML 로드, 필드 검증, 방식/전략 조합 제약, 런타임 설정 검증
"""
import os
import shutil
import tempfile

import pytest
import yaml
from pydantic import ValidationError

from crowdfusion.models.config import (
    CrowdModelConfig,
    DistributionConfig,
    ExperimentConfig,
    FusionSettings,
    MuSourceKind,
    SchemeName,
    StrategyName,
    SweepConfig,
    SweepParameter,
    load_experiment_config,
)
from crowdfusion.models.crowd_models import DistributionKind
from crowdfusion.models.errors import ConfigError


@pytest.fixture
def temp_dir():
    temp_path = tempfile.mkdtemp()
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


def _model(**overrides):
    data = {
        "W": 10,
        "N": 3,
        "M": 8,
        "p": {"kind": "fixed", "value": 0.3},
        "rho": {"kind": "uniform", "lo": 0.6, "hi": 1.0},
    }
    data.update(overrides)
    return data


def _write_yaml(temp_dir, data, name="experiment.yaml"):
    path = os.path.join(temp_dir, name)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(data, f)
    return path


class TestDistributionConfig:
    def test_fixed(self):
        spec = DistributionConfig(kind="fixed", value=0.4).to_spec()
        assert spec.kind is DistributionKind.FIXED
        assert spec.mean == pytest.approx(0.4)

    def test_uniform(self):
        spec = DistributionConfig(kind="uniform", lo=0.5, hi=0.9).to_spec()
        assert spec.mean == pytest.approx(0.7)

    @pytest.mark.parametrize("data", [
        {"kind": "fixed"},
        {"kind": "fixed", "value": 1.5},
        {"kind": "uniform", "lo": 0.9, "hi": 0.5},
        {"kind": "beta", "value": 0.5},
        {"kind": "fixed", "value": 0.5, "extra": 1},
    ])
    def test_invalid(self, data):
        with pytest.raises(ValidationError):
            DistributionConfig(**data)


class TestCrowdModelConfig:
    def test_to_model(self):
        model = CrowdModelConfig(**_model(alpha=0.2)).to_model()
        assert (model.W, model.N, model.M) == (10, 3, 8)
        assert model.n_greedy == 2
        assert model.m == pytest.approx(0.3)
        assert model.mu == pytest.approx(0.8)

    def test_class_count_must_fit_code_length(self):
        with pytest.raises(ValidationError):
            CrowdModelConfig(**_model(M=9))

    def test_bounds(self):
        with pytest.raises(ValidationError):
            CrowdModelConfig(**_model(W=0))
        with pytest.raises(ValidationError):
            CrowdModelConfig(**_model(alpha=1.5))


class TestSweepConfig:
    def test_integer_sweep(self):
        assert SweepConfig(parameter="W", values=[1, 5, 10]).parameter is SweepParameter.W
        with pytest.raises(ValidationError):
            SweepConfig(parameter="W", values=[2.5])
        with pytest.raises(ValidationError):
            SweepConfig(parameter="T", values=[0])

    def test_probability_sweep(self):
        with pytest.raises(ValidationError):
            SweepConfig(parameter="p", values=[0.5, 1.2])

    def test_empty_values(self):
        with pytest.raises(ValidationError):
            SweepConfig(parameter="alpha", values=[])


class TestExperimentConfig:
    def test_defaults(self):
        config = ExperimentConfig(model=_model())
        assert config.scheme is SchemeName.REJECT_WEIGHTED
        assert config.strategy is StrategyName.HONEST
        assert config.mu_source is MuSourceKind.KNOWN
        assert config.method_label == "reject_weighted/honest/known"

    def test_training_requires_items(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(model=_model(), mu_source="training")

    def test_training_items_may_come_from_sweep(self):
        config = ExperimentConfig(
            model=_model(), mu_source="training", sweep={"parameter": "T", "values": [1, 2, 4]}
        )
        assert config.training_items == 0

    def test_training_label(self):
        config = ExperimentConfig(model=_model(), mu_source="training", training_items=5)
        assert config.method_label == "reject_weighted/honest/training5"

    def test_explicit_label(self):
        assert ExperimentConfig(model=_model(), label="adaptive-run").method_label == "adaptive-run"

    @pytest.mark.parametrize("scheme", ["forced_mv", "chair_varshney"])
    def test_baselines_require_honest(self, scheme):
        with pytest.raises(ValidationError):
            ExperimentConfig(model=_model(), scheme=scheme, strategy="oblivious")
        assert ExperimentConfig(model=_model(), scheme=scheme).scheme.value == scheme

    def test_adaptive_requires_reject_weighted(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(model=_model(), scheme="uniform", strategy="adaptive")
        assert ExperimentConfig(model=_model(), strategy="adaptive").strategy is StrategyName.ADAPTIVE

    def test_seed_range(self):
        assert ExperimentConfig(model=_model(), seed=2 ** 64 - 1).seed == 2 ** 64 - 1
        with pytest.raises(ValidationError):
            ExperimentConfig(model=_model(), seed=2 ** 64)

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(model=_model(), runs=10)

    def test_resolved_runtime_values(self):
        config = ExperimentConfig(model=_model(), workers=3, block_size=50)
        assert config.resolved_workers() == 3
        assert config.resolved_block_size() == 50


class TestLoadExperimentConfig:
    def test_load_yaml(self, temp_dir):
        path = _write_yaml(temp_dir, {
            "model": _model(alpha=0.1),
            "strategy": "expurgation",
            "trials": 500,
            "seed": 42,
            "sweep": {"parameter": "alpha", "values": [0.0, 0.5]},
        })
        config = load_experiment_config(path)
        assert config.trials == 500
        assert config.seed == 42
        assert config.strategy is StrategyName.EXPURGATION
        assert config.sweep.values == [0.0, 0.5]

    def test_invalid_document(self, temp_dir):
        path = _write_yaml(temp_dir, {"model": _model(), "trials": 0})
        with pytest.raises(ConfigError):
            load_experiment_config(path)

    def test_not_a_mapping(self, temp_dir):
        path = _write_yaml(temp_dir, [1, 2, 3])
        with pytest.raises(ConfigError):
            load_experiment_config(path)

    def test_broken_yaml(self, temp_dir):
        path = os.path.join(temp_dir, "broken.yaml")
        with open(path, "w", encoding="utf-8") as f:
            f.write("model: [unclosed\n")
        with pytest.raises(ConfigError):
            load_experiment_config(path)

    def test_missing_file(self, temp_dir):
        with pytest.raises(OSError):
            load_experiment_config(os.path.join(temp_dir, "missing.yaml"))


class TestFusionSettings:
    def test_defaults(self):
        settings = FusionSettings(_env_file=None)
        assert settings.exact_profile_cap == 10_000_000
        assert settings.oracle_term_cap == 100_000_000
        assert settings.tie_rtol == pytest.approx(1e-9)

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("CROWDFUSION_EXACT_PROFILE_CAP", "123")
        monkeypatch.setenv("CROWDFUSION_WORKERS", "4")
        settings = FusionSettings(_env_file=None)
        assert settings.exact_profile_cap == 123
        assert settings.workers == 4
