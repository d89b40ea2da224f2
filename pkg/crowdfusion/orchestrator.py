"""
ExperimentOrchestrator - Monte Carlo 실험 조율자

- 스윕 셀마다 시행 블록을 생성하고 융합 결과를 채점
- 블록별 난수 스트림 (seed, block, "trials", cell) 으로 병렬 작업자 수와 무관한 결과
- Adaptive 전략 / 추정 m 을 쓰는 Expurgation 은 셀마다 보정(calibration) 배치로 추정
- 해석 P_c (정확식이 상한 안이면 정확식, 아니면 점근식) 를 함께 보고

블록 내 난수 추출 순서는 고정:
정답 → p/ρ → u_skip → u_correct → 강제 응답 비트 → 동점 동전 → 기준 동전 → 훈련 문항
"""

import dataclasses
import logging
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from crowdfusion.analysis.asymptotic import asymptotic_pc, asymptotic_pc_mv
from crowdfusion.analysis.exact import exact_pc_expurgation, exact_pc_honest, exact_pc_oblivious
from crowdfusion.crowd.generator import answers_from_uniforms, decode_classes, draw_truth, sample_profile_arrays
from crowdfusion.estimation.greedy_mle import estimate_m_alpha
from crowdfusion.estimation.mu_estimators import clamp_mu, mu_benchmark_batch, mu_training_batch
from crowdfusion.estimation.switching import select_strategy
from crowdfusion.fusion.aggregators import bit_margins, log_odds, resolve_bits
from crowdfusion.fusion.strategies import strategy_weights
from crowdfusion.fusion.weights import solve_x
from crowdfusion.models.config import (
    ExperimentConfig,
    MuSourceKind,
    SchemeName,
    StrategyName,
    SweepParameter,
)
from crowdfusion.models.crowd_models import SKIP_CODE, CrowdModel, DistributionSpec
from crowdfusion.models.errors import EnumerationTooLargeError, LimitUndefinedError
from crowdfusion.models.fusion_models import LengthHistogram, StrategyKind
from crowdfusion.models.report_models import ExperimentReport, ReportRow, standard_error
from crowdfusion.utils.rng import derive_stream


logger = logging.getLogger(__name__)

MIN_M_HAT = 0.01
CV_CLIP = 1e-6
TRIALS_TAG = "trials"
CALIBRATION_TAG = "calibration"


@dataclass
class TrialBatch:
    """한 블록의 시행 데이터

    - classes: (B,) 정답 클래스
    - codes: (B, W, N) 답안 코드
    - rho: (B, W, N) 작업자-비트 신뢰도 (Chair-Varshney 용)
    - guesses / coins / bench_coins: 강제 응답 비트, 동점 동전, 다수결 기준 동전
    - gold / training_codes: 훈련 문항 정답 (B, T) 과 답안 (B, W, T)
    """
    classes: np.ndarray
    codes: np.ndarray
    rho: np.ndarray
    guesses: np.ndarray
    coins: np.ndarray
    bench_coins: np.ndarray
    gold: Optional[np.ndarray] = None
    training_codes: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.classes.shape[0]


def draw_batch(model: CrowdModel, rng: np.random.Generator, size: int, training_items: int = 0) -> TrialBatch:
    """고정된 순서로 한 블록의 시행 데이터를 추출"""
    W, N = model.W, model.N
    classes, truth_bits = draw_truth(model.M, N, rng, size)
    skip, rho, _ = sample_profile_arrays(model, rng, size)
    u_skip = rng.random((size, W, N))
    u_correct = rng.random((size, W, N))
    codes = answers_from_uniforms(skip, rho, truth_bits, u_skip, u_correct)
    guesses = rng.integers(0, 2, size=(size, W, N), dtype=np.int8)
    coins = rng.integers(0, 2, size=(size, N), dtype=np.int8)
    bench_coins = rng.integers(0, 2, size=(size, N), dtype=np.int8)

    gold = training_codes = None
    if training_items > 0:
        T = training_items
        gold = rng.integers(0, 2, size=(size, T), dtype=np.int8)
        t_skip = model.p_dist.sample(rng, (size, W, T))
        t_rho = model.rho_dist.sample(rng, (size, W, T))
        g = model.n_greedy
        t_skip[:, :g, :] = 0.0
        t_rho[:, :g, :] = 0.5
        training_codes = answers_from_uniforms(
            t_skip, t_rho, gold, rng.random((size, W, T)), rng.random((size, W, T))
        )
    return TrialBatch(
        classes=classes,
        codes=codes,
        rho=rho,
        guesses=guesses,
        coins=coins,
        bench_coins=bench_coins,
        gold=gold,
        training_codes=training_codes
    )


@dataclass(frozen=True)
class CellPlan:
    """한 스윕 셀의 실행 계획 (프로세스 간 전달 가능)

    strategy는 Adaptive 선택이 끝난 실제 전략이다.
    """
    index: int
    sweep: Optional[float]
    model: CrowdModel
    scheme: SchemeName
    strategy: StrategyKind
    mu_source: MuSourceKind
    training_items: int
    m_weight: float
    exclude_full_length: bool

    def trial_mu(self, batch: TrialBatch) -> np.ndarray:
        """시행별 가중치용 μ ([0.5, 1]로 제한)"""
        if self.mu_source is MuSourceKind.TRAINING:
            mu = mu_training_batch(batch.training_codes, batch.gold)
        elif self.mu_source is MuSourceKind.BENCHMARK:
            mu = mu_benchmark_batch(batch.codes, batch.bench_coins, self.exclude_full_length)
        else:
            return np.full(batch.size, clamp_mu(self.model.mu))
        clamped = mu < 0.5
        if clamped.any():
            logger.debug(f"셀 {self.index}: μ̂ < 0.5 인 시행 {int(clamped.sum())}개를 0.5로 제한")
        return np.clip(mu, 0.5, 1.0)

    def weights(self, batch: TrialBatch) -> Tuple[np.ndarray, np.ndarray]:
        """(채점용 코드, 가중치) 반환"""
        codes = batch.codes
        if self.scheme is SchemeName.FORCED_MV:
            forced = np.where(codes == SKIP_CODE, batch.guesses, codes)
            return forced, np.ones(codes.shape[:2])
        if self.scheme is SchemeName.CHAIR_VARSHNEY:
            return codes, log_odds(batch.rho, clip=CV_CLIP)
        if self.scheme is SchemeName.UNIFORM:
            return codes, strategy_weights(codes, self.strategy, 1.0)

        base = self.trial_mu(batch)
        if self.strategy is StrategyKind.EXPURGATION:
            base = base * solve_x(self.m_weight, self.model.N)
        return codes, strategy_weights(codes, self.strategy, base)

    def score(self, batch: TrialBatch) -> np.ndarray:
        """시행별 정답 여부 (B,)"""
        codes, weights = self.weights(batch)
        s1, s0 = bit_margins(codes, weights)
        bits, _ = resolve_bits(s1, s0, batch.coins)
        return decode_classes(bits, self.model.M) == batch.classes


def run_block(task: Tuple[CellPlan, int, int, int, int]) -> int:
    """한 블록을 실행하고 정답 시행 수를 반환

    Args:
        task: (plan, seed, block, start, size)
    """
    plan, seed, block, start, size = task
    rng = derive_stream(seed, block, TRIALS_TAG, plan.index)
    batch = draw_batch(plan.model, rng, size, plan.training_items)
    correct = int(plan.score(batch).sum())
    logger.debug(f"셀 {plan.index} 블록 {block} (시행 {start}..{start + size - 1}): 정답 {correct}/{size}")
    return correct


def cell_model(config: ExperimentConfig, value: Optional[float]) -> Tuple[CrowdModel, int]:
    """스윕 값을 반영한 (크라우드 모델, 훈련 문항 수)"""
    model = config.model.to_model()
    training_items = config.training_items
    if config.sweep is None or value is None:
        return model, training_items

    parameter = config.sweep.parameter
    if parameter is SweepParameter.W:
        model = dataclasses.replace(model, W=int(value))
    elif parameter is SweepParameter.P:
        model = dataclasses.replace(model, p_dist=DistributionSpec.fixed(value))
    elif parameter is SweepParameter.RHO:
        model = dataclasses.replace(model, rho_dist=DistributionSpec.fixed(value))
    elif parameter is SweepParameter.ALPHA:
        model = dataclasses.replace(model, alpha=value)
    elif parameter is SweepParameter.T:
        training_items = int(value)
    return model, training_items


def analytic_pc(
    model: CrowdModel,
    scheme: SchemeName,
    strategy: StrategyKind,
    mu_source: MuSourceKind
) -> Optional[float]:
    """셀의 해석 P_c

    - forced_mv: 점근식 (탐욕 작업자가 없을 때)
    - reject_weighted + 알려진 μ: 정확식, 상한 초과 시 점근식 (정직 크라우드만)
    - 그 외: None

    정확식은 비트별 정답 확률의 곱이고 pc 열은 모든 비트가 함께 맞을 결합 확률이다.
    어느 비트에서도 소수 쪽 가중치 합이 다수 쪽에 닿지 못하면 (가중치 비 μ^-(N-1)이 작을 때)
    두 값은 같다. 예: W=3, N=2, μ=0.8, m=0.3 에서 둘 다 0.680341229584.
    """
    W, N, mu, m = model.W, model.N, model.mu, model.m
    if scheme is SchemeName.FORCED_MV:
        return asymptotic_pc_mv(W, N, mu, m) if model.n_greedy == 0 else None
    if scheme is not SchemeName.REJECT_WEIGHTED or mu_source is not MuSourceKind.KNOWN or mu < 0.5:
        return None

    alpha = model.alpha
    try:
        if model.n_greedy == 0 and strategy is not StrategyKind.EXPURGATION:
            try:
                return exact_pc_honest(W, N, mu, m)
            except EnumerationTooLargeError as e:
                logger.debug(f"정확식 열거 상한 초과 ({e.size} > {e.cap}), 점근식 사용")
                return asymptotic_pc(W, N, mu, m)
        if strategy is StrategyKind.EXPURGATION:
            return exact_pc_expurgation(W, N, mu, m, alpha, verbatim=False)
        return exact_pc_oblivious(W, N, mu, m, alpha, verbatim=False)
    except (EnumerationTooLargeError, LimitUndefinedError) as e:
        logger.debug(f"해석 P_c 생략: {e}")
        return None


class ExperimentOrchestrator:
    """Monte Carlo 실험 조율자

    설정 하나를 받아 스윕 셀별로 시행을 돌리고 ExperimentReport를 만든다.
    """

    def __init__(self, config: ExperimentConfig, workers: Optional[int] = None):
        """ExperimentOrchestrator 초기화

        Args:
            config: 실험 설정
            workers: 병렬 프로세스 수 (None이면 설정/환경값)
        """
        self.config = config
        self.workers = workers or config.resolved_workers()
        self.block_size = config.resolved_block_size()
        self.calibrations: List[Dict[str, Any]] = []
        logger.info(f"ExperimentOrchestrator 초기화 완료: {config.method_label} (workers={self.workers})")

    @property
    def sweep_values(self) -> List[Optional[float]]:
        if self.config.sweep is None:
            return [None]
        return list(self.config.sweep.values)

    def _needs_calibration(self) -> bool:
        strategy = self.config.strategy
        if strategy is StrategyName.ADAPTIVE:
            return True
        return strategy is StrategyName.EXPURGATION and self.config.mu_source is not MuSourceKind.KNOWN

    def calibrate(self, index: int, model: CrowdModel, training_items: int) -> Dict[str, Any]:
        """보정 배치로 (μ, m, α) 추정 (셀당 한 번)

        Returns:
            추정값과 (Adaptive면) 선택된 전략을 담은 딕셔너리
        """
        rng = derive_stream(self.config.seed, index, CALIBRATION_TAG)
        batch = draw_batch(model, rng, self.config.calibration_trials, training_items)

        estimates = [estimate_m_alpha(LengthHistogram.from_codes(codes), model.W, model.N) for codes in batch.codes]
        m_hat = float(np.mean([e[0] for e in estimates]))
        alpha_hat = float(np.mean([e[1] for e in estimates]))

        source = self.config.mu_source
        if source is MuSourceKind.TRAINING:
            mu_hat = float(mu_training_batch(batch.training_codes, batch.gold).mean())
        elif source is MuSourceKind.BENCHMARK:
            mu_hat = float(mu_benchmark_batch(batch.codes, batch.bench_coins, exclude_full_length=True).mean())
        else:
            mu_hat = model.mu
        mu_hat = clamp_mu(mu_hat)
        m_used = max(m_hat, MIN_M_HAT)

        result: Dict[str, Any] = {
            "cell": index,
            "mu_hat": mu_hat,
            "m_hat": m_hat,
            "alpha_hat": alpha_hat,
            "m_used": m_used
        }
        if self.config.strategy is StrategyName.ADAPTIVE:
            decision = select_strategy(mu_hat, m_used, alpha_hat, model.N)
            result["chosen"] = decision.chosen.value
            result["threshold"] = decision.threshold
        else:
            result["chosen"] = StrategyKind.EXPURGATION.value
        logger.info(f"셀 {index} 보정 완료: μ̂={mu_hat:.3f}, m̂={m_hat:.3f}, α̂={alpha_hat:.3f} → {result['chosen']}")
        return result

    def plan_cell(self, index: int, value: Optional[float]) -> CellPlan:
        """셀 실행 계획 수립 (필요하면 보정 포함)"""
        config = self.config
        model, training_items = cell_model(config, value)
        m_weight = max(model.m, MIN_M_HAT)

        if config.strategy is StrategyName.ADAPTIVE:
            strategy = StrategyKind.OBLIVIOUS
        else:
            strategy = StrategyKind(config.strategy.value)

        if self._needs_calibration():
            calibration = self.calibrate(index, model, training_items)
            self.calibrations.append(calibration)
            strategy = StrategyKind(calibration["chosen"])
            if config.mu_source is not MuSourceKind.KNOWN:
                m_weight = calibration["m_used"]

        return CellPlan(
            index=index,
            sweep=value,
            model=model,
            scheme=config.scheme,
            strategy=strategy,
            mu_source=config.mu_source,
            training_items=training_items if config.mu_source is MuSourceKind.TRAINING else 0,
            m_weight=m_weight,
            exclude_full_length=config.strategy is not StrategyName.HONEST
        )

    def _tasks(self, plan: CellPlan) -> List[Tuple[CellPlan, int, int, int, int]]:
        trials, size = self.config.trials, self.block_size
        return [
            (plan, self.config.seed, block, start, min(size, trials - start))
            for block, start in enumerate(range(0, trials, size))
        ]

    def run_cell(self, plan: CellPlan, pool: Optional[Any] = None) -> ReportRow:
        """셀 하나 실행"""
        started = time.perf_counter()
        tasks = self._tasks(plan)
        counts = pool.map(run_block, tasks) if pool is not None else [run_block(t) for t in tasks]
        elapsed_ms = (time.perf_counter() - started) * 1000.0

        trials = self.config.trials
        pc = sum(counts) / trials
        row = ReportRow(
            sweep=plan.sweep,
            method=self.config.method_label,
            pc=pc,
            stderr=standard_error(pc, trials),
            analytic_pc=analytic_pc(plan.model, plan.scheme, plan.strategy, plan.mu_source),
            runtime_ms=elapsed_ms if self.config.record_runtime else None
        )
        logger.info(f"셀 {plan.index} 완료: P̂_c={pc:.4f} ± {row.stderr:.4f} (strategy={plan.strategy.value})")
        return row

    def metadata(self) -> Dict[str, Any]:
        """보고서 메타데이터 (작업자 수 같은 실행 환경 값은 제외)"""
        from crowdfusion import __version__

        data: Dict[str, Any] = {
            "config": self.config.model_dump(mode="json", exclude={"workers"}),
            "seed": self.config.seed,
            "version": f"crowdfusion-{__version__}",
            "block_size": self.block_size
        }
        if self.calibrations:
            data["calibration"] = self.calibrations
            data["calibration_note"] = (
                "(mu, m, alpha) are estimated once per sweep cell from a separate calibration batch "
                f"of {self.config.calibration_trials} trials, not per task instance"
            )
        return data

    def run(self) -> ExperimentReport:
        """실험 실행

        Returns:
            ExperimentReport: 셀별 행과 메타데이터
        """
        self.calibrations = []
        plans = [self.plan_cell(i, value) for i, value in enumerate(self.sweep_values)]
        logger.info(f"실험 시작: {self.config.method_label}, 셀 {len(plans)}개, 시행 {self.config.trials}회")

        if self.workers > 1:
            with Pool(self.workers) as pool:
                rows = [self.run_cell(plan, pool) for plan in plans]
        else:
            rows = [self.run_cell(plan) for plan in plans]

        report = ExperimentReport(rows=rows, metadata=self.metadata())
        logger.info(f"실험 완료: {self.config.method_label}")
        return report


def run_monte_carlo(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentReport:
    """Monte Carlo 실험 실행

    Args:
        config: 실험 설정
        workers: 병렬 프로세스 수 (결과에는 영향 없음)

    Returns:
        ExperimentReport
    """
    return ExperimentOrchestrator(config, workers=workers).run()
