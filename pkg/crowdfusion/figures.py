"""
그림/표 재현 시나리오

- fig2: W=20, ρ=0.8, p 스윕 (제안 방식 vs 강제 응답 다수결)
- fig3: W=20, p=0.5, ρ 스윕
- fig4: W 스윕, p~U(0,1), ρ~U(0.6,1) + 두 점근식
- fig5: W=15, α 스윕, Oblivious / Expurgation + 임계값 표시
- fig6: (μ, m) 격자 위 임계값 곡면
- fig7: μ 추정 오버헤드 (훈련 문항 수 T 스윕), N ∈ {3, 6, 10}
- fig8: fig5 + Adaptive 곡선
- table1: α 별 평균 α̂ (MLE)
- estimated_mu_workers: W 스윕, p~U(0,1), ρ~U(0.5,1), 추정 μ (훈련 T=10 / 다수결 기준) vs 강제 응답 다수결
- estimated_mu_training: W 10~40 구간, 훈련 문항 수 T ∈ {2, 10, 50} 곡선 + 다수결 기준 + 알려진 μ

곡선마다 CSV 하나 (x,method,pc,stderr,analytic_pc), 그림 메타데이터는 <id>.meta.json.
"""

import logging
import os
import re
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from crowdfusion.analysis.asymptotic import asymptotic_pc, asymptotic_pc_mv
from crowdfusion.estimation.greedy_mle import estimate_m_alpha
from crowdfusion.estimation.switching import switching_terms
from crowdfusion.exporters.exporters import FigureCSVExporter, JSONExporter
from crowdfusion.models.config import ExperimentConfig
from crowdfusion.models.crowd_models import CrowdModel, DistributionSpec
from crowdfusion.models.fusion_models import LengthHistogram
from crowdfusion.models.report_models import ExperimentReport, ReportRow
from crowdfusion.orchestrator import draw_batch, run_monte_carlo
from crowdfusion.utils.rng import derive_stream


logger = logging.getLogger(__name__)

M_CLASSES = 8
DEFAULT_TRIALS = 10000
TABLE1_RUNS = 100

P_SWEEP = [round(0.1 * i, 2) for i in range(11)]
RHO_SWEEP = [round(0.5 + 0.05 * i, 2) for i in range(11)]
W_SWEEP = [5, 10, 20, 40, 60, 80, 100, 150, 200]
ALPHA_SWEEP = [round(0.05 * i, 2) for i in range(21)]
T_SWEEP = [1, 2, 5, 10, 20, 50]
MU_GRID = [round(0.55 + 0.05 * i, 2) for i in range(10)]
M_GRID = [round(0.05 * i, 2) for i in range(1, 20)]
TABLE1_ALPHAS = [round(0.1 * i, 1) for i in range(1, 10)]
ESTIMATED_T = 10
W_ZOOM = [10, 20, 40]
ZOOM_T = [2, 10, 50]

FIG5_W = 15
FIG5_MU = 0.75
FIG5_M = 0.5

FIGURE_IDS = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table1",
    "estimated_mu_workers", "estimated_mu_training",
]

Builder = Callable[[int, int, Optional[int]], Tuple[List[ExperimentReport], Dict[str, Any]]]


def _fixed(value: float) -> Dict[str, Any]:
    return {"kind": "fixed", "value": value}


def _uniform(lo: float, hi: float) -> Dict[str, Any]:
    return {"kind": "uniform", "lo": lo, "hi": hi}


def _experiment(
    model: Dict[str, Any],
    label: str,
    trials: int,
    seed: int,
    sweep: Optional[Tuple[str, List[float]]] = None,
    **options
) -> ExperimentConfig:
    data: Dict[str, Any] = {"model": model, "trials": trials, "seed": seed, "label": label}
    if sweep is not None:
        data["sweep"] = {"parameter": sweep[0], "values": list(sweep[1])}
    data.update(options)
    return ExperimentConfig.model_validate(data)


def _run_all(configs: List[ExperimentConfig], workers: Optional[int]) -> List[ExperimentReport]:
    return [run_monte_carlo(config, workers=workers) for config in configs]


def _proposed_vs_mv(model: Dict[str, Any], sweep, trials: int, seed: int, workers: Optional[int]):
    configs = [
        _experiment(model, "reject_weighted", trials, seed, sweep),
        _experiment(model, "forced_mv", trials, seed, sweep, scheme="forced_mv")
    ]
    return _run_all(configs, workers)


def _fig2(trials: int, seed: int, workers: Optional[int]):
    model = {"W": 20, "N": 3, "M": M_CLASSES, "p": _fixed(0.5), "rho": _fixed(0.8)}
    reports = _proposed_vs_mv(model, ("p", P_SWEEP), trials, seed, workers)
    return reports, {"x": "p", "W": 20, "rho": 0.8}


def _fig3(trials: int, seed: int, workers: Optional[int]):
    model = {"W": 20, "N": 3, "M": M_CLASSES, "p": _fixed(0.5), "rho": _fixed(0.8)}
    reports = _proposed_vs_mv(model, ("rho", RHO_SWEEP), trials, seed, workers)
    return reports, {"x": "rho", "W": 20, "p": 0.5}


def _fig4(trials: int, seed: int, workers: Optional[int]):
    model = {"W": 20, "N": 3, "M": M_CLASSES, "p": _uniform(0.0, 1.0), "rho": _uniform(0.6, 1.0)}
    reports = _proposed_vs_mv(model, ("W", W_SWEEP), trials, seed, workers)
    mu, m = 0.8, 0.5
    asym = [ReportRow(sweep=W, method="asymptotic", pc=asymptotic_pc(W, 3, mu, m), analytic_pc=asymptotic_pc(W, 3, mu, m)) for W in W_SWEEP]
    asym_mv = [ReportRow(sweep=W, method="asymptotic_mv", pc=asymptotic_pc_mv(W, 3, mu, m), analytic_pc=asymptotic_pc_mv(W, 3, mu, m)) for W in W_SWEEP]
    reports.append(ExperimentReport(rows=asym))
    reports.append(ExperimentReport(rows=asym_mv))
    return reports, {"x": "W", "p": "U(0,1)", "rho": "U(0.6,1)"}


def _greedy_model() -> Dict[str, Any]:
    return {"W": FIG5_W, "N": 3, "M": M_CLASSES, "p": _uniform(0.0, 1.0), "rho": _uniform(0.5, 1.0)}


def _threshold_marker() -> Dict[str, Any]:
    terms = switching_terms(FIG5_MU, FIG5_M, 3)
    return {"threshold": terms.threshold, "threshold_unclamped": terms.unclamped}


def _fig5(trials: int, seed: int, workers: Optional[int]):
    model = _greedy_model()
    sweep = ("alpha", ALPHA_SWEEP)
    configs = [
        _experiment(model, "oblivious", trials, seed, sweep, strategy="oblivious"),
        _experiment(model, "expurgation", trials, seed, sweep, strategy="expurgation")
    ]
    meta = {"x": "alpha", "W": FIG5_W, "mu": FIG5_MU, "m": FIG5_M}
    meta.update(_threshold_marker())
    return _run_all(configs, workers), meta


def _fig6(trials: int, seed: int, workers: Optional[int]):
    reports = []
    for mu in MU_GRID:
        rows = [
            ReportRow(sweep=m, method=f"threshold_mu{mu:.2f}", pc=switching_terms(mu, m, 3).threshold)
            for m in M_GRID
        ]
        reports.append(ExperimentReport(rows=rows))
    return reports, {"x": "m", "N": 3, "note": "pc column holds the clamped switching threshold"}


def _fig7(trials: int, seed: int, workers: Optional[int]):
    reports = []
    for N in (3, 6, 10):
        model = {"W": 20, "N": N, "M": M_CLASSES, "p": _uniform(0.0, 1.0), "rho": _uniform(0.5, 1.0)}
        sweep = ("T", T_SWEEP)
        configs = [
            _experiment(model, f"N{N}/known", trials, seed, sweep),
            _experiment(model, f"N{N}/training", trials, seed, sweep, mu_source="training"),
            _experiment(model, f"N{N}/benchmark", trials, seed, sweep, mu_source="benchmark")
        ]
        reports.extend(_run_all(configs, workers))
    return reports, {
        "x": "T",
        "note": "x axis is the number of training items T used by the training estimator; "
                "known and benchmark curves do not depend on T"
    }


def _estimated_model() -> Dict[str, Any]:
    return {"W": 20, "N": 3, "M": M_CLASSES, "p": _uniform(0.0, 1.0), "rho": _uniform(0.5, 1.0)}


def _estimated_mu_workers(trials: int, seed: int, workers: Optional[int]):
    """W 스윕, 가중치의 μ를 훈련 문항(T=10) 또는 다수결 기준으로 추정"""
    model = _estimated_model()
    sweep = ("W", W_SWEEP)
    configs = [
        _experiment(model, f"training_T{ESTIMATED_T}", trials, seed, sweep,
                    mu_source="training", training_items=ESTIMATED_T),
        _experiment(model, "benchmark", trials, seed, sweep, mu_source="benchmark"),
        _experiment(model, "forced_mv", trials, seed, sweep, scheme="forced_mv")
    ]
    return _run_all(configs, workers), {"x": "W", "p": "U(0,1)", "rho": "U(0.5,1)", "training_items": ESTIMATED_T}


def _estimated_mu_training(trials: int, seed: int, workers: Optional[int]):
    """W_ZOOM 구간에서 훈련 문항 수 T별 곡선과 다수결 기준 곡선 비교"""
    model = _estimated_model()
    sweep = ("W", W_ZOOM)
    configs = [
        _experiment(model, f"training_T{T}", trials, seed, sweep, mu_source="training", training_items=T)
        for T in ZOOM_T
    ]
    configs.append(_experiment(model, "benchmark", trials, seed, sweep, mu_source="benchmark"))
    configs.append(_experiment(model, "known", trials, seed, sweep))
    return _run_all(configs, workers), {
        "x": "W",
        "p": "U(0,1)",
        "rho": "U(0.5,1)",
        "note": "curves share the answer draws of each cell; only the training items differ"
    }


def _fig8(trials: int, seed: int, workers: Optional[int]):
    reports, meta = _fig5(trials, seed, workers)
    adaptive = _experiment(
        _greedy_model(), "adaptive", trials, seed, ("alpha", ALPHA_SWEEP),
        strategy="adaptive", mu_source="benchmark"
    )
    reports.append(run_monte_carlo(adaptive, workers=workers))
    return reports, meta


def _table1(trials: int, seed: int, workers: Optional[int]):
    runs = trials
    alpha_rows, m_rows = [], []
    for index, alpha in enumerate(TABLE1_ALPHAS):
        model = CrowdModel(
            W=20, N=3, M=M_CLASSES,
            p_dist=DistributionSpec.uniform(0.0, 1.0),
            rho_dist=DistributionSpec.uniform(0.5, 1.0),
            alpha=alpha
        )
        batch = draw_batch(model, derive_stream(seed, index, "table1"), runs)
        estimates = np.array([
            estimate_m_alpha(LengthHistogram.from_codes(codes), model.W, model.N) for codes in batch.codes
        ])
        spread = estimates.std(axis=0, ddof=1) / np.sqrt(runs) if runs > 1 else np.zeros(2)
        alpha_rows.append(ReportRow(sweep=alpha, method="alpha_hat", pc=float(estimates[:, 1].mean()),
                                    stderr=float(spread[1]), analytic_pc=alpha))
        m_rows.append(ReportRow(sweep=alpha, method="m_hat", pc=float(estimates[:, 0].mean()),
                                stderr=float(spread[0]), analytic_pc=model.m))
        logger.info(f"table1 α={alpha}: 평균 α̂={alpha_rows[-1].pc:.3f}")
    reports = [ExperimentReport(rows=alpha_rows), ExperimentReport(rows=m_rows)]
    return reports, {"x": "alpha", "runs": runs, "note": "pc column holds the mean estimate, analytic_pc the true value"}


_FIGURES: Dict[str, Builder] = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "table1": _table1,
    "estimated_mu_workers": _estimated_mu_workers,
    "estimated_mu_training": _estimated_mu_training,
}


def _curve_filename(figure_id: str, method: str) -> str:
    safe = re.sub(r"[^A-Za-z0-9_.-]+", "_", method)
    return f"{figure_id}_{safe}.csv"


def build_figure(
    figure_id: str,
    trials: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None
) -> Tuple[ExperimentReport, Dict[str, Any]]:
    """그림 데이터 계산 (파일 저장 없음)

    Returns:
        (모든 곡선의 행을 합친 보고서, 그림 메타데이터)

    Raises:
        ValueError: 알 수 없는 그림 id
    """
    if figure_id not in _FIGURES:
        raise ValueError(f"Unknown figure: {figure_id}. Supported: {FIGURE_IDS}")
    if trials is None:
        trials = TABLE1_RUNS if figure_id == "table1" else DEFAULT_TRIALS
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    logger.info(f"{figure_id} 재현 시작 (trials={trials}, seed={seed})")
    reports, meta = _FIGURES[figure_id](trials, seed, workers)
    combined = ExperimentReport()
    for report in reports:
        combined.extend(report)
    metadata = {"figure": figure_id, "trials": trials, "seed": seed, "M": M_CLASSES}
    metadata.update(meta)
    return combined, metadata


def reproduce_figure(
    figure_id: str,
    out_dir: str,
    trials: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None
) -> List[str]:
    """그림 재현 후 곡선별 CSV 저장

    Args:
        figure_id: FIGURE_IDS 중 하나
        out_dir: 출력 디렉토리
        trials: 점당 시행 수 (table1은 반복 횟수)
        seed: 마스터 시드
        workers: 병렬 프로세스 수

    Returns:
        저장된 파일 경로 목록 (곡선 CSV들 + 메타데이터 JSON)
    """
    combined, metadata = build_figure(figure_id, trials, seed, workers)
    os.makedirs(out_dir, exist_ok=True)

    exporter = FigureCSVExporter(write_metadata=False)
    paths = []
    for method in combined.methods():
        curve = ExperimentReport(rows=combined.curve(method))
        paths.append(exporter.export(curve, os.path.join(out_dir, _curve_filename(figure_id, method))))
    paths.append(JSONExporter().export(metadata, os.path.join(out_dir, f"{figure_id}.meta.json")))
    logger.info(f"{figure_id} 재현 완료: 파일 {len(paths)}개 → {out_dir}")
    return paths
