# Crowdfusion Package
"""
거부 옵션(λ)을 허용하는 크라우드소싱 M-ary 분류

- models: 크라우드/융합/분석 데이터 모델, 실험 설정, 예외
- crowd: 작업자 프로필 샘플링과 답안 생성
- fusion: 가중치, 비트별/클래스별 융합, 탐욕 작업자 전략
- estimation: μ, (m, α) 추정과 전략 전환 기준
- analysis: 정확/점근/전수 열거 P_c
- exporters: 답안 파일 입출력과 보고서 CSV/JSON
"""

__version__ = "0.1.0"


# Lazy imports to avoid circular import issues
def __getattr__(name):
    if name in ("ExperimentOrchestrator", "run_monte_carlo"):
        from crowdfusion import orchestrator
        return getattr(orchestrator, name)
    if name == "reproduce_figure":
        from crowdfusion.figures import reproduce_figure
        return reproduce_figure
    if name == "aggregate_offline":
        from crowdfusion.offline import aggregate_offline
        return aggregate_offline
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "__version__",
    "ExperimentOrchestrator",
    "run_monte_carlo",
    "reproduce_figure",
    "aggregate_offline",
]
