"""
명령줄 인터페이스

    python -m crowdfusion simulate --config exp.yaml --out report.csv
    python -m crowdfusion exact --strategy honest --W 3 --N 2 --mu 0.8 --m 0.3
    python -m crowdfusion asymptotic --W 40 --N 3 --mu 0.8 --m 0.5 [--mv]
    python -m crowdfusion estimate --answers answers.csv [--gold gold.txt]
    python -m crowdfusion threshold --mu 0.75 --m 0.5 --N 3
    python -m crowdfusion aggregate --answers answers.csv [--M 8]
    python -m crowdfusion reproduce --figure fig2 --out figures/ [--trials] [--seed]
    python -m crowdfusion audit --out audit.csv
    python -m crowdfusion generate --config exp.yaml --out answers.csv [--seed]

종료 코드: 0 성공, 2 설정/파싱/입출력 오류, 3 열거 상한 초과
"""

import argparse
import json
import logging
import sys
from typing import Any, List, Optional

from dotenv import load_dotenv

from crowdfusion.models.config import (
    MuSourceKind,
    SchemeName,
    StrategyName,
    get_settings,
    load_experiment_config,
)
from crowdfusion.models.errors import AnswerParseError, ConfigError, EnumerationTooLargeError
from crowdfusion.models.fusion_models import StrategyKind


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_CAP_EXCEEDED = 3

AUDIT_MUS = [0.6, 0.8]
AUDIT_MS = [0.3, 0.7]
AUDIT_ALPHAS = [0.0, 0.25, 0.5]


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))


def cmd_simulate(args: argparse.Namespace) -> int:
    from crowdfusion.exporters.exporters import emit_report
    from crowdfusion.orchestrator import run_monte_carlo

    config = load_experiment_config(args.config)
    if args.seed is not None:
        config = config.model_copy(update={"seed": args.seed})
    report = run_monte_carlo(config, workers=args.workers)
    path = emit_report(report, args.out)
    _print_json({"out": path, "rows": len(report.rows)})
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    from crowdfusion.analysis.exact import exact_pc_expurgation, exact_pc_honest, exact_pc_oblivious

    strategy = StrategyKind(args.strategy)
    verbatim = not args.corrected
    if strategy is StrategyKind.HONEST:
        pc = exact_pc_honest(args.W, args.N, args.mu, args.m, cap=args.cap)
    elif strategy is StrategyKind.OBLIVIOUS:
        pc = exact_pc_oblivious(args.W, args.N, args.mu, args.m, args.alpha, verbatim=verbatim, cap=args.cap)
    else:
        pc = exact_pc_expurgation(args.W, args.N, args.mu, args.m, args.alpha, verbatim=verbatim, cap=args.cap)
    _print_json({"strategy": strategy.value, "pc": pc, "verbatim": verbatim and strategy is not StrategyKind.HONEST})
    return EXIT_OK


def cmd_asymptotic(args: argparse.Namespace) -> int:
    from crowdfusion.analysis.asymptotic import asymptotic_pc, asymptotic_pc_mv, f_g_metrics

    if args.mv:
        pc = asymptotic_pc_mv(args.W, args.N, args.mu, args.m)
    else:
        pc = asymptotic_pc(args.W, args.N, args.mu, args.m)
    f, g = f_g_metrics(args.mu, args.m, args.N)
    _print_json({"pc": pc, "mv": args.mv, "f": f, "g": g})
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    from crowdfusion.estimation.greedy_mle import estimate_m_alpha
    from crowdfusion.estimation.mu_estimators import estimate_mu_benchmark, estimate_mu_training
    from crowdfusion.exporters.answer_file import parse_answer_file, parse_gold_file
    from crowdfusion.models.crowd_models import words_to_array
    from crowdfusion.models.fusion_models import LengthHistogram
    from crowdfusion.utils.rng import derive_stream

    N, words = parse_answer_file(args.answers)
    if not words:
        raise AnswerParseError("answer file has no answer rows", line=2)
    if args.gold:
        result = estimate_mu_training(words, parse_gold_file(args.gold))
        source = "training"
    else:
        rng = derive_stream(args.seed, 0, "estimate")
        result = estimate_mu_benchmark(words, rng, exclude_full_length=args.exclude_full_length)
        source = "benchmark"
    hist = LengthHistogram.from_codes(words_to_array(words))
    m_hat, alpha_hat = estimate_m_alpha(hist, len(words), N)
    payload = result.to_dict()
    payload.update({"m_hat": m_hat, "alpha_hat": alpha_hat, "mu_source": source, "histogram": list(hist.counts)})
    _print_json(payload)
    return EXIT_OK


def cmd_threshold(args: argparse.Namespace) -> int:
    from crowdfusion.estimation.switching import switching_terms

    terms = switching_terms(args.mu, args.m, args.N)
    _print_json({
        "threshold": terms.threshold,
        "unclamped": terms.unclamped,
        "gamma1": terms.gamma1,
        "gamma2": terms.gamma2,
        "coefficient": terms.coefficient
    })
    return EXIT_OK


def cmd_aggregate(args: argparse.Namespace) -> int:
    from crowdfusion.exporters.exporters import JSONExporter
    from crowdfusion.offline import aggregate_offline

    decision = aggregate_offline(
        args.answers,
        scheme=SchemeName(args.scheme),
        strategy=StrategyName(args.strategy),
        mu_source=MuSourceKind(args.mu_source),
        M=args.M,
        seed=args.seed,
        mu=args.mu,
        training_path=args.training,
        gold_path=args.gold
    )
    if args.out:
        JSONExporter().export(decision, args.out)
    _print_json(decision.to_dict())
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    from crowdfusion.figures import reproduce_figure

    paths = reproduce_figure(args.figure, args.out, trials=args.trials, seed=args.seed, workers=args.workers)
    _print_json({"figure": args.figure, "files": paths})
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    from crowdfusion.analysis.audit import audit_greedy_formulas
    from crowdfusion.exporters.exporters import AuditCSVExporter

    rows = audit_greedy_formulas(args.W, args.N, AUDIT_MUS, AUDIT_MS, AUDIT_ALPHAS)
    path = AuditCSVExporter().export(rows, args.out)
    _print_json({
        "out": path,
        "rows": len(rows),
        "verbatim_divergent": sum(1 for row in rows if not row.agrees),
        "max_corrected_divergence": max(row.corrected_divergence for row in rows)
    })
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    from crowdfusion.crowd.generator import encode_class, generate_answers, sample_profiles
    from crowdfusion.exporters.answer_file import write_answer_file
    from crowdfusion.utils.rng import derive_stream

    config = load_experiment_config(args.config)
    model = config.model.to_model()
    seed = config.seed if args.seed is None else args.seed
    rng = derive_stream(seed, 0, "generate")
    truth = encode_class(int(rng.integers(0, model.M)), model.N)
    answers = generate_answers(sample_profiles(model, rng), truth, rng)
    path = write_answer_file(args.out, answers)
    _print_json({"out": path, "truth": truth.to_dict(), "W": model.W, "N": model.N, "alpha": model.alpha})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crowdfusion", description="Reject-option crowdsourced classification toolkit")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default: CROWDFUSION_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Run a Monte Carlo experiment from a YAML config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="Report path (.csv or .json)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="Override the config seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exact", help="Exact P_c by profile enumeration")
    p.add_argument("--strategy", choices=[k.value for k in StrategyKind], default="honest")
    p.add_argument("--W", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--corrected", action="store_true", help="Use the corrected greedy-crowd formulas")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("asymptotic", help="Large-crowd Gaussian approximation of P_c")
    p.add_argument("--W", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--mv", action="store_true", help="Forced-response majority voting")
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("estimate", help="Estimate mu, m and alpha from an answer file")
    p.add_argument("--answers", required=True)
    p.add_argument("--gold", default=None, help="Gold bits for training-based mu estimation")
    p.add_argument("--exclude-full-length", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("threshold", help="Oblivious/Expurgation switching threshold")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("aggregate", help="Aggregate a real answer file")
    p.add_argument("--answers", required=True)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--scheme", choices=[s.value for s in SchemeName], default=SchemeName.REJECT_WEIGHTED.value)
    p.add_argument("--strategy", choices=[s.value for s in StrategyName], default=StrategyName.ADAPTIVE.value)
    p.add_argument("--mu-source", choices=[s.value for s in MuSourceKind], default=MuSourceKind.BENCHMARK.value)
    p.add_argument("--mu", type=float, default=None, help="Known mu (mu-source=known)")
    p.add_argument("--training", default=None, help="Training answers (mu-source=training)")
    p.add_argument("--gold", default=None, help="Training gold bits (mu-source=training)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="Optional JSON decision report path")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("reproduce", help="Reproduce figure/table data as CSV")
    p.add_argument("--figure", required=True, choices=[
        "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table1",
        "estimated_mu_workers", "estimated_mu_training",
    ])
    p.add_argument("--out", required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("audit", help="Compare greedy-crowd formulas with the brute-force oracle")
    p.add_argument("--out", required=True)
    p.add_argument("--W", type=int, default=4)
    p.add_argument("--N", type=int, default=2)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("generate", help="Draw a synthetic answer file from a config's crowd model")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI 진입점

    Returns:
        종료 코드 (0, 2, 3)
    """
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    level = (args.log_level or get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s"
    )

    try:
        return args.func(args)
    except EnumerationTooLargeError as e:
        logger.error(f"열거 상한 초과: {e}")
        return EXIT_CAP_EXCEEDED
    except (ConfigError, AnswerParseError) as e:
        logger.error(f"입력 오류: {e}")
        return EXIT_INPUT_ERROR
    except ValueError as e:
        logger.error(f"잘못된 값: {e}")
        return EXIT_INPUT_ERROR
    except OSError as e:
        logger.error(f"파일 입출력 오류: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
