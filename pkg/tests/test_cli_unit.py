"""
Unit tests for the command line interface

하위 명령별 출력 JSON과 종료 코드 (0 성공, 2 입력 오류, 3 열거 상한 초과) 검증
"""
import csv
import json
import os
import shutil
import tempfile

import pytest
import yaml

from crowdfusion.cli import EXIT_CAP_EXCEEDED, EXIT_INPUT_ERROR, EXIT_OK, build_parser, main
from crowdfusion.exporters.answer_file import write_answer_file
from crowdfusion.exporters.exporters import REPORT_COLUMNS
from crowdfusion.models.crowd_models import SKIP_CODE, AnswerWord


L = SKIP_CODE


@pytest.fixture
def temp_dir():
    temp_path = tempfile.mkdtemp()
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def config_path(temp_dir):
    path = os.path.join(temp_dir, "experiment.yaml")
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump({
            "model": {
                "W": 6, "N": 3, "M": 8, "alpha": 0.0,
                "p": {"kind": "fixed", "value": 0.4},
                "rho": {"kind": "fixed", "value": 0.8},
            },
            "trials": 200,
            "seed": 3,
            "block_size": 100,
        }, f)
    return path


@pytest.fixture
def answers_path(temp_dir):
    words = [AnswerWord.from_codes(i, row) for i, row in enumerate(
        [[1, 0, 1], [1, L, 1], [1, 0, L], [L, 0, 1], [1, 0, 1], [1, L, L]]
    )]
    return write_answer_file(os.path.join(temp_dir, "answers.csv"), words)


def _output(capsys):
    return json.loads(capsys.readouterr().out)


class TestParser:
    def test_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_rejects_unknown_figure(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["reproduce", "--figure", "fig9", "--out", "x"])

    def test_accepts_estimated_mu_figures(self):
        for figure in ("estimated_mu_workers", "estimated_mu_training"):
            args = build_parser().parse_args(["reproduce", "--figure", figure, "--out", "x"])
            assert args.figure == figure


class TestAnalysisCommands:
    def test_exact(self, capsys):
        assert main(["exact", "--W", "1", "--N", "1", "--mu", "0.7", "--m", "0.0"]) == EXIT_OK
        data = _output(capsys)
        assert data["pc"] == pytest.approx(0.7)
        assert data["verbatim"] is False

    def test_exact_cap_exceeded(self):
        assert main(["exact", "--W", "5", "--N", "2", "--mu", "0.8", "--m", "0.3", "--cap", "1"]) == EXIT_CAP_EXCEEDED

    def test_exact_invalid_value(self):
        assert main(["exact", "--W", "3", "--N", "2", "--mu", "0.8", "--m", "1.5"]) == EXIT_INPUT_ERROR

    def test_corrected_greedy_formula(self, capsys):
        args = ["exact", "--strategy", "oblivious", "--W", "3", "--N", "2", "--mu", "0.8", "--m", "0.3",
                "--alpha", "0.4", "--corrected"]
        assert main(args) == EXIT_OK
        data = _output(capsys)
        assert data["strategy"] == "oblivious"
        assert data["verbatim"] is False

    def test_asymptotic(self, capsys):
        assert main(["asymptotic", "--W", "40", "--N", "3", "--mu", "0.5", "--m", "0.3", "--mv"]) == EXIT_OK
        data = _output(capsys)
        assert data["pc"] == pytest.approx(0.125)
        assert data["mv"] is True

    def test_threshold(self, capsys):
        assert main(["threshold", "--mu", "0.75", "--m", "0.5", "--N", "3"]) == EXIT_OK
        data = _output(capsys)
        assert data["threshold"] == pytest.approx(0.314695, abs=1e-5)
        assert data["gamma2"] == pytest.approx(4.629630, abs=1e-5)

    def test_threshold_undefined_at_zero_skip(self):
        assert main(["threshold", "--mu", "0.75", "--m", "0.0", "--N", "3"]) == EXIT_INPUT_ERROR

    def test_audit(self, temp_dir, capsys):
        out = os.path.join(temp_dir, "audit.csv")
        assert main(["audit", "--out", out, "--W", "2", "--N", "1"]) == EXIT_OK
        data = _output(capsys)
        assert data["rows"] == 2 * 2 * 3 * 2
        assert data["max_corrected_divergence"] < 1e-12
        assert os.path.exists(out)


class TestAnswerCommands:
    def test_estimate(self, answers_path, capsys):
        assert main(["estimate", "--answers", answers_path]) == EXIT_OK
        data = _output(capsys)
        assert data["mu_hat"] == 1.0
        assert data["mu_source"] == "benchmark"
        assert data["histogram"] == [0, 1, 3, 2]

    def test_estimate_with_gold(self, temp_dir, answers_path, capsys):
        gold = os.path.join(temp_dir, "gold.txt")
        with open(gold, "w", encoding="utf-8") as f:
            f.write("1,1,1\n")
        assert main(["estimate", "--answers", answers_path, "--gold", gold]) == EXIT_OK
        data = _output(capsys)
        assert data["mu_source"] == "training"
        assert data["mu_hat"] < 1.0

    def test_aggregate(self, temp_dir, answers_path, capsys):
        out = os.path.join(temp_dir, "decision.json")
        assert main(["aggregate", "--answers", answers_path, "--out", out]) == EXIT_OK
        data = _output(capsys)
        assert data["class_index"] == 5
        with open(out, "r", encoding="utf-8") as f:
            assert json.load(f)["class_index"] == 5

    def test_aggregate_missing_file(self, temp_dir):
        assert main(["aggregate", "--answers", os.path.join(temp_dir, "missing.csv")]) == EXIT_INPUT_ERROR

    def test_aggregate_malformed_file(self, temp_dir):
        path = os.path.join(temp_dir, "bad.csv")
        with open(path, "w", encoding="utf-8") as f:
            f.write("worker,b1\n0,7\n")
        assert main(["aggregate", "--answers", path]) == EXIT_INPUT_ERROR

    def test_aggregate_chair_varshney_unsupported(self, answers_path):
        assert main(["aggregate", "--answers", answers_path, "--scheme", "chair_varshney"]) == EXIT_INPUT_ERROR


class TestExperimentCommands:
    def test_simulate(self, temp_dir, config_path, capsys):
        out = os.path.join(temp_dir, "report.csv")
        assert main(["simulate", "--config", config_path, "--out", out]) == EXIT_OK
        assert _output(capsys)["rows"] == 1
        with open(out, "r", encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == REPORT_COLUMNS
        assert os.path.exists(os.path.join(temp_dir, "report.meta.json"))

    def test_simulate_invalid_config(self, temp_dir):
        path = os.path.join(temp_dir, "bad.yaml")
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump({"model": {"W": 0, "N": 3, "M": 8}}, f)
        assert main(["simulate", "--config", path, "--out", os.path.join(temp_dir, "r.csv")]) == EXIT_INPUT_ERROR

    def test_simulate_missing_config(self, temp_dir):
        args = ["simulate", "--config", os.path.join(temp_dir, "none.yaml"), "--out", os.path.join(temp_dir, "r.csv")]
        assert main(args) == EXIT_INPUT_ERROR

    def test_generate_then_aggregate(self, temp_dir, config_path, capsys):
        out = os.path.join(temp_dir, "generated.csv")
        assert main(["generate", "--config", config_path, "--out", out, "--seed", "5"]) == EXIT_OK
        generated = _output(capsys)
        assert generated["W"] == 6 and generated["N"] == 3
        assert main(["aggregate", "--answers", out, "--strategy", "honest"]) == EXIT_OK
        assert _output(capsys)["class_index"] in range(8)

    def test_reproduce_threshold_surface(self, temp_dir, capsys):
        assert main(["reproduce", "--figure", "fig6", "--out", temp_dir]) == EXIT_OK
        files = _output(capsys)["files"]
        assert any(path.endswith("fig6.meta.json") for path in files)
        assert all(os.path.exists(path) for path in files)
