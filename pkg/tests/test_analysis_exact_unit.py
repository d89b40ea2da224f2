"""
Unit tests for exact P_c analysis

프로필 열거 기반 정확 P_c, T_w 확률질량함수, 전수 열거 오라클, 공식 점검 검증
"""
import csv
import itertools
import math
import os

import pytest

from crowdfusion.analysis.audit import AUDIT_COLUMNS, audit_greedy_formulas
from crowdfusion.analysis.exact import (
    exact_pc_expurgation,
    exact_pc_honest,
    exact_pc_oblivious,
    profile_measure_total,
)
from crowdfusion.analysis.oracle import oracle_pc, oracle_size
from crowdfusion.analysis.profiles import enumeration_size, iter_compositions, iter_profiles, tw_pmf
from crowdfusion.cli import AUDIT_ALPHAS, AUDIT_MS, AUDIT_MUS
from crowdfusion.models.analysis_models import ProfileCount
from crowdfusion.models.errors import EnumerationTooLargeError, LimitUndefinedError
from crowdfusion.models.fusion_models import StrategyKind


class TestTwPmf:
    def test_skip_mass(self):
        for mu, N in [(0.6, 1), (0.8, 3), (0.95, 5)]:
            pmf = tw_pmf(mu, 0.35, N)
            assert pmf.prob(0.0, 0) == pytest.approx(0.35)
            assert pmf.prob(0.0, 1) == pytest.approx(0.35)

    def test_total_mass(self):
        pmf = tw_pmf(0.8, 0.5, 3)
        assert math.fsum(pmf.probs_h1) == pytest.approx(1.0, abs=1e-12)
        assert math.fsum(pmf.probs_h0) == pytest.approx(1.0, abs=1e-12)

    def test_symmetry(self):
        pmf = tw_pmf(0.7, 0.4, 4)
        for n in range(1, 5):
            w = 0.7 ** (-n)
            assert pmf.prob(w, 1) == pytest.approx(pmf.prob(-w, 0))
            assert pmf.prob(-w, 1) == pytest.approx(pmf.prob(w, 0))

    def test_matches_skip_pattern_enumeration(self):
        """기준 비트에 답하고 나머지 N-1 비트 중 한 개에 답하는 패턴 열거"""
        mu, m, N = 0.8, 0.5, 3
        total = 0.0
        for pattern in itertools.product([True, False], repeat=N - 1):
            if sum(pattern) == 1:
                total += mu * (1 - m) * math.prod((1 - m) if answered else m for answered in pattern)
        assert tw_pmf(mu, m, N).prob(mu ** -2, 1) == pytest.approx(total, abs=1e-15)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            tw_pmf(0.0, 0.5, 3)
        with pytest.raises(ValueError):
            tw_pmf(0.8, 1.5, 3)


class TestProfiles:
    def test_composition_count(self):
        rows = [row for block in iter_compositions(3, 5, chunk=7) for row in block]
        assert len(rows) == enumeration_size(3, 5) == 35
        assert all(row.sum() == 3 for row in rows)
        assert len({tuple(row) for row in rows}) == 35

    def test_iter_profiles(self):
        profiles = list(iter_profiles(2, 1))
        assert len(profiles) == 6
        assert all(p.total == 2 and p.N == 1 for p in profiles)

    def test_profile_count_lookup(self):
        q = ProfileCount(q=(1, 0, 2, 0, 3))
        assert q.count(-2) == 1 and q.count(0) == 2 and q.count(2) == 3
        with pytest.raises(IndexError):
            q.count(3)
        with pytest.raises(ValueError):
            ProfileCount(q=(1, 2))

    def test_measure_is_normalised(self):
        assert profile_measure_total(3, 2, 0.8, 0.3) == pytest.approx(1.0, abs=1e-10)
        assert profile_measure_total(4, 2, 0.65, 0.6, hypothesis=0) == pytest.approx(1.0, abs=1e-10)


class TestExactHonest:
    def test_single_skipping_worker(self):
        assert exact_pc_honest(1, 1, 0.8, 1.0) == pytest.approx(0.5)

    def test_single_answering_worker(self):
        assert exact_pc_honest(1, 1, 0.7, 0.0) == pytest.approx(0.7)

    def test_all_skip_crowd(self):
        assert exact_pc_honest(5, 3, 0.8, 1.0) == pytest.approx(0.125, abs=1e-12)

    @pytest.mark.parametrize("W,N,mu,m", [(3, 2, 0.8, 0.3), (2, 2, 0.6, 0.5), (3, 1, 0.9, 0.1), (2, 3, 0.75, 0.4)])
    def test_matches_oracle(self, W, N, mu, m):
        assert exact_pc_honest(W, N, mu, m) == pytest.approx(oracle_pc(W, N, mu, m), abs=1e-12)

    def test_bounds(self):
        for m in (0.0, 0.2, 0.6, 0.9):
            pc = exact_pc_honest(4, 2, 0.7, m)
            assert 0.25 - 1e-12 <= pc <= 1.0 + 1e-12

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationTooLargeError) as exc_info:
            exact_pc_honest(20, 3, 0.8, 0.5, cap=10)
        assert exc_info.value.size > 10

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            exact_pc_honest(0, 2, 0.8, 0.5)
        with pytest.raises(ValueError):
            exact_pc_honest(3, 2, 0.8, 1.5)


class TestExactGreedy:
    def test_oblivious_without_greedy_is_honest(self):
        honest = exact_pc_honest(4, 2, 0.8, 0.3)
        assert exact_pc_oblivious(4, 2, 0.8, 0.3, 0.0) == pytest.approx(honest, abs=1e-15)
        assert exact_pc_oblivious(4, 2, 0.8, 0.3, 0.0, verbatim=False) == pytest.approx(honest, abs=1e-15)

    def test_corrected_oblivious_matches_oracle(self):
        oracle = oracle_pc(4, 2, 0.8, 0.3, 0.5, StrategyKind.OBLIVIOUS)
        assert exact_pc_oblivious(4, 2, 0.8, 0.3, 0.5, verbatim=False) == pytest.approx(oracle, abs=1e-12)

    def test_corrected_expurgation_matches_oracle(self):
        oracle = oracle_pc(4, 2, 0.8, 0.5, 0.25, StrategyKind.EXPURGATION)
        assert exact_pc_expurgation(4, 2, 0.8, 0.5, 0.25, verbatim=False) == pytest.approx(oracle, abs=1e-12)

    def test_all_greedy_is_coin_flip(self):
        """α=1: Oblivious는 무작위 투표, Expurgation은 빈 집합"""
        assert exact_pc_oblivious(3, 2, 0.8, 0.4, 1.0, verbatim=False) == pytest.approx(0.25, abs=1e-12)
        assert exact_pc_expurgation(3, 2, 0.8, 0.4, 1.0, verbatim=False) == pytest.approx(0.25, abs=1e-12)
        assert oracle_pc(3, 2, 0.8, 0.4, 1.0, StrategyKind.EXPURGATION) == pytest.approx(0.25, abs=1e-12)

    def test_expurgation_zero_skip_undefined(self):
        with pytest.raises(LimitUndefinedError):
            exact_pc_expurgation(3, 2, 0.8, 0.0, 0.0)

    def test_expurgation_decays_with_retention(self):
        """스킵이 드물수록 남는 답안이 없어 1/4에 가까워짐"""
        low = oracle_pc(3, 2, 0.8, 0.01, 0.0, StrategyKind.EXPURGATION)
        mid = oracle_pc(3, 2, 0.8, 0.05, 0.0, StrategyKind.EXPURGATION)
        high = oracle_pc(3, 2, 0.8, 0.3, 0.0, StrategyKind.EXPURGATION)
        assert 0.25 <= low < mid < high
        assert low - 0.25 < 0.05


class TestOracle:
    def test_single_worker(self):
        assert oracle_pc(1, 1, 0.7, 0.0) == pytest.approx(0.7)

    def test_two_disagreeing_workers_split_ties(self):
        """일치 정답 0.64 + 불일치 0.32의 절반"""
        assert oracle_pc(2, 1, 0.8, 0.0) == pytest.approx(0.8)

    def test_joint_equals_bit_product_for_single_bit(self):
        assert oracle_pc(2, 1, 0.8, 0.2, joint=True) == pytest.approx(oracle_pc(2, 1, 0.8, 0.2))

    def test_joint_equals_bit_product_for_small_weight_ratio(self):
        """W=3, N=2, μ=0.8: 비트 정답 여부가 답한 작업자 수에만 좌우, q = 0.824828"""
        product = oracle_pc(3, 2, 0.8, 0.3)
        assert product == pytest.approx(0.680341229584, abs=1e-12)
        assert oracle_pc(3, 2, 0.8, 0.3, joint=True) == pytest.approx(product, abs=1e-12)

    def test_size_and_cap(self):
        assert oracle_size(3, 2) == 729
        assert oracle_size(4, 2, 0.5) == 81 * 16
        with pytest.raises(EnumerationTooLargeError):
            oracle_pc(3, 2, 0.8, 0.3, cap=100)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            oracle_pc(2, 1, 0.4, 0.3)


class TestAudit:
    def test_rows_cover_grid(self):
        rows = audit_greedy_formulas(3, 1, [0.8], [0.4], [0.0, 0.4])
        assert len(rows) == 4
        assert {row.strategy for row in rows} == {StrategyKind.OBLIVIOUS, StrategyKind.EXPURGATION}

    def test_corrected_formulas_agree(self):
        rows = audit_greedy_formulas(3, 1, [0.8], [0.4], [0.0, 0.4])
        for row in rows:
            assert row.corrected_divergence < 1e-12

    def test_verbatim_oblivious_agrees_without_greedy(self):
        rows = audit_greedy_formulas(3, 1, [0.8], [0.4], [0.0])
        oblivious = [row for row in rows if row.strategy is StrategyKind.OBLIVIOUS]
        assert oblivious[0].agrees

    def test_row_dict(self):
        row = audit_greedy_formulas(2, 1, [0.7], [0.5], [0.5])[0]
        data = row.to_dict()
        assert data["strategy"] == "oblivious"
        assert data["divergence"] == pytest.approx(abs(data["verbatim"] - data["oracle"]))


REPORT_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "reports", "formula_audit.csv")


class TestCommittedAuditReport:
    """reports/formula_audit.csv 는 기본 audit 명령 (W=4, N=2) 결과와 같아야 한다"""

    @pytest.fixture
    def committed(self):
        with open(REPORT_PATH, "r", encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))

    def test_header(self):
        with open(REPORT_PATH, "r", encoding="utf-8", newline="") as f:
            assert next(csv.reader(f)) == AUDIT_COLUMNS

    def test_matches_regenerated_audit(self, committed):
        rows = audit_greedy_formulas(4, 2, AUDIT_MUS, AUDIT_MS, AUDIT_ALPHAS)
        assert len(committed) == len(rows) == 24
        for saved, row in zip(committed, rows):
            assert saved["strategy"] == row.strategy.value
            assert float(saved["mu"]) == pytest.approx(row.mu)
            assert float(saved["m"]) == pytest.approx(row.m)
            assert float(saved["alpha"]) == pytest.approx(row.alpha)
            for column in ("verbatim", "corrected", "oracle", "divergence"):
                assert float(saved[column]) == pytest.approx(getattr(row, column), rel=1e-9, abs=1e-12)
            assert saved["agrees"] == ("true" if row.agrees else "false")

    def test_honest_rows_agree(self, committed):
        """α=0 Oblivious 행은 verbatim 식이 오라클과 1e-12 이내"""
        honest = [r for r in committed if r["strategy"] == "oblivious" and float(r["alpha"]) == 0.0]
        assert len(honest) == 4
        for row in honest:
            assert row["agrees"] == "true"
            assert float(row["divergence"]) <= 1e-12
        assert all(float(r["corrected_divergence"]) <= 1e-12 for r in committed)
