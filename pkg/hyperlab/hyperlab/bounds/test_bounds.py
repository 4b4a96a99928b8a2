# Copyright (c) 2026, Abhishek and Contributors
# See license.txt

import math

import pytest

from hyperlab.hyperlab.bounds import bounds as bounds_module
from hyperlab.hyperlab.bounds import (
    condition_ratio_lower,
    lemma_construction,
    lemma_last_solve,
    lemma_lhs,
    main_lower_bound,
)
from hyperlab.hyperlab.exceptions import DegenerateGame, NoRoot, ValidationError
from hyperlab.hyperlab.oracles.noise import NoiseModel

UNIFORM_C = NoiseModel.uniform_box(0.1).c


class TestLemma:
    def test_left_side_limit(self):
        assert lemma_lhs(50.0) == pytest.approx(1 - math.exp(-2), abs=1e-4)

    def test_third_side_at_fifty(self):
        solution = lemma_last_solve(50.0)
        assert solution.c_side == pytest.approx(3.31, abs=0.01)
        assert solution.c_side == pytest.approx(solution.closed_form, abs=1e-9)
        assert solution.residual < 1e-9

    def test_no_overflow_at_large_r(self):
        assert lemma_last_solve(200.0).c_side == pytest.approx(lemma_last_solve(50.0).c_side, abs=1e-9)

    @pytest.mark.parametrize("r", [3.0, 10.0, 50.0])
    def test_construction_agrees(self, r):
        construction = lemma_construction(r)
        assert construction.third_side == pytest.approx(lemma_last_solve(r).c_side, abs=1e-6)
        assert construction.third_side == pytest.approx(2 * construction.half_chord, abs=1e-9)

    def test_bounded_and_settling(self):
        assert all(lemma_last_solve(float(r)).c_side <= 4 for r in range(3, 201, 7))
        sides = [lemma_last_solve(r).c_side for r in (3.0, 4.0, 5.0, 6.0, 8.0)]
        assert sides == sorted(sides)
        steps = [abs(b - a) for a, b in zip(sides, sides[1:])]
        assert all(b < a for a, b in zip(steps, steps[1:]))

    def test_rejects_small_radius(self):
        with pytest.raises(ValidationError):
            lemma_last_solve(1.0)

    def test_no_root_in_bracket(self, monkeypatch):
        monkeypatch.setattr(bounds_module, "SOLVE_BRACKET", (1e-12, 0.5))
        with pytest.raises(NoRoot):
            lemma_last_solve(10.0)

    def test_record(self):
        assert set(lemma_last_solve(5.0).to_record()) == {"r", "lhs", "c", "residual"}


class TestConditionRatio:
    @pytest.mark.parametrize("r", [5.0, 10.0, 20.0, 50.0])
    def test_witness(self, r):
        result = condition_ratio_lower(r)
        assert result.witness == pytest.approx(r / math.tanh(r), abs=1e-6)
        assert result.witness >= r
        assert result.bound <= result.witness

    def test_witness_at_ten(self):
        assert condition_ratio_lower(10.0).witness == pytest.approx(10.0, abs=1e-6)

    def test_linear_growth(self):
        assert condition_ratio_lower(200.0).witness / 200.0 == pytest.approx(1.0, abs=1e-12)
        assert condition_ratio_lower(40.0).bound > 2 * condition_ratio_lower(20.0).bound * 0.9

    def test_rejects_small_radius(self):
        with pytest.raises(ValidationError):
            condition_ratio_lower(2.0)


class TestMainLowerBound:
    def test_value_at_twelve(self):
        report = main_lower_bound(12.0, UNIFORM_C, 0.1)
        assert report.query_lower_bound == pytest.approx(0.0753, abs=5e-4)
        assert report.n > 20_000

    def test_near_linear_growth(self):
        for r in (8.0, 12.0, 20.0):
            small = main_lower_bound(r, UNIFORM_C, 0.1).query_lower_bound
            large = main_lower_bound(4 * r, UNIFORM_C, 0.1).query_lower_bound
            assert 2 <= large / small <= 6

    def test_monotone_in_r(self):
        values = [main_lower_bound(float(r), UNIFORM_C, 0.1).query_lower_bound for r in range(8, 101, 4)]
        assert values == sorted(values)

    def test_precision_doubling(self):
        for C in (0.1, 1.0, 10.0):
            first = main_lower_bound(16.0, UNIFORM_C, C)
            second = main_lower_bound(16.0, UNIFORM_C, 2 * C)
            assert second.query_lower_bound <= first.query_lower_bound
            gap = math.log(UNIFORM_C * second.volX) - math.log(UNIFORM_C * first.volX)
            assert 0 <= gap <= math.log(8)

    def test_positive(self):
        report = main_lower_bound(8.0, UNIFORM_C, 0.1)
        assert report.n >= 2
        assert report.query_lower_bound > 0

    def test_degenerate(self):
        with pytest.raises(DegenerateGame):
            main_lower_bound(8.0, 1e-30, 0.1)

    def test_rejects_small_radius(self):
        with pytest.raises(ValidationError):
            main_lower_bound(7.0, UNIFORM_C, 0.1)

    def test_record(self):
        record = main_lower_bound(8.0, UNIFORM_C, 0.1).to_record()
        assert list(record) == ["r", "c", "C", "n", "volX", "bound", "ratio"]
        assert record["ratio"] == pytest.approx(8.0 / math.tanh(8.0))
