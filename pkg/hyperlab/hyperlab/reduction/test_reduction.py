# Copyright (c) 2026, Abhishek and Contributors
# See license.txt

import math

import numpy as np
import pytest
from mpmath import mp
from scipy.stats import linregress

from hyperlab.hyperlab.exceptions import InfeasiblePacking, ValidationError
from hyperlab.hyperlab.game import (
    TransparentState,
    check_density,
    lower_bound_queries,
    ml_strategy,
    play,
    potential_estimate,
    random_strategy,
    trial_rng,
)
from hyperlab.hyperlab.gconvex import DistSqObjective
from hyperlab.hyperlab.geometry import ORIGIN, HPoint, TangentVec, distance, exp_map
from hyperlab.hyperlab.oracles.base import observation_space
from hyperlab.hyperlab.oracles.noise import NoiseModel
from hyperlab.hyperlab.oracles.noisy_gradient import exact_answer
from hyperlab.hyperlab.reduction import (
    PolarGridMenu,
    angular_pitch,
    build_game,
    pack_circle,
    verify_separation,
)

PACKING_RADII = (20.0, 30.0, 40.0, 60.0)

# float pitch rounding; the measured separation may undershoot by a few ulps
SEPARATION_RTOL = 1e-12


@pytest.fixture
def rng():
    return np.random.default_rng(31)


@pytest.fixture(scope="module")
def game12():
    return build_game(pack_circle(12.0, 6.0), NoiseModel.uniform_box(0.1))


class TestPackCircle:
    def test_near_antipodal(self):
        assert pack_circle(10.0, 19.9).n in (2, 3)
        assert pack_circle(10.0, 20.0).n == 2

    def test_infeasible(self):
        with pytest.raises(InfeasiblePacking):
            pack_circle(10.0, 20.1)

    @pytest.mark.parametrize("r, min_sep", [(0.0, 1.0), (5.0, 0.0)])
    def test_invalid(self, r, min_sep):
        with pytest.raises(ValidationError):
            pack_circle(r, min_sep)

    def test_closed_form_pitch(self):
        packing = pack_circle(20.0, 10.0)
        theta = angular_pitch(20.0, 10.0)
        assert packing.n == math.floor(2 * math.pi / theta)
        assert verify_separation(packing) >= 10.0 * (1 - SEPARATION_RTOL)
        crowded = distance(HPoint.from_polar(20, 0), HPoint.from_polar(20, 2 * mp.pi / (packing.n + 1)))
        assert crowded < 10.0

    def test_points_on_circle(self):
        packing = pack_circle(20.0, 10.0)
        for i in (0, 1, packing.n // 3, packing.n - 1):
            assert distance(ORIGIN, packing.point(i)) == pytest.approx(20.0, abs=1e-8)

    def test_exhaustive_separation(self):
        packing = pack_circle(4.0, 2.0)
        points = packing.points
        assert len(points) == packing.n
        closest = min(distance(a, b) for k, a in enumerate(points) for b in points[k + 1 :])
        assert closest >= 2.0
        assert verify_separation(packing) == pytest.approx(closest, rel=1e-12)

    def test_packing_rate(self):
        logs = []
        for r in PACKING_RADII:
            packing = pack_circle(r, r / 2)
            assert verify_separation(packing) >= r / 2 * (1 - SEPARATION_RTOL)
            logs.append(math.log(packing.n))
        assert linregress(PACKING_RADII, logs).slope == pytest.approx(0.75, abs=0.05)
        assert logs[-1] / PACKING_RADII[-1] == pytest.approx(0.75, abs=0.05)

    def test_greedy(self):
        equal = pack_circle(8.0, 4.0)
        greedy = pack_circle(8.0, 4.0, greedy=True, seed=1)
        assert equal.n / 2 <= greedy.n <= equal.n
        assert verify_separation(greedy) >= 4.0 * (1 - 1e-9)
        assert np.array_equal(greedy.angles, pack_circle(8.0, 4.0, greedy=True, seed=1).angles)

    def test_greedy_limit(self):
        with pytest.raises(ValidationError):
            pack_circle(40.0, 20.0, greedy=True)

    def test_records(self):
        packing = pack_circle(3.0, 3.0)
        records = list(packing.records())
        assert [rec["index"] for rec in records] == list(range(packing.n))
        for rec in records:
            assert rec["x0"] == pytest.approx(math.cosh(3.0))
            assert math.hypot(rec["u"], rec["v"]) == pytest.approx(math.tanh(1.5))

    def test_locating_within_a_fifth_identifies_the_option(self, rng):
        r = 8.0
        packing = pack_circle(r, r / 2)
        for i in rng.integers(0, packing.n, size=50):
            p = packing.point(int(i))
            x = exp_map(p, TangentVec.unit(p, 2 * math.pi * rng.random()).scale(0.99 * r / 5))
            assert packing.nearest_option(x)[0] == i


class TestPolarGridMenu:
    def test_pitch(self):
        menu = PolarGridMenu(12.0)
        assert menu.pitch == pytest.approx(12.0 / 50)
        assert menu.rings == 50
        assert menu.ring_size(0) == 1
        assert menu.point((0, 0)) is ORIGIN

    def test_snapping(self):
        menu = PolarGridMenu(12.0)
        key = menu.key_at(7.3, 2.0)
        p = menu.point(key)
        assert abs(p.radius - 7.3) <= menu.pitch / 2
        assert distance(p, HPoint.from_polar(7.3, 2.0)) < menu.pitch

    def test_invalid_key(self):
        with pytest.raises(ValidationError):
            PolarGridMenu(12.0).point((51, 0))

    def test_random_cells_are_area_uniform(self, rng):
        menu = PolarGridMenu(12.0)
        radii = [menu.random_key(rng)[0] * menu.pitch for _ in range(2000)]
        assert np.median(radii) > 12.0 - 1.5


class TestPackingGame:
    def test_centers_match_the_oracle(self):
        packing = pack_circle(8.0, 4.0)
        game = build_game(packing, NoiseModel.uniform_box(0.1))
        for q in [(0, 0), (20, 3), (45, 100)]:
            for i in (0, 17, 500):
                obj = DistSqObjective(packing.point(i), radius=9.0)
                value, grad, _ = exact_answer(obj, game.menu.point(q))
                center = game.centers(q, np.array([i]))[0]
                assert center[0] == pytest.approx(value, rel=1e-6)
                assert center[1:] == pytest.approx(grad, rel=1e-6, abs=1e-6)

    def test_subset_matches_full(self, game12):
        q = (30, 7)
        subset = np.array([3, 400, 25_000])
        assert game12.centers(q, subset) == pytest.approx(game12.centers(q, np.arange(game12.n))[subset])

    def test_constants(self, game12):
        assert game12.c == NoiseModel.uniform_box(0.1).c
        assert game12.volume == observation_space(12.0, 0.1).volume

    @pytest.mark.parametrize("q", [(0, 0), (20, 3), (45, 100)])
    @pytest.mark.parametrize("i", [0, 17, 25_000])
    def test_option_densities_are_normalized(self, game12, q, i):
        check = check_density(game12, q, i, spot_checks=10_000)
        assert check.integral == pytest.approx(1.0, abs=1e-6)
        assert check.ok

    def test_gaussian_option_densities_are_normalized(self):
        game = build_game(pack_circle(8.0, 4.0), NoiseModel.truncated_gaussian(0.1))
        for q in [(0, 0), (10, 5)]:
            for i in (0, 600):
                check = check_density(game, q, i, spot_checks=10_000)
                assert check.max_density <= game.c * (1 + 1e-9)
                assert check.ok

    def test_exact_noise_needs_one_query(self):
        game = build_game(pack_circle(8.0, 4.0), NoiseModel.uniform_box(0.0))
        for t in range(20):
            transcript = play(game, ml_strategy, trial_rng(7, t))
            assert transcript.queries == 1
            assert transcript.success

    def test_antipodal_options_separate_at_origin(self):
        game = build_game(pack_circle(5.0, 10.0), NoiseModel.uniform_box(2.0))
        centers = game.centers((0, 0), np.arange(2))
        assert centers[0, 1:] == pytest.approx(-centers[1, 1:])
        for t in range(200):
            transcript = play(game, ml_strategy, trial_rng(8, t))
            assert transcript.queries == 1
            assert transcript.success

    def test_needs_value_and_gradient_noise(self):
        with pytest.raises(ValidationError):
            build_game(pack_circle(5.0, 2.0), NoiseModel.uniform_box(0.1, dim=1))

    def test_ml_queries_inside_the_middle_survivor(self, game12):
        key = ml_strategy(game12, TransparentState(np.arange(100, 201)), np.random.default_rng(0))
        assert key == game12.query_toward(150)
        assert key[0] * game12.menu.pitch == pytest.approx(11.0, abs=game12.menu.pitch)

    def test_focus_option_wraps_around(self, game12):
        n = game12.n
        assert game12.focus_option(np.array([0, 1, 2, n - 2, n - 1])) == 0
        assert game12.focus_option(np.array([10, 11, 12])) == 11

    @pytest.mark.slow
    def test_ml_beats_random(self, game12):
        ml = [play(game12, ml_strategy, trial_rng(9, t), budget=30).queries for t in range(200)]
        rand = [play(game12, random_strategy, trial_rng(9, t), budget=30).queries for t in range(200)]
        assert np.median(ml) <= np.median(rand)
        assert np.mean(ml) < np.mean(rand)

    @pytest.mark.slow
    def test_potential_bound_on_reduction_game(self, game12):
        estimate = potential_estimate(game12, ml_strategy, trials=10_000, seed=10)
        assert estimate.holds
        assert np.all(estimate.mean <= estimate.bound)

    @pytest.mark.slow
    @pytest.mark.parametrize("r", [8.0, 12.0, 16.0])
    @pytest.mark.parametrize("strategy", [ml_strategy, random_strategy])
    def test_winners_respect_the_query_bound(self, r, strategy):
        game = build_game(pack_circle(r, r / 2), NoiseModel.uniform_box(0.1))
        bound = lower_bound_queries(game.n, game.c, game.volume)
        for t in range(1000):
            transcript = play(game, strategy, trial_rng(11, t), budget=20)
            if transcript.success:
                assert transcript.queries >= bound
