# Copyright (c) 2026, Abhishek and Contributors
# See license.txt

import itertools
import math

import numpy as np
import pytest
from scipy.stats import gaussian_kde

from hyperlab.hyperlab.exceptions import ConfigError, QueryOutOfRange, ValidationError
from hyperlab.hyperlab.gconvex import DistSqObjective
from hyperlab.hyperlab.geometry import ORIGIN, HPoint, random_point, third_side
from hyperlab.hyperlab.oracles import get_oracle
from hyperlab.hyperlab.oracles.base import VOLUME_ENVELOPE_K, BaseOracle, observation_space
from hyperlab.hyperlab.oracles.euclidean import EuclideanNoisyOracle, QuadraticTarget
from hyperlab.hyperlab.oracles.noise import NoiseModel
from hyperlab.hyperlab.oracles.noisy_gradient import NoisyGradientOracle, exact_answer, query


def _rng(seed=11):
    return np.random.default_rng(seed)


class TestNoiseModel:
    def test_uniform_pdf_bound(self):
        assert NoiseModel.uniform_box(0.5).c == pytest.approx(1.0)
        assert NoiseModel.uniform_box(0.1).c == pytest.approx(125.0)

    def test_gaussian_pdf_bound_is_mode(self):
        noise = NoiseModel.truncated_gaussian(1.0)
        assert float(noise.pdf(np.zeros(3))) == pytest.approx(noise.c, rel=1e-12)
        assert noise.c > NoiseModel.uniform_box(1.0).c

    def test_point_mass(self):
        noise = NoiseModel.uniform_box(0.0)
        assert noise.c == math.inf
        assert np.all(noise.sample(_rng(), 5) == 0.0)
        assert float(noise.pdf(np.zeros(3))) == math.inf
        assert float(noise.pdf(np.ones(3))) == 0.0

    @pytest.mark.parametrize("kind, C", [("laplace", 1.0), ("uniform-box", -1.0), ("uniform-box", math.inf)])
    def test_invalid(self, kind, C):
        with pytest.raises(ValidationError):
            NoiseModel(kind, C)

    @pytest.mark.parametrize("kind", ["uniform-box", "truncated-gaussian"])
    def test_precision(self, kind):
        z = NoiseModel(kind, 0.3).sample(_rng(), 100_000)
        assert z.shape == (100_000, 3)
        assert np.max(np.abs(z)) <= 0.3

    @pytest.mark.parametrize("kind", ["uniform-box", "truncated-gaussian"])
    def test_kernel_density_below_bound(self, kind):
        noise = NoiseModel(kind, 1.0)
        kde = gaussian_kde(noise.sample(_rng(3), 1_000_000).T)
        axis = np.linspace(-0.5, 0.5, 4)
        grid = np.array(list(itertools.product(axis, axis, axis))).T
        assert np.max(kde(grid)) <= 1.1 * noise.c

    def test_pdf_slack(self):
        noise = NoiseModel.uniform_box(1.0, dim=1)
        z = np.array([[1.0 + 1e-12]])
        assert float(noise.pdf(z)[0]) == 0.0
        assert float(noise.pdf(z, slack=1e-9)[0]) == pytest.approx(0.5)


class TestObservationSpace:
    def test_exact_volume(self):
        space = observation_space(1.0, 0.0)
        assert space.volume == pytest.approx(space.f_max * math.pi * space.g_max**2)
        assert space.f_max == pytest.approx(1002.0**2)
        assert space.g_max == pytest.approx(2004.0)

    def test_monotone(self):
        radii = [1.0, 2.0, 5.0, 10.0]
        precisions = [0.0, 0.1, 1.0, 10.0]
        for r in radii:
            volumes = [observation_space(r, C).volume for C in precisions]
            assert volumes == sorted(volumes)
        for C in precisions:
            volumes = [observation_space(r, C).volume for r in radii]
            assert volumes == sorted(volumes)

    def test_polynomial_envelope(self):
        for r in range(10, 101, 10):
            for C in range(1, 11):
                space = observation_space(float(r), float(C))
                assert space.volume / (r**4 * C**3) <= VOLUME_ENVELOPE_K

    def test_envelope_when_noise_dominates(self):
        for r, C in [(1.0, 1.0), (2.0, 5.0), (10.0, 10.0), (10.0, 100.0), (50.0, 1000.0)]:
            assert observation_space(r, C).volume / (r**4 * C**3) <= VOLUME_ENVELOPE_K

    @pytest.mark.parametrize("r, C", [(0.0, 1.0), (1.0, -0.5)])
    def test_invalid(self, r, C):
        with pytest.raises(ValidationError):
            observation_space(r, C)


class TestNoisyGradientOracle:
    def test_zero_noise_is_exact(self):
        obj = DistSqObjective.at_distance(5.0, 0.7)
        x = HPoint.from_polar(2.0, -1.0)
        answer = query(obj, x, NoiseModel.uniform_box(0.0), _rng())
        value, grad, _ = exact_answer(obj, x)
        assert answer.fval == value == pytest.approx(obj.value(x), rel=1e-15)
        assert answer.grad == grad
        assert answer.grad_norm == pytest.approx(2 * math.sqrt(value), rel=1e-12)

    def test_gradient_at_origin_points_away_from_optimum(self):
        obj = DistSqObjective.at_distance(5.0, 0.0)
        answer = query(obj, ORIGIN, NoiseModel.uniform_box(0.0), _rng())
        assert answer.grad[0] == pytest.approx(-10.0, abs=1e-12)
        assert answer.grad[1] == pytest.approx(0.0, abs=1e-12)

    def test_out_of_range(self):
        obj = DistSqObjective.at_distance(0.05)
        oracle = NoisyGradientOracle(obj, NoiseModel.uniform_box(0.01), _rng())
        oracle.query(HPoint.from_polar(999 * 0.05, 1.0))
        with pytest.raises(QueryOutOfRange):
            oracle.query(HPoint.from_polar(1001 * 0.05, 1.0))
        assert oracle.calls == 1

    def test_far_queries_within_range(self):
        obj = DistSqObjective.at_distance(1.0, 0.3)
        oracle = NoisyGradientOracle(obj, NoiseModel.uniform_box(0.0), _rng())
        answer = oracle.query(HPoint.from_polar(500.0, 1.0))
        expected = third_side(500.0, 1.0, 0.7)
        assert answer.fval == pytest.approx(expected**2, rel=1e-9)
        assert answer.grad_norm == pytest.approx(2 * expected, rel=1e-9)
        with pytest.raises(QueryOutOfRange):
            oracle.query(HPoint.from_polar(1001.0, 1.0))
        assert oracle.calls == 1

    def test_needs_three_dimensional_noise(self):
        with pytest.raises(ValidationError):
            NoisyGradientOracle(DistSqObjective.at_distance(1.0), NoiseModel.uniform_box(1.0, dim=2), _rng())

    def test_answers_lie_in_observation_space(self):
        r = 10.0
        obj = DistSqObjective.at_distance(r, 1.0)
        oracle = NoisyGradientOracle(obj, NoiseModel.uniform_box(1.0), _rng())
        space = observation_space(r, 1.0)
        rng = _rng(5)
        for _ in range(200):
            assert space.contains(oracle.query(random_point(rng, 3 * r)))

    def test_uniform_noise_statistics(self):
        C = 0.5
        obj = DistSqObjective.at_distance(3.0)
        x = HPoint.from_polar(1.0, 2.0)
        noise = NoiseModel.uniform_box(C)
        oracle = NoisyGradientOracle(obj, noise, _rng(17))
        value, grad, _ = exact_answer(obj, x)
        answers = np.array([oracle.query(x).as_vector() for _ in range(100_000)])
        z = answers - np.array([value, grad[0], grad[1]])

        assert oracle.calls == 100_000
        assert np.max(np.abs(z)) <= C + 1e-9

        bins = 8
        edges = [np.linspace(-C - 1e-9, C + 1e-9, bins + 1)] * 3
        counts, _ = np.histogramdd(z, bins=edges)
        cell = (2 * (C + 1e-9) / bins) ** 3
        density = counts / (len(z) * cell)
        binning_error = 1 / math.sqrt(len(z) / bins**3)
        assert np.max(density) <= noise.c * (1 + 5 * binning_error)

        for k in range(3):
            assert abs(np.corrcoef(z[:-1, k], z[1:, k])[0, 1]) < 0.01

    def test_same_seed_same_answers(self):
        obj = DistSqObjective.at_distance(3.0)
        x = HPoint.from_polar(1.0, 2.0)
        noise = NoiseModel.truncated_gaussian(0.2)
        first = NoisyGradientOracle(obj, noise, _rng(99))
        second = NoisyGradientOracle(obj, noise, _rng(99))
        assert [first.query(x) for _ in range(20)] == [second.query(x) for _ in range(20)]


class TestEuclideanOracle:
    def test_zero_noise_is_exact(self):
        target = QuadraticTarget((3.0, -4.0), kappa=4.0)
        oracle = EuclideanNoisyOracle(target, NoiseModel.uniform_box(0.0), _rng())
        answer = oracle.query(np.zeros(2))
        assert answer.fval == pytest.approx(9.0 + 4.0 * 16.0)
        assert answer.grad == pytest.approx((-6.0, 32.0))

    def test_constants(self):
        target = QuadraticTarget.at_distance(10.0, kappa=4.0)
        assert (target.mu, target.L) == (2.0, 8.0)
        assert target.distance(np.zeros(2)) == pytest.approx(10.0)

    def test_whole_plane_may_be_queried(self):
        target = QuadraticTarget((3.0, -4.0), kappa=1.0)
        oracle = EuclideanNoisyOracle(target, NoiseModel.uniform_box(0.0), _rng())
        answer = oracle.query(np.array([1e6, -1e6]))
        assert answer.fval == pytest.approx(target.value(np.array([1e6, -1e6])))

    def test_oracles_must_state_their_range(self):
        class Unranged(BaseOracle):
            def exact(self, x):
                return 0.0, (0.0, 0.0)

        with pytest.raises(TypeError):
            Unranged(NoiseModel.uniform_box(0.1), _rng())


class TestRegistry:
    def test_known(self):
        assert get_oracle("hyperbolic") is NoisyGradientOracle
        assert get_oracle("euclidean") is EuclideanNoisyOracle

    def test_unknown(self):
        with pytest.raises(ConfigError):
            get_oracle("spherical")
