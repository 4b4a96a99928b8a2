# Copyright (c) 2026, Abhishek and Contributors
# See license.txt

import argparse
import math

import pytest

from hyperlab.hyperlab.config import ExperimentConfig
from hyperlab.hyperlab.exceptions import ConfigError
from hyperlab.hyperlab.oracles.noise import NoiseModel


class TestExperimentConfig:
    def test_per_experiment_defaults(self):
        assert ExperimentConfig("lemma").r == 50.0
        assert ExperimentConfig("optimize").noise_C == 1e-6
        assert ExperimentConfig("optimize").radii == (20.0, 40.0, 80.0)
        assert ExperimentConfig("game").trials == 1000
        assert ExperimentConfig("game", r=16).radii == (16.0,)

    def test_explicit_values_win(self):
        config = ExperimentConfig("optimize", radii=[10, 20], trials=5, noise_C=0.5)
        assert config.radii == (10.0, 20.0)
        assert config.seeds == list(range(config.seed, config.seed + 5))
        assert config.noise_C == 0.5

    @pytest.mark.parametrize(
        "overrides",
        [
            {"experiment": "unknown"},
            {"r": 0.0},
            {"r": 201.0},
            {"radii": (10.0, 250.0)},
            {"trials": 0},
            {"threads": 0},
            {"budget": 0},
            {"seed": -1},
            {"strategy": "oracle"},
            {"noise_kind": "laplace"},
            {"noise_C": -1.0},
            {"error_deg": 200.0},
            {"log_level": "loud"},
        ],
    )
    def test_rejects(self, overrides):
        with pytest.raises(ConfigError):
            ExperimentConfig(**{"experiment": "game", **overrides})

    def test_density_bound_override(self):
        peak = NoiseModel.uniform_box(0.1).c
        assert ExperimentConfig("game").c == peak
        assert ExperimentConfig("game", noise_c=2 * peak).c == 2 * peak
        with pytest.raises(ConfigError):
            ExperimentConfig("game", noise_c=peak / 2)

    def test_exact_noise_has_no_density_bound(self):
        assert math.isinf(ExperimentConfig("game", noise_C=0.0).c)


class TestConfigHash:
    def test_stable(self):
        first, second = ExperimentConfig("game", seed=3), ExperimentConfig("game", seed=3)
        assert first.config_hash() == second.config_hash()
        assert len(ExperimentConfig("game").config_hash()) == 64

    def test_sensitive_to_results_only(self):
        base = ExperimentConfig("game", seed=3, threads=1, out="a")
        assert base.config_hash() == ExperimentConfig("game", seed=3, threads=8, out="b").config_hash()
        assert base.config_hash() != ExperimentConfig("game", seed=4, threads=1, out="a").config_hash()


class TestFromMappings:
    def test_from_dict(self):
        config = ExperimentConfig.from_dict({"experiment": "pack", "radii": [20, 30], "seed": None})
        assert config.radii == (20.0, 30.0)

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"experiment": "pack", "colour": "blue"})

    def test_from_dict_needs_experiment(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"r": 12.0})

    def test_from_args(self):
        args = argparse.Namespace(experiment=None, experiment_flag="lemma", r=10.0, seed=None)
        config = ExperimentConfig.from_args(args)
        assert config.experiment == "lemma"
        assert config.r == 10.0

    def test_from_args_conflict(self):
        args = argparse.Namespace(experiment="lemma", experiment_flag="pack")
        with pytest.raises(ConfigError):
            ExperimentConfig.from_args(args)

    def test_env_seed(self, monkeypatch):
        monkeypatch.setenv("HYPERLAB_SEED", "17")
        assert ExperimentConfig("game").seed == 17
