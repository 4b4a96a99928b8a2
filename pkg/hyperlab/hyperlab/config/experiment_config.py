"""
Experiment Configuration
One validated record of everything an experiment run depends on
"""

import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Mapping

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.exceptions import ConfigError, HyperlabError, throw
from hyperlab.hyperlab.game.strategies import STRATEGIES
from hyperlab.hyperlab.oracles.noise import NOISE_KINDS, UNIFORM_BOX, NoiseModel

logger = logging.getLogger(__name__)

EXPERIMENTS = ("pirate", "pack", "game", "optimize", "condition", "lemma", "selftest")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Filled in for fields left unset; anything not listed falls back to the dataclass default
EXPERIMENT_DEFAULTS = {
    "pirate": {"trials": 1},
    "pack": {"radii": (20.0, 30.0, 40.0, 60.0), "trials": 1},
    "game": {"noise_C": 0.1, "trials": 1000},
    "optimize": {"noise_C": 1e-6, "radii": (20.0, 40.0, 80.0), "trials": 20},
    "condition": {"radii": (5.0, 10.0, 20.0, 50.0), "trials": 1},
    "lemma": {"r": 50.0, "trials": 1},
    "selftest": {"trials": 1},
}

# Fields that do not change results and stay out of the config hash
UNHASHED_FIELDS = ("out", "threads", "log_level")


@dataclass
class ExperimentConfig:
    """
    Args:
        experiment: Which experiment to run
        r: Radius of the game, lemma or single-radius run
        noise_C: Noise precision C
        noise_c: Density bound c used by the query bound; defaults to the noise model's own
        seed: Base seed; trial k of a batch uses seed + k
        trials: Trials (or seeds per radius) to run
        radii: Radii swept by pack, optimize and condition
        distance: Pirate walk target distance
        error_deg: Pirate bearing error in degrees
        budget: Query budget per trial, per-experiment default when unset
    """

    experiment: str
    r: float | None = None
    noise_C: float | None = None
    noise_c: float | None = None
    seed: int = field(default_factory=settings.get_default_seed)
    trials: int | None = None
    out: str = "results"
    threads: int = field(default_factory=settings.get_default_threads)
    distance: float = 100.0
    error_deg: float = 1e-16
    strategy: str = "ml"
    noise_kind: str = UNIFORM_BOX
    budget: int | None = None
    radii: tuple[float, ...] = ()
    log_level: str = field(default_factory=settings.get_log_level)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            throw(f"Unknown experiment: {self.experiment}. Choose from {', '.join(EXPERIMENTS)}", ConfigError)
        defaults = EXPERIMENT_DEFAULTS[self.experiment]
        if self.r is None:
            self.r = defaults.get("r", 12.0)
        if self.noise_C is None:
            self.noise_C = defaults.get("noise_C", 0.1)
        if self.trials is None:
            self.trials = defaults.get("trials", 1)
        if not self.radii:
            self.radii = defaults.get("radii", (self.r,))
        self.r = float(self.r)
        self.radii = tuple(float(r) for r in self.radii)
        self.log_level = self.log_level.upper()
        self.validate()

    def validate(self):
        """
        Raises:
            ConfigError: If any field is outside its documented range
        """
        for r in (self.r, *self.radii):
            if not 0 < r <= settings.MAX_RADIUS:
                throw(f"Radius must lie in (0, {settings.MAX_RADIUS}], got {r}", ConfigError)
        if not 0 < self.distance <= settings.MAX_RADIUS:
            throw(f"Distance must lie in (0, {settings.MAX_RADIUS}], got {self.distance}", ConfigError)
        if not 0 <= self.error_deg <= 180:
            throw(f"Bearing error must lie in [0, 180] degrees, got {self.error_deg}", ConfigError)
        if self.trials < 1:
            throw(f"Trials must be at least 1, got {self.trials}", ConfigError)
        if self.threads < 1:
            throw(f"Threads must be at least 1, got {self.threads}", ConfigError)
        if self.budget is not None and self.budget < 1:
            throw(f"Budget must be at least 1, got {self.budget}", ConfigError)
        if self.seed < 0:
            throw(f"Seed must be non-negative, got {self.seed}", ConfigError)
        if self.strategy not in STRATEGIES:
            throw(f"Unknown strategy: {self.strategy}", ConfigError)
        if self.noise_kind not in NOISE_KINDS:
            throw(f"Unknown noise kind: {self.noise_kind}", ConfigError)
        if self.log_level not in LOG_LEVELS:
            throw(f"Unknown log level: {self.log_level}", ConfigError)
        try:
            model_c = self.noise_model().c
        except HyperlabError as e:
            throw(str(e), ConfigError)
        if self.noise_c is not None:
            if not self.noise_c > 0 or math.isnan(self.noise_c):
                throw(f"Density bound c must be positive, got {self.noise_c}", ConfigError)
            if self.noise_c < model_c:
                throw(
                    f"Density bound c={self.noise_c} is below the {self.noise_kind} density peak {model_c}",
                    ConfigError,
                )

    def noise_model(self, dim: int = 3) -> NoiseModel:
        return NoiseModel(self.noise_kind, self.noise_C, dim)

    @property
    def c(self) -> float:
        """Density bound in force: the override if given, else the noise model's peak"""
        return self.noise_model().c if self.noise_c is None else self.noise_c

    @property
    def seeds(self) -> list[int]:
        return list(range(self.seed, self.seed + self.trials))

    def to_dict(self) -> dict[str, Any]:
        record = asdict(self)
        record["radii"] = list(self.radii)
        return record

    def result_fields(self) -> dict[str, Any]:
        """The fields results depend on"""
        return {k: v for k, v in self.to_dict().items() if k not in UNHASHED_FIELDS}

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the result-relevant fields"""
        canonical = json.dumps(self.result_fields(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            throw(f"Unknown configuration keys: {', '.join(unknown)}", ConfigError)
        if "experiment" not in data:
            throw("Configuration needs an experiment", ConfigError)
        values = {k: v for k, v in data.items() if v is not None}
        if "radii" in values:
            values["radii"] = tuple(values["radii"])
        try:
            return cls(**values)
        except TypeError as e:
            throw(f"Invalid configuration: {e}", ConfigError)

    @classmethod
    def from_args(cls, args) -> "ExperimentConfig":
        """Build from an argparse namespace; flags left unset fall back to defaults"""
        positional = getattr(args, "experiment", None)
        flagged = getattr(args, "experiment_flag", None)
        if positional and flagged and positional != flagged:
            throw(f"Experiment given twice: {positional} and {flagged}", ConfigError)
        experiment = positional or flagged
        if not experiment:
            throw("No experiment given", ConfigError)
        data = {f.name: getattr(args, f.name, None) for f in fields(cls) if f.name != "experiment"}
        data["experiment"] = experiment
        return cls.from_dict(data)
