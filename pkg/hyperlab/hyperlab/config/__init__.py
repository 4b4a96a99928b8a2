"""
Experiment configuration
"""

from hyperlab.hyperlab.config.experiment_config import (
    EXPERIMENT_DEFAULTS,
    EXPERIMENTS,
    ExperimentConfig,
)
