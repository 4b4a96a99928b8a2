"""
Euclidean noisy oracle for plane quadratics
Same additive-noise model as the hyperbolic oracle, used by the accelerated baseline
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from hyperlab.hyperlab.exceptions import throw
from hyperlab.hyperlab.oracles.base import BaseOracle
from hyperlab.hyperlab.oracles.noise import NoiseModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticTarget:
    """
    f(x) = (x - xstar)^T diag(1, kappa) (x - xstar) in the plane

    Strong convexity mu = 2 and smoothness L = 2 * kappa; kappa = 1 gives |x - xstar|^2.
    """

    xstar: tuple[float, float]
    kappa: float = 4.0

    def __post_init__(self):
        if self.kappa < 1:
            throw(f"Condition number must be >= 1, got {self.kappa}")

    @classmethod
    def at_distance(cls, d: float, angle: float = math.pi / 4, kappa: float = 4.0) -> "QuadraticTarget":
        return cls((d * math.cos(angle), d * math.sin(angle)), kappa)

    @property
    def weights(self) -> np.ndarray:
        return np.array([1.0, self.kappa])

    @property
    def mu(self) -> float:
        return 2.0

    @property
    def L(self) -> float:
        return 2.0 * self.kappa

    def value(self, x) -> float:
        e = np.asarray(x, dtype=float) - self.xstar
        return float(np.sum(self.weights * e * e))

    def grad(self, x) -> np.ndarray:
        return 2 * self.weights * (np.asarray(x, dtype=float) - self.xstar)

    def distance(self, x) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=float) - self.xstar))


class EuclideanNoisyOracle(BaseOracle):
    """Noisy first-order oracle for a QuadraticTarget"""

    NAME = "euclidean"

    def __init__(self, target: QuadraticTarget, noise: NoiseModel, rng):
        super().__init__(noise, rng)
        self.target = target

    def check_range(self, x):
        """Every point of the plane may be queried"""

    def exact(self, x) -> tuple[float, tuple[float, float]]:
        g = self.target.grad(x)
        return self.target.value(x), (float(g[0]), float(g[1]))
