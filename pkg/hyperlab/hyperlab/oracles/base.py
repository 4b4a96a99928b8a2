"""
Base Oracle for the noisy gradient optimization model
Defines the query interface all oracles implement and the observation box they answer in
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.exceptions import throw
from hyperlab.hyperlab.oracles.noise import NoiseModel

logger = logging.getLogger(__name__)

# Envelope constant: volume <= K * r^4 * C^3 whenever 1 <= r <= C
VOLUME_ENVELOPE_K = math.pi * (1002**2 + 2) * 2005**2


@dataclass(frozen=True)
class OracleAnswer:
    """
    Noisy answer to one query

    fval: f(x) + z1
    grad: gradient coordinates in the orthonormal tangent frame at the query, plus (z2, z3)
    """

    fval: float
    grad: tuple[float, float]
    point: Any = None

    def as_vector(self) -> np.ndarray:
        return np.array([self.fval, self.grad[0], self.grad[1]])

    @property
    def grad_norm(self) -> float:
        return math.hypot(*self.grad)


@dataclass(frozen=True)
class ObservationSpace:
    """
    Compact box every answer lies in: [-C, f_max + C] x B(0, g_max + C)

    f_max and g_max bound the true value and gradient over the query region of radius
    QUERY_RADIUS_FACTOR * r around the origin with the optimum within r.
    """

    r: float
    C: float
    f_max: float
    g_max: float

    @property
    def value_interval(self) -> tuple[float, float]:
        return -self.C, self.f_max + self.C

    @property
    def grad_disk_radius(self) -> float:
        return self.g_max + self.C

    @property
    def volume(self) -> float:
        return (self.f_max + 2 * self.C) * math.pi * self.grad_disk_radius**2

    def contains(self, answer: OracleAnswer) -> bool:
        lo, hi = self.value_interval
        return lo <= answer.fval <= hi and answer.grad_norm <= self.grad_disk_radius


def observation_space(r: float, C: float) -> ObservationSpace:
    """
    Observation box for radius r and precision C

    Args:
        r: Radius bound, r > 0
        C: Noise precision, C >= 0
    """
    if r <= 0:
        throw(f"Radius must be positive, got {r}")
    if C < 0:
        throw(f"Noise precision must be non-negative, got {C}")
    reach = (settings.QUERY_RADIUS_FACTOR + 2) * r
    return ObservationSpace(r=r, C=C, f_max=reach**2, g_max=2 * reach)


class BaseOracle(ABC):
    """
    Abstract base class for noisy first-order oracles
    Subclasses provide the exact answer; the base adds fresh noise and counts calls
    """

    NAME: str = ""

    def __init__(self, noise: NoiseModel, rng: np.random.Generator):
        """
        Initialize oracle with its noise model and random stream

        Args:
            noise: Additive noise model; its dimension must be 3
            rng: Stream owned by this oracle, used sequentially
        """
        if noise.dim != 3:
            throw(f"{self.NAME} oracle needs 3-dimensional noise, got dim={noise.dim}")
        self.noise = noise
        self.rng = rng
        self.calls = 0

    @abstractmethod
    def exact(self, x) -> tuple[float, tuple[float, float]]:
        """True (value, gradient coordinates) at x"""
        pass

    @abstractmethod
    def check_range(self, x):
        """Raise QueryOutOfRange if x lies outside the allowed query region"""
        pass

    def query(self, x) -> OracleAnswer:
        self.check_range(x)
        fval, grad = self.exact(x)
        z = self.noise.sample(self.rng)
        self.calls += 1
        logger.debug(f"{self.NAME} query #{self.calls}: f={fval:.6g}")
        return OracleAnswer(
            fval=float(fval + z[0]), grad=(float(grad[0] + z[1]), float(grad[1] + z[2])), point=x
        )
