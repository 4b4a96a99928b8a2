"""
Additive noise models

A NoiseModel is C-precise (every coordinate of every sample lies in [-C, C]) and
c-non-concentrated (its joint density never exceeds c). Samples are drawn from a
caller-owned numpy Generator so that each consumer has its own reproducible stream.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import truncnorm

from hyperlab.hyperlab.exceptions import throw

logger = logging.getLogger(__name__)

UNIFORM_BOX = "uniform-box"
TRUNCATED_GAUSSIAN = "truncated-gaussian"
NOISE_KINDS = (UNIFORM_BOX, TRUNCATED_GAUSSIAN)

# Truncated gaussian: sigma = C / GAUSSIAN_WIDTH, truncated at +-GAUSSIAN_WIDTH * sigma = +-C
GAUSSIAN_WIDTH = 4.0


@dataclass(frozen=True)
class NoiseModel:
    """
    Additive noise model

    Args:
        kind: uniform-box or truncated-gaussian
        C: Precision bound, every coordinate lies in [-C, C]
        dim: Dimension of the noise vector (value plus gradient coordinates)
    """

    kind: str
    C: float
    dim: int = 3

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.kind not in NOISE_KINDS:
            throw(f"Unknown noise kind: {self.kind}")
        if not math.isfinite(self.C) or self.C < 0:
            throw(f"Noise precision C must be finite and non-negative, got {self.C}")
        if self.dim < 1:
            throw(f"Noise dimension must be positive, got {self.dim}")

    @classmethod
    def uniform_box(cls, C: float, dim: int = 3) -> "NoiseModel":
        return cls(UNIFORM_BOX, C, dim)

    @classmethod
    def truncated_gaussian(cls, C: float, dim: int = 3) -> "NoiseModel":
        return cls(TRUNCATED_GAUSSIAN, C, dim)

    @property
    def exact(self) -> bool:
        return self.C == 0

    @property
    def sigma(self) -> float:
        return self.C / GAUSSIAN_WIDTH

    @property
    def c(self) -> float:
        """Upper bound on the joint density, attained at the center"""
        if self.exact:
            return math.inf
        if self.kind == UNIFORM_BOX:
            return (2 * self.C) ** -self.dim
        mode = truncnorm.pdf(0.0, -GAUSSIAN_WIDTH, GAUSSIAN_WIDTH, scale=self.sigma)
        return float(mode) ** self.dim

    def sample(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        """
        Draw noise vectors

        Returns:
            Array of shape (dim,) or (size, dim), clipped to [-C, C]
        """
        shape = (self.dim,) if size is None else (size, self.dim)
        if self.exact:
            return np.zeros(shape)
        if self.kind == UNIFORM_BOX:
            z = rng.uniform(-self.C, self.C, size=shape)
        else:
            z = truncnorm.rvs(-GAUSSIAN_WIDTH, GAUSSIAN_WIDTH, scale=self.sigma, size=shape, random_state=rng)
        return np.clip(z, -self.C, self.C)

    def pdf(self, z, slack=0.0) -> np.ndarray:
        """
        Joint density at offsets z (last axis is the noise dimension)

        Offsets within `slack` outside the support count as on its boundary. With C = 0 the
        model is a point mass: the density is inf at the center and 0 elsewhere.
        """
        z = np.asarray(z, dtype=float)
        slack = np.asarray(slack, dtype=float)
        if slack.ndim:
            slack = slack[..., None]
        inside = np.all(np.abs(z) <= self.C + slack, axis=-1)
        if self.exact:
            return np.where(inside, math.inf, 0.0)
        if self.kind == UNIFORM_BOX:
            return np.where(inside, self.c, 0.0)
        marginal = truncnorm.pdf(
            np.clip(z, -self.C, self.C), -GAUSSIAN_WIDTH, GAUSSIAN_WIDTH, scale=self.sigma
        )
        return np.where(inside, np.prod(marginal, axis=-1), 0.0)

    def marginal_cdf(self, t) -> np.ndarray:
        """CDF of one noise coordinate"""
        t = np.asarray(t, dtype=float)
        if self.exact:
            return (t >= 0).astype(float)
        if self.kind == UNIFORM_BOX:
            return np.clip((t + self.C) / (2 * self.C), 0.0, 1.0)
        return truncnorm.cdf(t, -GAUSSIAN_WIDTH, GAUSSIAN_WIDTH, scale=self.sigma)
