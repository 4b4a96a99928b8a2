"""
Query-count scaling: how many queries each method needs to get within r/5 of an
optimum at distance r, and the linear / log-log fits over a range of r
"""

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import linregress

from hyperlab.hyperlab.exceptions import ConfigError, throw
from hyperlab.hyperlab.gconvex import DistSqObjective
from hyperlab.hyperlab.geometry import ORIGIN
from hyperlab.hyperlab.oracles.euclidean import EuclideanNoisyOracle, QuadraticTarget
from hyperlab.hyperlab.oracles.noise import UNIFORM_BOX, NoiseModel
from hyperlab.hyperlab.oracles.noisy_gradient import NoisyGradientOracle
from hyperlab.hyperlab.optim.euclid_agd import euclid_agd
from hyperlab.hyperlab.optim.hyperbolic import DEFAULT_MOMENTUM, momentum_rgd, rgd

logger = logging.getLogger(__name__)

METHODS = ("rgd", "momentum", "euclid")
HYPERBOLIC_METHODS = ("rgd", "momentum")


@dataclass(frozen=True)
class ScalingTrial:
    method: str
    r: float
    seed: int
    queries: int
    converged: bool
    final_distance: float


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fits of queries against r and of log(queries) against log(r)"""

    slope: float
    intercept: float
    r_squared: float
    exponent: float
    exponent_r_squared: float

    def to_record(self) -> dict:
        return asdict(self)


def fit_scaling(radii, counts) -> ScalingFit:
    r = np.asarray(radii, dtype=float)
    q = np.asarray(counts, dtype=float)
    if len(r) < 2 or len(r) != len(q):
        throw("Scaling fit needs at least two matching (r, queries) pairs")
    if np.any(r <= 0) or np.any(q <= 0):
        throw("Scaling fit needs positive radii and query counts")
    lin = linregress(r, q)
    loglog = linregress(np.log(r), np.log(q))
    return ScalingFit(
        slope=float(lin.slope),
        intercept=float(lin.intercept),
        r_squared=float(lin.rvalue**2),
        exponent=float(loglog.slope),
        exponent_r_squared=float(loglog.rvalue**2),
    )


def measure(
    method: str,
    r: float,
    seed: int,
    C: float = 1e-6,
    noise_kind: str = UNIFORM_BOX,
    momentum: float = DEFAULT_MOMENTUM,
    budget: int | None = None,
) -> ScalingTrial:
    """
    One run from the origin toward an optimum at distance r in a seeded direction

    queries is the ground-truth count to get within r/5, or the budget if never.
    """
    if method not in METHODS:
        throw(f"Unknown method: {method}", ConfigError)
    rng = np.random.default_rng(seed)
    angle = 2 * math.pi * rng.random()
    noise = NoiseModel(noise_kind, C)
    budget = budget or int(10 * r) + 50

    if method == "euclid":
        target = QuadraticTarget.at_distance(r, angle)
        oracle = EuclideanNoisyOracle(target, noise, rng)
        trace = euclid_agd(target, oracle, np.zeros(2), budget=budget, eps=r / 5)
    else:
        obj = DistSqObjective.at_distance(r, angle)
        oracle = NoisyGradientOracle(obj, noise, rng)
        if method == "rgd":
            trace = rgd(obj, oracle, ORIGIN, budget=budget)
        else:
            trace = momentum_rgd(obj, oracle, ORIGIN, momentum=momentum, budget=budget)

    queries = trace.queries_to_within(r / 5)
    return ScalingTrial(
        method=method,
        r=r,
        seed=seed,
        queries=trace.query_count if queries is None else queries,
        converged=queries is not None,
        final_distance=trace.final_distance,
    )


def median_queries(trials: list[ScalingTrial]) -> dict[float, float]:
    """Median query count per radius"""
    by_radius: dict[float, list[int]] = {}
    for t in trials:
        by_radius.setdefault(t.r, []).append(t.queries)
    return {r: float(np.median(q)) for r, q in sorted(by_radius.items())}
