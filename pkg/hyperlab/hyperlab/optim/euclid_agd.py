"""
Accelerated gradient descent on plane quadratics
The Euclidean contrast: queries to shrink the error by a fixed factor do not grow with r
"""

import logging
import math

import numpy as np

from hyperlab.hyperlab.oracles.euclidean import EuclideanNoisyOracle, QuadraticTarget
from hyperlab.hyperlab.optim.trace import CONVERGED, Trace

logger = logging.getLogger(__name__)


def euclid_agd(
    target: QuadraticTarget,
    oracle: EuclideanNoisyOracle,
    x0,
    budget: int = 1000,
    eps: float = 1e-9,
) -> Trace:
    """
    Constant-momentum Nesterov method for a mu-strongly convex, L-smooth quadratic

    y = x + beta * (x - x_prev), x_next = y - grad(y) / L with
    beta = (1 - sqrt(mu/L)) / (1 + sqrt(mu/L)). Stops once (|g| + sqrt(2) * C) / mu < eps,
    which certifies |y - x*| < eps; y is then the last iterate.
    """
    mu, L = target.mu, target.L
    q = math.sqrt(mu / L)
    beta = (1 - q) / (1 + q)
    noise_bound = oracle.noise.C

    trace = Trace()
    x = x_prev = np.asarray(x0, dtype=float)
    trace.record(x, target.distance(x))
    while trace.query_count < budget:
        y = x + beta * (x - x_prev)
        answer = oracle.query(y)
        trace.query_count += 1
        g = np.array(answer.grad)
        if (np.linalg.norm(g) + math.sqrt(2) * noise_bound) / mu < eps:
            trace.record(y, target.distance(y))
            trace.terminated = CONVERGED
            break
        x_prev, x = x, y - g / L
        trace.record(x, target.distance(x))

    logger.debug(f"AGD: {trace.query_count} queries, {trace.terminated}, final {trace.final_distance:.4g}")
    return trace
