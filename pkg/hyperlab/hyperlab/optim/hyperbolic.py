"""
Hyperbolic first-order methods for dist(x, x*)^2

Riemannian gradient descent, its heavy-ball variant and the one-query compass walk.
All of them spend Theta(r) queries to get within r/5 of an optimum at distance r.
"""

import logging

from mpmath import mp, mpf

from hyperlab.hyperlab.exceptions import throw
from hyperlab.hyperlab.gconvex import DistSqObjective, d_coth_d
from hyperlab.hyperlab.geometry import HPoint, TangentVec, distance, exp_map, log_map
from hyperlab.hyperlab.oracles.base import BaseOracle
from hyperlab.hyperlab.optim.trace import CONVERGED, Trace

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1000
DEFAULT_MOMENTUM = 0.3


def default_step(grad_norm: float) -> float:
    """
    1 / (2 * smoothness) at the distance the gradient implies

    For d^2 the gradient norm is 2d, so the step moves tanh(d) <= 1 toward the optimum.
    """
    return 1.0 / (2.0 * d_coth_d(grad_norm / 2))


def momentum_rgd(
    obj: DistSqObjective,
    oracle: BaseOracle,
    x0: HPoint,
    step: float | None = None,
    momentum: float = DEFAULT_MOMENTUM,
    budget: int = DEFAULT_BUDGET,
    target: float | None = None,
) -> Trace:
    """
    Heavy-ball descent in the tangent plane

    v <- momentum * T(v_prev) - step * noisy_grad, x <- exp_map(x, v). The previous
    velocity is carried to the new iterate as -log_map(x, x_prev), the velocity of the
    geodesic it was travelling on.

    Stops once the noisy gradient norm g satisfies g/2 + C < target (default r/5).

    Args:
        step: Fixed step; None recomputes default_step per iterate
        momentum: In [0, 1); 0 is plain Riemannian gradient descent
    """
    if step is not None and step <= 0:
        throw(f"Step must be positive, got {step}")
    if not 0 <= momentum < 1:
        throw(f"Momentum must lie in [0, 1), got {momentum}")
    target = obj.radius / 5 if target is None else target
    noise_bound = oracle.noise.C

    trace = Trace()
    x, previous = x0, None
    trace.record(x, distance(x, obj.xstar))
    while trace.query_count < budget:
        answer = oracle.query(x)
        trace.query_count += 1
        g = answer.grad_norm
        if g / 2 + noise_bound < target:
            trace.terminated = CONVERGED
            break
        s = default_step(g) if step is None else step
        v = TangentVec.from_frame(x, -s * answer.grad[0], -s * answer.grad[1])
        if momentum and previous is not None:
            v = v + log_map(x, previous).scale(-momentum)
        previous, x = x, exp_map(x, v)
        trace.record(x, distance(x, obj.xstar))

    logger.debug(
        f"Descent with momentum {momentum}: {trace.query_count} queries, {trace.terminated}, "
        f"final distance {trace.final_distance:.4g}"
    )
    return trace


def rgd(
    obj: DistSqObjective,
    oracle: BaseOracle,
    x0: HPoint,
    step: float | None = None,
    budget: int = DEFAULT_BUDGET,
    target: float | None = None,
) -> Trace:
    """Riemannian gradient descent x <- exp_map(x, -step * noisy_grad)"""
    return momentum_rgd(obj, oracle, x0, step=step, momentum=0.0, budget=budget, target=target)


def compass_walk(obj: DistSqObjective, oracle: BaseOracle, x0: HPoint, bearing_error: float = 0.0) -> Trace:
    """
    Take a bearing from one noisy gradient, walk the implied distance, and dig

    Args:
        bearing_error: Extra rotation of the bearing, in radians
    """
    trace = Trace()
    trace.record(x0, distance(x0, obj.xstar))
    answer = oracle.query(x0)
    trace.query_count = 1
    a, b = answer.grad
    walk = mpf(answer.grad_norm) / 2
    if walk == 0:
        x = x0
    else:
        phi = mp.atan2(-b, -a) + mpf(bearing_error)
        x = exp_map(x0, TangentVec.from_frame(x0, walk * mp.cos(phi), walk * mp.sin(phi)))
    trace.record(x, distance(x, obj.xstar))
    trace.terminated = CONVERGED
    logger.debug(f"Compass walk of {float(walk):.6g} ended {trace.final_distance:.6g} from the optimum")
    return trace
