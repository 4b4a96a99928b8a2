"""
Noisy gradient oracle for dist(x, x*)^2 on the hyperbolic plane
Answers f(x) + z1 and the gradient in the orthonormal frame at x plus (z2, z3)
"""

import logging
from functools import lru_cache

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.exceptions import QueryOutOfRange, throw
from hyperlab.hyperlab.gconvex import DistSqObjective
from hyperlab.hyperlab.geometry import HPoint, log_map, precision_for
from hyperlab.hyperlab.oracles.base import BaseOracle, OracleAnswer
from hyperlab.hyperlab.oracles.noise import NoiseModel

logger = logging.getLogger(__name__)


@lru_cache(maxsize=65536)
def exact_answer(obj: DistSqObjective, x: HPoint) -> tuple[float, tuple[float, float], float]:
    """
    Noise-free answer at x

    Far queries are answered at a precision raised to their distance from the optimum,
    with both points put back on the sheet at that precision first.

    Returns:
        (value, gradient frame coordinates, distance of x from the origin)
    """
    radius = x.radius
    reach = radius + obj.xstar.radius
    with precision_for(reach):
        if settings.dps_for_radius(reach) > settings.WORKING_DPS:
            x, xstar = x.on_sheet(), obj.xstar.on_sheet()
        else:
            xstar = obj.xstar
        to_opt = log_map(x, xstar)
        d = to_opt.mp_norm()
        a, b = to_opt.frame_coords()
        return float(d * d), (float(-2 * a), float(-2 * b)), radius


class NoisyGradientOracle(BaseOracle):
    """Radius-r noisy first-order oracle for a DistSqObjective"""

    NAME = "hyperbolic"

    def __init__(self, obj: DistSqObjective, noise: NoiseModel, rng):
        super().__init__(noise, rng)
        self.obj = obj
        self.max_query_radius = settings.QUERY_RADIUS_FACTOR * obj.radius

    def exact(self, x: HPoint) -> tuple[float, tuple[float, float]]:
        value, grad, _ = exact_answer(self.obj, x)
        return value, grad

    def check_range(self, x: HPoint):
        radius = x.radius
        if radius > self.max_query_radius:
            throw(
                f"Query at distance {radius:.6g} exceeds {settings.QUERY_RADIUS_FACTOR} * r = "
                f"{self.max_query_radius:.6g}",
                QueryOutOfRange,
            )


def query(obj: DistSqObjective, x: HPoint, noise: NoiseModel, rng) -> OracleAnswer:
    """One noisy answer at x drawn from rng"""
    return NoisyGradientOracle(obj, noise, rng).query(x)
