"""
Squared-distance objective f(x) = dist(x, x*)^2

Exact value, Riemannian gradient and Hessian form, plus the finite-difference checks
used to verify them. Hessian eigenvalues for d^2 are 2 (radial) and 2*d*coth(d)
(tangential); scaling conventions differ by constants, their ratio d*coth(d) does not.
"""

import logging
import math
from dataclasses import dataclass, field

from mpmath import mp, mpf

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.exceptions import throw
from hyperlab.hyperlab.geometry import (
    ORIGIN,
    HPoint,
    TangentVec,
    exp_map,
    log_map,
    minkowski,
    mp_distance,
)

logger = logging.getLogger(__name__)


def d_coth_d(d: float) -> float:
    """d * coth(d), continuous at 0"""
    if d < 1e-8:
        return 1.0 + d * d / 3
    return d / math.tanh(d)


@dataclass(frozen=True)
class DistSqObjective:
    """
    f(x) = dist(x, xstar)^2 with xstar inside the configured radius bound

    Args:
        xstar: The optimum
        radius: Radius bound r the optimum must respect
    """

    xstar: HPoint
    radius: float = settings.MAX_RADIUS
    r_star: float = field(init=False)

    def __post_init__(self):
        r_star = float(mp_distance(ORIGIN, self.xstar))
        object.__setattr__(self, "r_star", r_star)
        if self.radius <= 0:
            throw(f"Radius bound must be positive, got {self.radius}")
        if r_star > self.radius + settings.GEOMETRY_TOL:
            throw(f"Optimum at distance {r_star} exceeds the radius bound {self.radius}")

    @classmethod
    def at_distance(cls, r_star: float, angle: float = 0.0, radius: float | None = None) -> "DistSqObjective":
        """Objective whose optimum sits at distance r_star from the origin"""
        return cls(HPoint.from_polar(r_star, angle), radius=r_star if radius is None else radius)

    def mp_value(self, x: HPoint):
        return mp_distance(x, self.xstar) ** 2

    def value(self, x: HPoint) -> float:
        return float(self.mp_value(x))

    def grad(self, x: HPoint) -> TangentVec:
        """-2 * log_map(x, xstar); zero at the optimum"""
        return log_map(x, self.xstar).scale(-2)

    def hessian_form(self, x: HPoint, u: TangentVec) -> float:
        """
        Second derivative of f along the unit-speed geodesic t -> exp_map(x, t*u) at t = 0

        2 along the radial direction and 2*d*coth(d) across it, at distance d from xstar.
        """
        n = u.mp_norm()
        if abs(n - 1) > 1e-9:
            throw(f"hessian_form needs a unit vector, got norm {float(n)}")
        to_opt = log_map(x, self.xstar)
        d = to_opt.mp_norm()
        if d == 0:
            return 2.0
        cos = minkowski(u.vec, to_opt.vec) / d
        cos2 = min(float(cos * cos), 1.0)
        return 2 * cos2 + 2 * d_coth_d(float(d)) * (1 - cos2)

    @staticmethod
    def convexity_constants(d: float) -> tuple[float, float]:
        """
        (alpha, beta) at distance d from the optimum

        Returns the extreme Hessian-form eigenvalues (2, 2*d*coth(d)); beta/alpha = d*coth(d).
        """
        if d < 0:
            throw(f"Distance must be non-negative, got {d}")
        return 2.0, 2.0 * d_coth_d(d)


def directional_fd(obj: DistSqObjective, x: HPoint, u: TangentVec, h: float = 1e-5) -> float:
    """Central first difference of f along the geodesic through x with velocity u"""
    h = mpf(h)
    plus = obj.mp_value(exp_map(x, u.scale(h)))
    minus = obj.mp_value(exp_map(x, u.scale(-h)))
    return float((plus - minus) / (2 * h))


def hessian_fd(obj: DistSqObjective, x: HPoint, u: TangentVec, h: float = 1e-4) -> float:
    """Central second difference of f along the geodesic through x with velocity u"""
    h = mpf(h)
    plus = obj.mp_value(exp_map(x, u.scale(h)))
    minus = obj.mp_value(exp_map(x, u.scale(-h)))
    return float((plus - 2 * obj.mp_value(x) + minus) / (h * h))


def grad_inner(obj: DistSqObjective, x: HPoint, u: TangentVec) -> float:
    """<grad f(x), u>"""
    return float(minkowski(obj.grad(x).vec, u.vec))


def convexity_gap(obj: DistSqObjective, a: HPoint, b: HPoint, t: float) -> float:
    """
    f(gamma(t)) - t*f(b) - (1-t)*f(a) for the geodesic gamma from a to b

    Non-positive for a geodesically convex f; at most -(alpha/2)*t*(1-t)*dist(a,b)^2 when
    f is alpha-strongly convex.
    """
    point = exp_map(a, log_map(a, b).scale(t))
    t = mpf(t)
    return float(obj.mp_value(point) - t * obj.mp_value(b) - (1 - t) * obj.mp_value(a))
