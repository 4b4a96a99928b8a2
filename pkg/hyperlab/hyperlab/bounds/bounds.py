"""
Closed-form lower bounds and their numeric checks

main_lower_bound composes the packing, the observation space and the query-game bound
into a concrete query count. The lemma solver and its geometric construction give the
O(1) chord used by the condition-number bound.
"""

import logging
import math
from dataclasses import dataclass

from mpmath import mp
from scipy.optimize import bisect

from hyperlab.hyperlab.exceptions import NoRoot, ValidationError, throw
from hyperlab.hyperlab.game.game import lower_bound_queries
from hyperlab.hyperlab.gconvex import DistSqObjective
from hyperlab.hyperlab.geometry import ORIGIN, HPoint, TangentVec, acosh_stable, distance, exp_map
from hyperlab.hyperlab.oracles.base import observation_space
from hyperlab.hyperlab.reduction.reduction import pack_circle

logger = logging.getLogger(__name__)

SOLVE_BRACKET = (1e-12, 20.0)
SOLVE_XTOL = 1e-10
MIN_MAIN_RADIUS = 8.0


def lemma_lhs(r: float) -> float:
    """
    (1 - sinh(r-1)^2 / sinh(r)^2) * tanh(r)^2 without overflow

    sinh(r-1)/sinh(r) = e^-1 * expm1(-2(r-1)) / expm1(-2r) and
    tanh(r) = -expm1(-2r) / (1 + e^-2r).
    """
    if r <= 1:
        throw(f"Lemma needs r > 1, got {r}")
    ratio = math.exp(-1) * math.expm1(-2 * (r - 1)) / math.expm1(-2 * r)
    tanh = -math.expm1(-2 * r) / (1 + math.exp(-2 * r))
    return (1 - ratio * ratio) * tanh * tanh


def lemma_rhs(c: float) -> float:
    """(cosh(c) - 1)^2 / sinh(c)^2, which is tanh(c/2)^2 and increasing in c"""
    return math.tanh(c / 2) ** 2


@dataclass(frozen=True)
class LemmaSolution:
    r: float
    lhs: float
    c_side: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - lemma_rhs(self.c_side))

    @property
    def closed_form(self) -> float:
        return 2 * math.atanh(math.sqrt(self.lhs))

    def to_record(self) -> dict:
        return {"r": self.r, "lhs": self.lhs, "c": self.c_side, "residual": self.residual}


def lemma_last_solve(r: float) -> LemmaSolution:
    """
    Solve tanh(c/2)^2 = lemma_lhs(r) for the third side c by bisection on (0, 20]

    Raises:
        NoRoot: If the bracket has no sign change
    """
    lhs = lemma_lhs(r)
    if lhs >= 1:
        throw(f"Left side {lhs} must stay below 1", NoRoot)
    lo, hi = SOLVE_BRACKET
    try:
        c_side = bisect(lambda c: lemma_rhs(c) - lhs, lo, hi, xtol=SOLVE_XTOL)
    except ValueError as e:
        logger.error(f"Bisection failed for r={r}: {e}")
        raise NoRoot(f"No root of the lemma equation for r={r}") from e
    return LemmaSolution(r=r, lhs=lhs, c_side=float(c_side))


@dataclass(frozen=True)
class LemmaConstruction:
    """Endpoints of the chord through the point at distance r-1, perpendicular to its radius"""

    y: HPoint
    y_prime: HPoint
    half_chord: float

    @property
    def third_side(self) -> float:
        return distance(self.y, self.y_prime)


def lemma_construction(r: float) -> LemmaConstruction:
    """
    Walk from the point at distance r-1 perpendicular to its radius, both ways, until
    distance r from the center; the two endpoints span the lemma's third side
    """
    if r <= 1:
        throw(f"Construction needs r > 1, got {r}")
    x = HPoint.from_polar(r - 1, 0)
    # right angle at x: cosh(r) = cosh(r - 1) * cosh(t)
    t = acosh_stable(HPoint.from_polar(r).coords[0] / x.coords[0])
    ends = [exp_map(x, TangentVec.unit(x, side * mp.pi / 2).scale(t)) for side in (1, -1)]
    for end in ends:
        if abs(distance(ORIGIN, end) - r) > 1e-9:
            throw(f"Chord endpoint off the radius-{r} circle", ValidationError)
    return LemmaConstruction(y=ends[0], y_prime=ends[1], half_chord=float(t))


@dataclass(frozen=True)
class ConditionBound:
    """
    Lower bound on beta/alpha for any alpha-strongly convex, beta-smooth f minimised at the
    center of the radius-r disk, and the ratio the dist^2 witness attains
    """

    r: float
    bound: float
    witness: float


def condition_ratio_lower(r: float) -> ConditionBound:
    """
    beta/alpha >= 4(r-1)/l^2, l the lemma chord

    At x, r-1 from the minimiser, strong convexity gives f(x) >= alpha (r-1)^2 / 2. The chord
    endpoints y, y' lie at distance r, so f(y), f(y') >= r/(r-1) f(x), while smoothness along
    the chord through its midpoint x gives (f(y) + f(y'))/2 <= f(x) + beta (l/2)^2 / 2.
    Together alpha (r-1) / 2 <= beta l^2 / 8.
    """
    if r <= 2:
        throw(f"Condition bound needs r > 2, got {r}")
    chord = lemma_last_solve(r).c_side
    alpha, beta = DistSqObjective.convexity_constants(r)
    return ConditionBound(r=r, bound=4 * (r - 1) / chord**2, witness=beta / alpha)


@dataclass(frozen=True)
class BoundReport:
    r: float
    c: float
    C: float
    n: int
    volX: float
    query_lower_bound: float
    condition_ratio: float

    def to_record(self) -> dict:
        return {
            "r": self.r,
            "c": self.c,
            "C": self.C,
            "n": self.n,
            "volX": self.volX,
            "bound": self.query_lower_bound,
            "ratio": self.condition_ratio,
        }


def main_lower_bound(r: float, c: float, C: float) -> BoundReport:
    """
    Queries any strategy needs to locate the optimum within r/5 with probability 2/3

    Packs the radius-r circle at separation r/2, takes the observation space of the radius-r
    oracle with precision C, and applies the query-game bound log n / (3 log(c |X|)).

    Raises:
        DegenerateGame: If c * |X| <= 1
    """
    if r < MIN_MAIN_RADIUS:
        throw(f"Main bound needs r >= {MIN_MAIN_RADIUS}, got {r}")
    n = pack_circle(r, r / 2).n
    volume = observation_space(r, C).volume
    bound = lower_bound_queries(n, c, volume)
    alpha, beta = DistSqObjective.convexity_constants(r)
    report = BoundReport(
        r=r, c=c, C=C, n=n, volX=volume, query_lower_bound=bound, condition_ratio=beta / alpha
    )
    logger.debug(f"Lower bound at r={r}, c={c}, C={C}: {bound:.6g} queries over {n} options")
    return report
