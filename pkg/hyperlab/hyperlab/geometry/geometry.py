"""
Hyperboloid kernel for the hyperbolic plane (curvature -1)

Points live on the upper sheet {x : -x0^2 + x1^2 + x2^2 = -1, x0 > 0} and tangent vectors
at x are the ambient vectors Minkowski-orthogonal to x. Coordinates are mpmath floats at
settings.WORKING_DPS digits: at radius 50 the coordinates are ~e^50, and double precision
cannot keep them on the sheet to GEOMETRY_TOL.

Scalar measurements (distance, norms, circle measures) are returned as Python floats;
the mp_* variants keep the working precision for callers that need it.
"""

import logging
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from mpmath import mp, mpf
from scipy.optimize import minimize_scalar

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.exceptions import throw

logger = logging.getLogger(__name__)

mp.dps = settings.WORKING_DPS

ZERO = mpf(0)
ONE = mpf(1)

# Below this argument arccosh switches to the half-angle form
ACOSH_SERIES_CUTOFF = mpf("1.0001")

_precision_lock = threading.Lock()


def minkowski(u, v):
    """Minkowski product -u0*v0 + u1*v1 + u2*v2"""
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def acosh_stable(z):
    """
    arccosh without cancellation near 1

    Arguments below 1 (rounding on the sheet) are clamped to 1.
    """
    z = mpf(z)
    if z > ACOSH_SERIES_CUTOFF:
        return mp.log(z + mp.sqrt(z - 1) * mp.sqrt(z + 1))
    if z <= 1:
        return ZERO
    return 2 * mp.asinh(mp.sqrt((z - 1) / 2))


def _project(x, v):
    """Projection of an ambient vector onto the tangent plane at x"""
    w = minkowski(x, v)
    return tuple(vi + w * xi for vi, xi in zip(v, x))


def _renormalize(y):
    q = -minkowski(y, y)
    if q <= 0:
        throw("Cannot renormalize a non-timelike vector onto the sheet")
    s = 1 / mp.sqrt(q)
    return tuple(c * s for c in y)


@dataclass(frozen=True)
class HPoint:
    """Point on the hyperboloid sheet"""

    coords: tuple

    def __post_init__(self):
        if len(self.coords) != 3:
            throw(f"HPoint needs three coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(mpf(c) for c in self.coords))
        self.validate()

    def validate(self):
        x0 = self.coords[0]
        if x0 < 1 - settings.GEOMETRY_TOL:
            throw(f"HPoint is off the upper sheet: x0 = {float(x0)}")
        residual = minkowski(self.coords, self.coords) + 1
        if abs(residual) > settings.GEOMETRY_TOL * x0 * x0:
            throw(f"HPoint is off the hyperboloid: <x,x> + 1 = {float(residual):.3e}")

    def on_sheet(self) -> "HPoint":
        """Same point with x0 recomputed from x1, x2 at the current precision"""
        x1, x2 = self.coords[1], self.coords[2]
        return HPoint((mp.sqrt(1 + x1 * x1 + x2 * x2), x1, x2))

    @classmethod
    def from_polar(cls, rho, phi=0) -> "HPoint":
        """Point at distance rho from the origin, at angle phi from the x1 axis"""
        rho, phi = mpf(rho), mpf(phi)
        if rho < 0:
            throw(f"Polar radius must be non-negative, got {float(rho)}")
        s = mp.sinh(rho)
        return cls((mp.cosh(rho), s * mp.cos(phi), s * mp.sin(phi)))

    @property
    def radius(self) -> float:
        return float(acosh_stable(self.coords[0]))

    @property
    def angle(self) -> float:
        return float(mp.atan2(self.coords[2], self.coords[1]))

    def to_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])

    def to_poincare(self) -> tuple[float, float]:
        """Poincare-disk chart, for plotting only"""
        d = 1 + self.coords[0]
        return float(self.coords[1] / d), float(self.coords[2] / d)


ORIGIN = HPoint((1, 0, 0))


@contextmanager
def precision_for(radius: float):
    """
    Working precision for points out to radius

    Within the default precision nothing changes. Beyond it mp.dps is raised for the block;
    mpmath precision is process-wide, so raised blocks are serialized.
    """
    dps = settings.dps_for_radius(radius)
    if dps <= settings.WORKING_DPS:
        yield
        return
    with _precision_lock, mp.workdps(dps):
        logger.debug(f"Working at {dps} digits for radius {radius:.6g}")
        yield


def origin() -> HPoint:
    return ORIGIN


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector at base, stored in ambient coordinates"""

    base: HPoint
    vec: tuple

    def __post_init__(self):
        if len(self.vec) != 3:
            throw(f"TangentVec needs three coordinates, got {len(self.vec)}")
        object.__setattr__(self, "vec", tuple(mpf(c) for c in self.vec))
        self.validate()

    def validate(self):
        residual = minkowski(self.base.coords, self.vec)
        scale = self.base.coords[0] * max(ONE, *(abs(c) for c in self.vec))
        if abs(residual) > settings.GEOMETRY_TOL * scale:
            throw(f"TangentVec is not orthogonal to its base: <x,v> = {float(residual):.3e}")

    @classmethod
    def zero(cls, base: HPoint) -> "TangentVec":
        return cls(base, (ZERO, ZERO, ZERO))

    @classmethod
    def from_frame(cls, base: HPoint, a, b) -> "TangentVec":
        """Vector a*E1 + b*E2 in the orthonormal frame of tangent_frame(base)"""
        e1, e2 = tangent_frame(base)
        a, b = mpf(a), mpf(b)
        return cls(base, tuple(a * u + b * w for u, w in zip(e1, e2)))

    @classmethod
    def unit(cls, base: HPoint, angle) -> "TangentVec":
        angle = mpf(angle)
        return cls.from_frame(base, mp.cos(angle), mp.sin(angle))

    def frame_coords(self) -> tuple:
        e1, e2 = tangent_frame(self.base)
        return minkowski(self.vec, e1), minkowski(self.vec, e2)

    def mp_norm(self):
        return mp.sqrt(max(minkowski(self.vec, self.vec), ZERO))

    def norm(self) -> float:
        return float(self.mp_norm())

    def scale(self, s) -> "TangentVec":
        s = mpf(s)
        return TangentVec(self.base, tuple(s * c for c in self.vec))

    def __add__(self, other: "TangentVec") -> "TangentVec":
        if other.base is not self.base and other.base != self.base:
            throw("Cannot add tangent vectors at different base points")
        return TangentVec(self.base, tuple(u + w for u, w in zip(self.vec, other.vec)))

    def __neg__(self) -> "TangentVec":
        return self.scale(-1)


@lru_cache(maxsize=4096)
def tangent_frame(x: HPoint) -> tuple:
    """
    Orthonormal frame (E1, E2) at x

    Gram-Schmidt on the ambient axes e1, e2 projected onto the tangent plane. At the
    origin this is the identity frame.
    """
    frame = []
    for axis in (1, 2):
        e = [ZERO, ZERO, ZERO]
        e[axis] = ONE
        w = _project(x.coords, e)
        for b in frame:
            k = minkowski(w, b)
            w = tuple(wi - k * bi for wi, bi in zip(w, b))
        n = mp.sqrt(minkowski(w, w))
        frame.append(tuple(c / n for c in w))
    return tuple(frame)


def mp_distance(a: HPoint, b: HPoint):
    return acosh_stable(-minkowski(a.coords, b.coords))


def distance(a: HPoint, b: HPoint) -> float:
    """Geodesic distance arccosh(-<a,b>)"""
    return float(mp_distance(a, b))


def exp_map(x: HPoint, v: TangentVec) -> HPoint:
    """
    Follow the geodesic from x with initial velocity v for unit time

    The result is renormalized onto the sheet. A zero vector returns x itself.
    """
    if v.base is not x and v.base != x:
        throw("exp_map: tangent vector is not based at x")
    n = v.mp_norm()
    if n == 0:
        return x
    c, s = mp.cosh(n), mp.sinh(n) / n
    y = tuple(c * xi + s * vi for xi, vi in zip(x.coords, v.vec))
    return HPoint(_renormalize(y))


def log_map(x: HPoint, y: HPoint) -> TangentVec:
    """Tangent vector at x pointing at y with length distance(x, y)"""
    if x == y:
        return TangentVec.zero(x)
    d = mp_distance(x, y)
    u = _project(x.coords, y.coords)
    n = mp.sqrt(max(minkowski(u, u), ZERO))
    if d == 0 or n == 0:
        return TangentVec.zero(x)
    k = d / n
    return TangentVec(x, tuple(k * c for c in u))


def geodesic_point(a: HPoint, b: HPoint, t) -> HPoint:
    """Point at fraction t along the geodesic from a to b"""
    return exp_map(a, log_map(a, b).scale(t))


@dataclass(frozen=True)
class Isometry:
    """Linear map preserving the Minkowski form and the upper sheet"""

    matrix: tuple

    def apply(self, x: HPoint) -> HPoint:
        return HPoint(tuple(sum(m * c for m, c in zip(row, x.coords)) for row in self.matrix))

    def then(self, other: "Isometry") -> "Isometry":
        """Apply self first, then other"""
        rows = tuple(
            tuple(sum(other.matrix[i][k] * self.matrix[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )
        return Isometry(rows)


def lorentz_boost(rapidity, axis: int = 1) -> Isometry:
    """Hyperbolic translation along the x1 (axis=1) or x2 (axis=2) geodesic through the origin"""
    if axis not in (1, 2):
        throw(f"Boost axis must be 1 or 2, got {axis}")
    rapidity = mpf(rapidity)
    ch, sh = mp.cosh(rapidity), mp.sinh(rapidity)
    m = [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]
    m[0][0] = m[axis][axis] = ch
    m[0][axis] = m[axis][0] = sh
    return Isometry(tuple(tuple(row) for row in m))


def rotation(angle) -> Isometry:
    """Rotation about the origin"""
    angle = mpf(angle)
    c, s = mp.cos(angle), mp.sin(angle)
    return Isometry(((ONE, ZERO, ZERO), (ZERO, c, -s), (ZERO, s, c)))


def random_point(rng: np.random.Generator, max_radius: float, area_uniform: bool = False) -> HPoint:
    """
    Random point within max_radius of the origin

    With area_uniform the point is uniform for hyperbolic area (cosh rho = 1 + u*(cosh R - 1)),
    otherwise the radius itself is uniform.
    """
    u, phi = rng.random(), 2 * math.pi * rng.random()
    if area_uniform:
        rho = acosh_stable(1 + mpf(u) * (mp.cosh(max_radius) - 1))
    else:
        rho = mpf(u) * max_radius
    return HPoint.from_polar(rho, phi)


def circle_measures(r: float) -> tuple[float, float]:
    """Circumference 2*pi*sinh(r) and area 2*pi*(cosh(r) - 1) of a circle of radius r"""
    if r < 0:
        throw(f"Circle radius must be non-negative, got {r}")
    return 2 * math.pi * math.sinh(r), 4 * math.pi * math.sinh(r / 2) ** 2


def polygon_circumference(r: float, chords: int = 10**6) -> float:
    """
    Perimeter of the regular geodesic polygon inscribed in the circle of radius r

    All chords are congruent under rotation, so one chord is measured on the
    hyperboloid and multiplied by the chord count.
    """
    if chords < 3:
        throw(f"A polygon needs at least 3 chords, got {chords}")
    a = HPoint.from_polar(r, 0)
    b = HPoint.from_polar(r, 2 * mp.pi / chords)
    return float(chords * mp_distance(a, b))


def third_side(a, b, gamma):
    """
    Side opposite the angle gamma in a geodesic triangle with sides a and b

    Uses cosh c = cosh(a - b) + 2 sinh a sinh b sin^2(gamma/2), written as
    sinh^2(c/2) = sinh^2((a - b)/2) + sinh a sinh b sin^2(gamma/2) so that tiny
    angles keep their digits. Accepts numpy arrays.
    """
    a, b, gamma = (np.asarray(v, dtype=float) for v in (a, b, gamma))
    if np.any(a < 0) or np.any(b < 0):
        throw("Triangle sides must be non-negative")
    if np.any(gamma < 0) or np.any(gamma > math.pi + 1e-12):
        throw("Triangle angle must lie in [0, pi]")
    half = np.sinh((a - b) / 2) ** 2 + np.sinh(a) * np.sinh(b) * np.sin(gamma / 2) ** 2
    c = 2 * np.arcsinh(np.sqrt(half))
    return float(c) if c.ndim == 0 else c


def turning_point(target_distance: float, gamma: float) -> tuple[float, float]:
    """
    Closest approach when walking from the origin at bearing error gamma

    The target sits at target_distance; the walker is at third_side(target_distance, t, gamma)
    from it after walking t. Distance to a point along a geodesic is convex, so a bounded
    scalar minimisation over t in [0, 2 * target_distance] finds the turning point.

    Returns:
        (walked length at closest approach, closest distance)
    """
    if target_distance <= 0:
        return 0.0, 0.0
    result = minimize_scalar(
        lambda t: third_side(target_distance, t, gamma),
        bounds=(0.0, 2 * target_distance),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(result.x), float(result.fun)
