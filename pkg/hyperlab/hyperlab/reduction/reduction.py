"""
Circle packings of candidate optima and the query game they induce

Options are points on the circle of radius r, pairwise at least min_sep apart, and the
game's densities are the oracle noise translated to the true (value, gradient) of
dist(., option)^2 at the query. Identifying the option is the same as locating the
optimum within r/5 when min_sep = r/2.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from mpmath import mp

from hyperlab.hyperlab.exceptions import InfeasiblePacking, InvariantViolation, ValidationError, throw
from hyperlab.hyperlab.game.game import QueryGame
from hyperlab.hyperlab.geometry import ORIGIN, HPoint, acosh_stable, distance, tangent_frame
from hyperlab.hyperlab.oracles.base import observation_space
from hyperlab.hyperlab.oracles.noise import NoiseModel

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi

# Above this many options pairs are checked through rotational symmetry and adjacency only
EXHAUSTIVE_LIMIT = 10_000
GREEDY_LIMIT = 100_000
MENU_DIVISIONS = 50


def angular_pitch(r: float, min_sep: float) -> float:
    """
    Smallest angle between two points on the circle of radius r that are min_sep apart

    Solves sinh(r)^2 (1 - cos(theta)) = cosh(min_sep) - 1, i.e.
    sin(theta / 2) = sinh(min_sep / 2) / sinh(r).
    """
    return 2 * math.asin(min(1.0, math.sinh(min_sep / 2) / math.sinh(r)))


@dataclass(frozen=True)
class Packing:
    """
    Options on the circle of radius `radius`

    Equal-spacing packings keep only n; option i sits at angle 2*pi*i/n and is built on
    demand. Greedy packings carry their sorted angles.
    """

    radius: float
    min_sep: float
    n: int
    angles: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def equal_spacing(self) -> bool:
        return self.angles is None

    def option_angles(self, options) -> np.ndarray:
        options = np.asarray(options)
        if self.equal_spacing:
            return TWO_PI * options / self.n
        return self.angles[options]

    def angle(self, i: int) -> float:
        if not 0 <= i < self.n:
            throw(f"Option index {i} out of range for {self.n} options")
        if self.equal_spacing:
            return float(TWO_PI * mp.mpf(i) / self.n)
        return float(self.angles[i])

    def point(self, i: int) -> HPoint:
        if self.equal_spacing:
            return HPoint.from_polar(self.radius, 2 * mp.pi * i / self.n)
        return HPoint.from_polar(self.radius, self.angles[i])

    @property
    def points(self) -> list[HPoint]:
        if self.n > GREEDY_LIMIT:
            throw(f"Refusing to build {self.n} points; use point(i)")
        return [self.point(i) for i in range(self.n)]

    def records(self):
        """(index, hyperboloid coordinates, Poincare-disk coordinates) per option"""
        for i in range(self.n):
            p = self.point(i)
            x0, x1, x2 = p.to_float()
            u, v = p.to_poincare()
            yield {"index": i, "x0": x0, "x1": x1, "x2": x2, "u": u, "v": v}

    def nearest_option(self, x: HPoint) -> tuple[int, float]:
        """Option closest to x, with its distance"""
        psi = x.angle % TWO_PI
        if self.equal_spacing:
            k = int(round(psi * self.n / TWO_PI))
        else:
            k = int(np.searchsorted(self.angles, psi))
        candidates = {(k + d) % self.n for d in (-1, 0, 1)}
        return min(((i, distance(x, self.point(i))) for i in candidates), key=lambda item: item[1])


def _greedy_angles(n_max: int, theta: float, rng: np.random.Generator) -> np.ndarray:
    """
    Random sequential placement on the circle

    Every free arc between accepted points takes a new point uniformly among the positions
    at least theta from both ends, until no arc of length 2*theta is left.
    """
    accepted = [0.0]
    stack = [(0.0, TWO_PI)]
    while stack:
        start, length = stack.pop()
        if length < 2 * theta:
            continue
        offset = theta + rng.random() * (length - 2 * theta)
        accepted.append(start + offset)
        stack.append((start, offset))
        stack.append((start + offset, length - offset))
        if len(accepted) > n_max:
            throw("Greedy placement exceeded the equal-spacing count", InvariantViolation)
    return np.sort(np.asarray(accepted) % TWO_PI)


def pack_circle(r: float, min_sep: float, greedy: bool = False, seed: int = 0) -> Packing:
    """
    Place options on the circle of radius r at least min_sep apart

    Args:
        greedy: Random sequential ball removal instead of equal spacing (n <= 1e5)
        seed: Seed of the greedy placement

    Raises:
        InfeasiblePacking: If min_sep > 2r
    """
    if r <= 0:
        throw(f"Circle radius must be positive, got {r}")
    if min_sep <= 0:
        throw(f"Minimum separation must be positive, got {min_sep}")
    if min_sep > 2 * r:
        throw(f"Separation {min_sep} exceeds the diameter {2 * r}", InfeasiblePacking)

    theta = angular_pitch(r, min_sep)
    n = max(2, math.floor(TWO_PI / theta))
    if not greedy:
        logger.debug(f"Packed {n} options on radius {r} with separation {min_sep}")
        return Packing(radius=r, min_sep=min_sep, n=n)

    if n > GREEDY_LIMIT:
        throw(f"Greedy packing supports at most {GREEDY_LIMIT} options, r={r} needs {n}")
    angles = _greedy_angles(n, theta, np.random.default_rng(seed))
    logger.debug(f"Greedy packing placed {len(angles)} of at most {n} options")
    return Packing(radius=r, min_sep=min_sep, n=len(angles), angles=angles)


def verify_separation(packing: Packing) -> float:
    """
    Measured minimum pairwise distance of a packing

    Distance between two points of the circle grows with their angular gap, so for an
    equal-spacing packing every index difference is measured once (all of them for small n,
    only the adjacent one otherwise) and for a greedy packing the pair with the smallest gap.

    Raises:
        InvariantViolation: If two options are closer than min_sep
    """
    if packing.n < 2:
        return math.inf
    if packing.equal_spacing:
        first = packing.point(0)
        steps = range(1, packing.n // 2 + 1) if packing.n <= EXHAUSTIVE_LIMIT else (1,)
        separation = min(distance(first, packing.point(k)) for k in steps)
    else:
        gaps = np.diff(np.append(packing.angles, packing.angles[0] + TWO_PI))
        k = int(np.argmin(gaps))
        separation = distance(packing.point(k), packing.point((k + 1) % packing.n))
    if separation < packing.min_sep * (1 - 1e-9):
        throw(f"Options {separation} apart, below {packing.min_sep}", InvariantViolation)
    return separation


@dataclass(frozen=True)
class PolarGridMenu:
    """
    Finite query menu: a polar grid over the disk of radius `radius`

    Cell (i, j) sits at radius i * pitch and angle 2*pi*j / M_i, with
    M_i = max(1, ceil(2*pi*sinh(i * pitch) / pitch)) cells on ring i.
    """

    radius: float
    pitch: float = 0.0

    def __post_init__(self):
        if self.radius <= 0:
            throw(f"Menu radius must be positive, got {self.radius}")
        if self.pitch <= 0:
            object.__setattr__(self, "pitch", self.radius / MENU_DIVISIONS)

    @property
    def rings(self) -> int:
        return int(round(self.radius / self.pitch))

    def ring_size(self, i: int) -> int:
        return max(1, math.ceil(TWO_PI * math.sinh(i * self.pitch) / self.pitch))

    def __len__(self) -> int:
        return sum(self.ring_size(i) for i in range(self.rings + 1))

    def validate_key(self, key: tuple[int, int]):
        i, j = key
        if not 0 <= i <= self.rings or not 0 <= j < self.ring_size(i):
            throw(f"Menu cell {key} does not exist")

    def key_at(self, rho: float, phi: float) -> tuple[int, int]:
        """Cell nearest to the polar point (rho, phi)"""
        i = min(self.rings, max(0, int(round(rho / self.pitch))))
        size = self.ring_size(i)
        return i, int(round((phi % TWO_PI) * size / TWO_PI)) % size

    def point(self, key: tuple[int, int]) -> HPoint:
        self.validate_key(key)
        i, j = key
        if i == 0:
            return ORIGIN
        return HPoint.from_polar(i * self.pitch, 2 * mp.pi * j / self.ring_size(i))

    def random_key(self, rng: np.random.Generator) -> tuple[int, int]:
        """Cell under an area-uniform point of the disk"""
        u, phi = rng.random(), TWO_PI * rng.random()
        rho = float(acosh_stable(1 + mp.mpf(u) * (mp.cosh(self.radius) - 1)))
        return self.key_at(rho, phi)


@lru_cache(maxsize=4096)
def _query_frame(menu: PolarGridMenu, key: tuple[int, int]) -> np.ndarray:
    """Tangent frame at a menu cell as a float (2, 3) array"""
    e1, e2 = tangent_frame(menu.point(key))
    return np.array([[float(c) for c in e1], [float(c) for c in e2]])


class PackingGame(QueryGame):
    """
    Query game of a packing under the noisy gradient oracle

    Queries are menu cells; the center of option i at query q is the true
    (dist^2, gradient frame coordinates) of dist(., option_i)^2 at q, computed in float64
    from the option's Minkowski products with the frame at q:
    sinh(d) = |(<E1, o>, <E2, o>)| and grad = -2 d (<E1, o>, <E2, o>) / sinh(d).
    """

    def __init__(self, packing: Packing, noise: NoiseModel, r: float | None = None):
        if noise.dim != 3:
            throw(f"Packing games observe (value, gradient): noise dimension must be 3, got {noise.dim}")
        r = packing.radius if r is None else r
        super().__init__(packing.n, noise, observation_space(r, noise.C).volume)
        self.packing = packing
        self.r = r
        self.menu = PolarGridMenu(r)
        self._all_centers = lru_cache(maxsize=4)(self._centers_of_all)

    def _option_coords(self, options: np.ndarray) -> np.ndarray:
        phi = self.packing.option_angles(options)
        R = self.packing.radius
        sh = math.sinh(R)
        return np.stack([np.full(len(phi), math.cosh(R)), sh * np.cos(phi), sh * np.sin(phi)], axis=-1)

    def _centers_for(self, q, options: np.ndarray) -> np.ndarray:
        frame = _query_frame(self.menu, q)
        o = self._option_coords(options)
        a = o[:, 1:] @ frame[:, 1:].T - np.outer(o[:, 0], frame[:, 0])
        s = np.hypot(a[:, 0], a[:, 1])
        d = np.arcsinh(s)
        with np.errstate(invalid="ignore", divide="ignore"):
            scale = np.where(s > 0, -2 * d / s, 0.0)
        return np.column_stack([d * d, scale * a[:, 0], scale * a[:, 1]])

    def _centers_of_all(self, q) -> np.ndarray:
        return self._centers_for(q, np.arange(self.n))

    def centers(self, q, options: np.ndarray) -> np.ndarray:
        q = tuple(q)
        if len(options) == self.n:
            return self._all_centers(q)
        return self._centers_for(q, options)

    def random_query(self, rng: np.random.Generator) -> tuple[int, int]:
        return self.menu.random_key(rng)

    def opening_query(self) -> tuple[int, int]:
        return 0, 0

    def query_toward(self, option: int) -> tuple[int, int]:
        """Cell one unit inside the circle, on the option's ray"""
        return self.menu.key_at(max(0.0, self.packing.radius - 1), self.packing.angle(option))

    def focus_option(self, remaining: np.ndarray) -> int:
        """Middle survivor of the arc they span on the circle"""
        if len(remaining) == 1:
            return int(remaining[0])
        angles = self.packing.option_angles(remaining)
        gaps = np.diff(np.append(angles, angles[0] + TWO_PI))
        start = (int(np.argmax(gaps)) + 1) % len(remaining)
        return int(remaining[(start + len(remaining) // 2) % len(remaining)])


def build_game(packing: Packing, noise: NoiseModel, r: float | None = None) -> PackingGame:
    """Wrap the noisy gradient oracle on a packing as a query game"""
    game = PackingGame(packing, noise, r)
    logger.info(f"Built a packing game with {game.n} options, c={game.c:.4g}, |X|={game.volume:.4g}")
    return game
