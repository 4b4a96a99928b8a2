"""
Noisy query games

A game has n options and a set of queries. Querying q while option i is the truth yields an
observation drawn from f_{q,i}, the noise density translated to the option's center at q.
In the transparent variant the player also sees a height y drawn uniformly under the graph
of that density at x, which lets it strike every option whose graph lies below (x, y).
"""

import json
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.special import logsumexp
from scipy.stats import qmc

from hyperlab.hyperlab import settings
from hyperlab.hyperlab.exceptions import DegenerateGame, InvariantViolation, ValidationError, throw
from hyperlab.hyperlab.oracles.noise import NoiseModel

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 50
WIN_PROBABILITY = 2 / 3
MIN_POTENTIAL_TRIALS = 1000


class QueryGame(ABC):
    """
    Base class for noisy query games

    Subclasses supply the option centers per query and the query menu; densities, sampling
    under the graph and elimination are shared.

    Args:
        n: Number of options
        noise: Noise model whose translates are the densities f_{q,i}
        volume: |X|, the volume of the observation space
    """

    def __init__(self, n: int, noise: NoiseModel, volume: float):
        if n < 1:
            throw(f"A game needs at least one option, got n={n}")
        if not volume > 0:
            throw(f"Observation space volume must be positive, got {volume}")
        self.n = n
        self.noise = noise
        self.volume = volume

    @property
    def c(self) -> float:
        return self.noise.c

    @property
    def dim(self) -> int:
        return self.noise.dim

    @property
    def log_capacity(self) -> float:
        """log(c * |X|): the most one query can shrink log(remaining) in expectation"""
        return math.log(self.c * self.volume)

    @abstractmethod
    def centers(self, q, options: np.ndarray) -> np.ndarray:
        """Centers of f_{q,i} for the given options, shape (len(options), dim)"""
        pass

    @abstractmethod
    def random_query(self, rng: np.random.Generator):
        pass

    @abstractmethod
    def opening_query(self):
        """Query made before anything is known"""
        pass

    @abstractmethod
    def query_toward(self, option: int):
        """Query that best tells `option` apart from its neighbours"""
        pass

    def focus_option(self, remaining: np.ndarray) -> int:
        """Most central surviving option"""
        return int(remaining[len(remaining) // 2])

    def offsets(self, x: np.ndarray, centers: np.ndarray) -> np.ndarray:
        return x - centers

    def densities(self, x: np.ndarray, centers: np.ndarray) -> np.ndarray:
        """f_{q,i}(x) for every row of centers"""
        slack = settings.SUPPORT_SLACK * (1 + np.max(np.abs(centers), axis=-1))
        return self.noise.pdf(self.offsets(x, centers), slack=slack)

    def pdf(self, q, i: int, x) -> float:
        centers = self.centers(q, np.array([i]))
        return float(self.densities(np.asarray(x, dtype=float), centers)[0])


@dataclass
class TransparentState:
    """
    What a transparent player knows: the surviving options (sorted) and the observations so far
    """

    remaining: np.ndarray
    history: list = field(default_factory=list)

    @classmethod
    def start(cls, n: int) -> "TransparentState":
        return cls(np.arange(n))

    @property
    def m(self) -> int:
        return len(self.remaining)


@dataclass
class Transcript:
    """
    One trial of a game

    m[t] is the number of surviving options after t queries.
    """

    seed: Any
    i_star: int
    m: list[int]
    success: bool
    guess: int
    transparent: bool = True

    @property
    def queries(self) -> int:
        return len(self.m) - 1

    def to_line(self) -> str:
        record = asdict(self)
        record["queries"] = self.queries
        return json.dumps(record, sort_keys=True)

    @classmethod
    def from_line(cls, line: str) -> "Transcript":
        record = json.loads(line)
        record.pop("queries", None)
        if isinstance(record.get("seed"), list):
            record["seed"] = tuple(record["seed"])
        return cls(**record)


def sample_under_graph(
    game: QueryGame, q, i_star: int, rng: np.random.Generator, center: np.ndarray | None = None
) -> tuple[np.ndarray, float]:
    """
    Uniform point (x, y) under the graph of f_{q,i*}

    x is drawn from f_{q,i*} and y uniformly on [0, f_{q,i*}(x)]. For a point-mass density
    the height is infinite and y is reported as 0.
    """
    if center is None:
        center = game.centers(q, np.array([i_star]))[0]
    x = center + game.noise.sample(rng)
    height = float(game.densities(x, center[None, :])[0])
    y = rng.uniform(0.0, height) if math.isfinite(height) else 0.0
    return x, y


def _survivors(densities: np.ndarray, y: float) -> np.ndarray:
    # ties f = y stay
    return (densities > 0) & (densities >= y)


def transparent_update(
    state: TransparentState, q, observation: tuple, game: QueryGame, centers: np.ndarray | None = None
) -> TransparentState:
    """Strike every remaining option whose graph at q lies below the observed (x, y)"""
    x, y = observation
    if centers is None:
        centers = game.centers(q, state.remaining)
    keep = _survivors(game.densities(x, centers), y)
    return TransparentState(state.remaining[keep], state.history + [(q, x, y)])


def _position(remaining: np.ndarray, option: int) -> int:
    k = int(np.searchsorted(remaining, option))
    if k >= len(remaining) or remaining[k] != option:
        throw(f"True option {option} was eliminated", InvariantViolation)
    return k


def play(
    game: QueryGame,
    strategy: Callable,
    rng: np.random.Generator,
    i_star: int | None = None,
    budget: int = DEFAULT_BUDGET,
    transparent: bool = True,
    seed: Any = None,
) -> Transcript:
    """
    Play one trial

    The transparent player wins once a single option survives. The opaque player sees only
    x, keeps the likelihood posterior over options and declares its most likely option once
    that option's posterior mass reaches 2/3. Heights are drawn in both modes so that matched
    seeds give matched observation streams. On budget exhaustion the transparent player
    guesses uniformly among survivors and the opaque player guesses its most likely option.

    Raises:
        InvariantViolation: If elimination ever strikes the true option
    """
    if i_star is None:
        i_star = int(rng.integers(game.n))
    state = TransparentState.start(game.n)
    log_weights = np.zeros(game.n)
    m = [state.m]
    guess = None

    while True:
        if transparent and state.m == 1:
            guess = int(state.remaining[0])
            break
        if not transparent:
            posterior = np.exp(log_weights - logsumexp(log_weights))
            if posterior.max() >= WIN_PROBABILITY:
                guess = int(state.remaining[np.argmax(posterior)])
                break
        if len(m) - 1 >= budget:
            break

        q = strategy(game, state, rng)
        centers = game.centers(q, state.remaining)
        star = _position(state.remaining, i_star)
        x, y = sample_under_graph(game, q, i_star, rng, center=centers[star])
        densities = game.densities(x, centers)
        if transparent:
            keep = _survivors(densities, y)
        else:
            keep = densities > 0
            likelihood = np.where(np.isinf(densities), 1.0, densities)
            log_weights = log_weights[keep] + np.log(likelihood[keep])
        state = TransparentState(state.remaining[keep], state.history + [(q, x, y)])
        _position(state.remaining, i_star)
        m.append(state.m)

    if guess is None:
        if transparent:
            guess = int(rng.choice(state.remaining))
        else:
            guess = int(state.remaining[np.argmax(log_weights)])
    transcript = Transcript(
        seed=seed, i_star=i_star, m=m, success=guess == i_star, guess=guess, transparent=transparent
    )
    logger.debug(f"Trial {seed}: {transcript.queries} queries, success={transcript.success}")
    return transcript


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial of a seeded batch"""
    return np.random.default_rng((seed, trial))


@dataclass(frozen=True)
class PotentialEstimate:
    """Per-step mean and standard error of log m_{t-1} - log m_t, and the bound log(c|X|)"""

    mean: np.ndarray
    stderr: np.ndarray
    bound: float
    trials: int

    @property
    def holds(self) -> bool:
        return bool(np.all(self.mean <= self.bound + 3 * self.stderr + 1e-12))

    def to_record(self) -> dict:
        return {
            "mean": [float(v) for v in self.mean],
            "stderr": [float(v) for v in self.stderr],
            "bound": self.bound,
            "trials": self.trials,
            "holds": self.holds,
        }


def potential_estimate(
    game: QueryGame, strategy: Callable, trials: int, seed: int = 0, budget: int = DEFAULT_BUDGET
) -> PotentialEstimate:
    """
    Monte Carlo estimate of the per-step potential decrease under a strategy

    Trials that end early contribute a decrease of 0 to the later steps.
    """
    if trials < MIN_POTENTIAL_TRIALS:
        throw(f"Potential estimate needs at least {MIN_POTENTIAL_TRIALS} trials, got {trials}")
    transcripts = [play(game, strategy, trial_rng(seed, t), budget=budget, seed=t) for t in range(trials)]
    return potential_from_transcripts(transcripts, game.log_capacity)


def potential_from_transcripts(transcripts: list[Transcript], bound: float) -> PotentialEstimate:
    """Per-step potential decrease of already played transcripts"""
    trials = len(transcripts)
    if trials < MIN_POTENTIAL_TRIALS:
        throw(f"Potential estimate needs at least {MIN_POTENTIAL_TRIALS} trials, got {trials}")
    drops = [-np.diff(np.log(transcript.m)) for transcript in transcripts]
    steps = max(1, max(len(d) for d in drops))
    table = np.zeros((trials, steps))
    for row, d in zip(table, drops):
        row[: len(d)] = d
    estimate = PotentialEstimate(
        mean=table.mean(axis=0),
        stderr=table.std(axis=0, ddof=1) / math.sqrt(trials),
        bound=bound,
        trials=trials,
    )
    logger.info(
        f"Potential estimate over {trials} trials: largest step {estimate.mean.max():.4g}, "
        f"bound {estimate.bound:.4g}"
    )
    return estimate


def lower_bound_queries(n: int, c: float, volume: float) -> float:
    """
    log n / (3 log(c |X|)): fewer queries than this cannot win with probability 2/3

    Raises:
        DegenerateGame: If c * |X| <= 1
    """
    capacity = c * volume
    if not capacity > 1:
        throw(f"c * |X| = {capacity} must exceed 1", DegenerateGame)
    return math.log(n) / (3 * math.log(capacity))


@dataclass(frozen=True)
class DensityCheck:
    integral: float
    max_density: float
    c: float

    @property
    def ok(self) -> bool:
        return abs(self.integral - 1) < 1e-3 and self.max_density <= self.c * (1 + 1e-9)


def check_density(
    game: QueryGame, q, i: int, log2_samples: int = 14, spot_checks: int = 100_000, seed: int = 0
) -> DensityCheck:
    """
    Integrate f_{q,i} over its support box by scrambled Sobol points and spot-check its
    maximum against c on uniformly random points
    """
    if game.noise.exact:
        throw("A point-mass density has no integrable graph", ValidationError)
    center = game.centers(q, np.array([i]))[0]
    C, dim = game.noise.C, game.dim
    lo, hi = center - C, center + C
    points = qmc.scale(qmc.Sobol(d=dim, scramble=True, seed=seed).random_base2(log2_samples), lo, hi)
    box = float(np.prod(hi - lo))
    integral = box * float(np.mean(game.noise.pdf(points - center)))
    spots = np.random.default_rng(seed).uniform(lo, hi, size=(spot_checks, dim))
    max_density = float(np.max(game.noise.pdf(spots - center)))
    return DensityCheck(integral=integral, max_density=max_density, c=game.c)


class TableGame(QueryGame):
    """
    Finite game given by a table of centers

    Args:
        table: Centers, shape (queries, n, dim) or (n, dim) for a single query
        period: If set, observations live on a circle of this circumference
    """

    def __init__(self, table, noise: NoiseModel, volume: float, period: float | None = None):
        table = np.asarray(table, dtype=float)
        if table.ndim == 2:
            table = table[None]
        if table.ndim != 3 or table.shape[-1] != noise.dim:
            throw(f"Center table of shape {table.shape} does not match noise dimension {noise.dim}")
        super().__init__(table.shape[1], noise, volume)
        self.table = table
        self.period = period

    @property
    def n_queries(self) -> int:
        return self.table.shape[0]

    def centers(self, q, options: np.ndarray) -> np.ndarray:
        return self.table[q][options]

    def offsets(self, x: np.ndarray, centers: np.ndarray) -> np.ndarray:
        z = x - centers
        if self.period:
            z = (z + self.period / 2) % self.period - self.period / 2
        return z

    def random_query(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.n_queries))

    def opening_query(self) -> int:
        return 0

    def query_toward(self, option: int) -> int:
        return option % self.n_queries


def identical_game(n: int) -> TableGame:
    """Every option has the same density: nothing can ever be learned"""
    return TableGame(np.zeros((n, 1)), NoiseModel.uniform_box(0.5, dim=1), volume=1.0)


def disjoint_game(n: int) -> TableGame:
    """Unit-width densities on [i, i+1]: one query reveals the truth"""
    return TableGame(np.arange(n)[:, None] + 0.5, NoiseModel.uniform_box(0.5, dim=1), volume=float(n))


def overlap_game(shift: float) -> TableGame:
    """Two unit-width densities offset by `shift`; a query strikes the wrong one with probability shift"""
    if not 0 <= shift <= 1:
        throw(f"Shift must lie in [0, 1], got {shift}")
    return TableGame([[0.5], [0.5 + shift]], NoiseModel.uniform_box(0.5, dim=1), volume=1.0 + shift)


def ring_game(n: int = 60, C: float = 1.5) -> TableGame:
    """Options at the integers of a circle of circumference n; each query leaves 2C options"""
    noise = NoiseModel.uniform_box(C, dim=1)
    return TableGame(np.arange(n)[:, None], noise, volume=float(n), period=float(n))
