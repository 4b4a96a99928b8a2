"""
Selftest Service - fast invariant sweep across every module
Runs without pytest so an installed lab can check itself
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from mpmath import mp

from hyperlab.hyperlab.bounds import condition_ratio_lower, lemma_last_solve
from hyperlab.hyperlab.exceptions import HyperlabError
from hyperlab.hyperlab.game import (
    disjoint_game,
    identical_game,
    lower_bound_queries,
    play,
    potential_estimate,
    random_strategy,
    ring_game,
    trial_rng,
)
from hyperlab.hyperlab.gconvex import DistSqObjective, d_coth_d, hessian_fd
from hyperlab.hyperlab.geometry import (
    ORIGIN,
    TangentVec,
    circle_measures,
    distance,
    exp_map,
    log_map,
    polygon_circumference,
    random_point,
    third_side,
)
from hyperlab.hyperlab.oracles.noise import NoiseModel
from hyperlab.hyperlab.oracles.noisy_gradient import NoisyGradientOracle
from hyperlab.hyperlab.optim import compass_walk
from hyperlab.hyperlab.reduction import pack_circle, verify_separation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _round_trip(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(100):
        x, y = random_point(rng, 50.0), random_point(rng, 50.0)
        worst = max(worst, distance(y, exp_map(x, log_map(x, y))))
    return worst < 1e-8, f"worst exp/log round trip {worst:.3e}"


def _circumference(rng) -> tuple[bool, str]:
    closed = circle_measures(1.0)[0]
    polygon = polygon_circumference(1.0, 10**6)
    error = abs(polygon - closed) / closed
    return error < 1e-6 and abs(closed - 2 * math.pi * math.sinh(1)) < 1e-12, f"relative error {error:.3e}"


def _hessian(rng) -> tuple[bool, str]:
    worst = 0.0
    for d in (0.5, 1.0, 3.0, 10.0):
        obj = DistSqObjective.at_distance(d)
        radial = hessian_fd(obj, ORIGIN, TangentVec.unit(ORIGIN, 0))
        across = hessian_fd(obj, ORIGIN, TangentVec.unit(ORIGIN, mp.pi / 2))
        worst = max(worst, abs(radial - 2), abs(across - 2 * d_coth_d(d)))
    return worst < 1e-3, f"worst eigenvalue error {worst:.3e}"


def _compass(rng) -> tuple[bool, str]:
    obj = DistSqObjective.at_distance(100.0)
    oracle = NoisyGradientOracle(obj, NoiseModel.uniform_box(0.0), rng)
    walked = compass_walk(obj, oracle, ORIGIN, bearing_error=1e-2).final_distance
    expected = third_side(100.0, 100.0, 1e-2)
    return abs(walked - expected) <= 1e-6 * expected, f"walked {walked:.6f}, law of cosines {expected:.6f}"


def _potential(rng) -> tuple[bool, str]:
    seed = int(rng.integers(2**31))
    disjoint = potential_estimate(disjoint_game(8), random_strategy, trials=1000, seed=seed)
    identical = potential_estimate(identical_game(8), random_strategy, trials=1000, seed=seed, budget=3)
    ok = (
        disjoint.holds
        and abs(disjoint.mean[0] - math.log(8)) < 1e-12
        and identical.holds
        and bool(np.all(identical.mean == 0))
    )
    return ok, f"disjoint first step {disjoint.mean[0]:.6f}, bound {disjoint.bound:.6f}"


def _elimination(rng) -> tuple[bool, str]:
    game = ring_game()
    seed = int(rng.integers(2**31))
    # play raises if the true option is ever struck
    transcripts = [play(game, random_strategy, trial_rng(seed, t), budget=10) for t in range(200)]
    ok = all(b <= a for t in transcripts for a, b in zip(t.m, t.m[1:]))
    return ok, f"{len(transcripts)} transcripts, survivors never grow"


def _query_bound(rng) -> tuple[bool, str]:
    value = lower_bound_queries(1024, 8.0, 1.0)
    return abs(value - 10 / 9) < 1e-12, f"log 1024 / (3 log 8) = {value:.6f}"


def _packing(rng) -> tuple[bool, str]:
    packing = pack_circle(20.0, 10.0)
    separation = verify_separation(packing)
    return separation >= 10.0 * (1 - 1e-12), f"n={packing.n}, separation {separation:.6f}"


def _lemma(rng) -> tuple[bool, str]:
    solution = lemma_last_solve(50.0)
    return abs(solution.c_side - 3.31) <= 0.01, f"c(50) = {solution.c_side:.6f}"


def _condition(rng) -> tuple[bool, str]:
    result = condition_ratio_lower(10.0)
    return abs(result.witness - 10 / math.tanh(10)) < 1e-6, f"witness {result.witness:.6f}"


CHECKS: tuple[tuple[str, Callable], ...] = (
    ("geometry.round_trip", _round_trip),
    ("geometry.circumference", _circumference),
    ("gconvex.hessian", _hessian),
    ("optim.compass_walk", _compass),
    ("game.potential", _potential),
    ("game.elimination", _elimination),
    ("game.query_bound", _query_bound),
    ("reduction.separation", _packing),
    ("bounds.lemma", _lemma),
    ("bounds.condition", _condition),
)


class SelftestService:
    """Runs the invariant checks in order"""

    @staticmethod
    def run_checks(seed: int = 0, stop_on_failure: bool = True) -> list[CheckResult]:
        """
        Run every check with its own stream derived from seed

        Returns:
            Results up to and including the first failure when stop_on_failure is set
        """
        results = []
        for k, (name, check) in enumerate(CHECKS):
            try:
                passed, detail = check(np.random.default_rng((seed, k)))
            except HyperlabError as e:
                logger.error(f"Selftest {name} raised {type(e).__name__}: {e}")
                passed, detail = False, str(e)
            results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
            if not passed:
                logger.error(f"Selftest {name} failed: {detail}")
                if stop_on_failure:
                    break
            else:
                logger.debug(f"Selftest {name}: {detail}")
        return results
