"""
Query strategies

A strategy maps (game, state, rng) to the next query. Registry names are the values
accepted by --strategy.
"""

import numpy as np

from hyperlab.hyperlab.exceptions import ConfigError, throw
from hyperlab.hyperlab.game.game import QueryGame, TransparentState


def random_strategy(game: QueryGame, state: TransparentState, rng: np.random.Generator):
    """Uniformly random query from the menu"""
    return game.random_query(rng)


def ml_strategy(game: QueryGame, state: TransparentState, rng: np.random.Generator):
    """
    Maximum-likelihood query rule

    Opens with the game's opening query, then queries one unit inside the circle on the ray
    of the middle survivor of the arc the survivors span. Under uniform noise every survivor
    of the transparent game has the same likelihood, so the likelihood ranking is a tie over
    the whole arc and the rule breaks it at the middle survivor.
    """
    if state.m == game.n:
        return game.opening_query()
    return game.query_toward(game.focus_option(state.remaining))


STRATEGIES = {
    "random": random_strategy,
    "ml": ml_strategy,
}


def get_strategy(name: str):
    strategy = STRATEGIES.get(name)
    if strategy is None:
        throw(f"Unknown strategy: {name}. Choose from {sorted(STRATEGIES)}", ConfigError)
    return strategy
