from hyperlab.hyperlab.game.game import (
    DensityCheck,
    PotentialEstimate,
    QueryGame,
    TableGame,
    Transcript,
    TransparentState,
    check_density,
    disjoint_game,
    identical_game,
    lower_bound_queries,
    overlap_game,
    play,
    potential_estimate,
    potential_from_transcripts,
    ring_game,
    sample_under_graph,
    transparent_update,
    trial_rng,
)
from hyperlab.hyperlab.game.strategies import STRATEGIES, get_strategy, ml_strategy, random_strategy
