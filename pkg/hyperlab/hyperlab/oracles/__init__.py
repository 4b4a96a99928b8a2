"""
Noisy first-order oracles
"""

from hyperlab.hyperlab.exceptions import ConfigError, throw

_ORACLES = {
    "hyperbolic": "hyperlab.hyperlab.oracles.noisy_gradient.NoisyGradientOracle",
    "euclidean": "hyperlab.hyperlab.oracles.euclidean.EuclideanNoisyOracle",
}


def get_oracle(kind: str):
    """Get oracle class for a geometry"""
    from hyperlab.hyperlab.utils import get_attr

    if kind not in _ORACLES:
        throw(f"Unknown oracle: {kind}", ConfigError)

    return get_attr(_ORACLES[kind])
