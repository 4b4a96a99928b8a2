"""
Hyperlab Exceptions
One hierarchy for every error the lab raises; exit codes are read by the CLI
"""

import logging

logger = logging.getLogger(__name__)


class HyperlabError(Exception):
    """Base class for hyperlab errors"""

    exit_code = 3


class ValidationError(HyperlabError):
    """A value violates a documented range or invariant at construction"""

    exit_code = 2


class ConfigError(ValidationError):
    """Experiment configuration is invalid"""


class QueryOutOfRange(HyperlabError):
    """Query point lies outside the allowed query region"""


class DegenerateGame(HyperlabError):
    """c * |X| <= 1, the potential bound carries no information"""

    exit_code = 2


class InfeasiblePacking(HyperlabError):
    """Requested separation cannot be met on the circle"""

    exit_code = 2


class NoRoot(HyperlabError):
    """Bracketed root finding has no sign change"""


class InvariantViolation(HyperlabError):
    """A checked invariant failed at runtime"""


def throw(msg: str, exc: type[HyperlabError] = ValidationError):
    """Log and raise, in one call"""
    logger.error(msg)
    raise exc(msg)
