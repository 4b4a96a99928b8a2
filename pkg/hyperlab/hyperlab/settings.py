"""
Hyperlab Settings
Domain limits and environment-driven defaults shared by every module
"""

import logging
import math
import os

logger = logging.getLogger(__name__)

# Working radius cap; beyond it experiments are rejected at configuration time
MAX_RADIUS = 200.0

# Queries must stay within QUERY_RADIUS_FACTOR * r of the origin
QUERY_RADIUS_FACTOR = 1000

# Sheet and tangency tolerance, relative to the size of the coordinates involved
GEOMETRY_TOL = 1e-9

# Relative slack on noise supports so that rounding in center + z never drops the true option
SUPPORT_SLACK = 1e-9

# Significant digits left after products of cosh/sinh cancel
SIGNIFICANT_DIGITS = 30


def dps_for_radius(radius: float) -> int:
    """Decimal digits that keep points out to radius on the sheet through products that cancel"""
    return SIGNIFICANT_DIGITS + math.ceil(2 * radius * math.log10(math.e))


DEFAULT_DPS = dps_for_radius(2 * MAX_RADIUS)

DEFAULT_SEED = 0
DEFAULT_LOG_LEVEL = "WARNING"


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={value!r}, using {default}")
        return default


# mpmath precision is global state; it is fixed once at import
WORKING_DPS = max(_env_int("HYPERLAB_DPS", DEFAULT_DPS), 50)


def get_default_seed() -> int:
    """Seed used when none is given on the command line"""
    return _env_int("HYPERLAB_SEED", DEFAULT_SEED)


def get_default_threads() -> int:
    """Worker pool size, defaults to the available cores"""
    return max(_env_int("HYPERLAB_THREADS", os.cpu_count() or 1), 1)


def get_log_level() -> str:
    return os.environ.get("HYPERLAB_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
