"""Centralized environment configuration for fiberscope.

All environment variables are read here for consistency, validation, and
documentation. Malformed values are logged and replaced by the defaults.
"""

import os
import logging

from .subspace_geometry import RankTolerance
from .exceptions import InvalidToleranceError

logger = logging.getLogger(__name__)


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning('Invalid float for %s: %r (using default %r)', name, raw, default)
        return default


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning('Invalid integer for %s: %r (using default %d)', name, raw, default)
        return default
    if value < minimum:
        logger.warning('%s must be >= %d, got %d (using default %d)', name, minimum, value, default)
        return default
    return value


# Tolerance defaults (relative singular-value cutoff, principal-cosine
# cutoff for intersections, angle cutoff for "not closed")
TOL_RANK = _env_float('FIBERSCOPE_TOL_RANK', 1e-10)
TOL_INTERSECT = _env_float('FIBERSCOPE_TOL_INTERSECT', 1e-8)
TOL_CLOSE = _env_float('FIBERSCOPE_TOL_CLOSE', 1e-6)

# Default truncation K for real-line fiberization (|k| <= K)
TRUNCATION = _env_int('FIBERSCOPE_TRUNCATION', 64)

# Instance configs must stay finitely generated
MAX_GENERATORS = _env_int('FIBERSCOPE_MAX_GENERATORS', 64, minimum=1)
MAX_TARGETS = _env_int('FIBERSCOPE_MAX_TARGETS', 16, minimum=1)

# Seed for random generators and the crosscheck suite
SEED = _env_int('FIBERSCOPE_SEED', 0)

# How many custom-table profiles stay cached
PROFILE_CACHE_SIZE = _env_int('FIBERSCOPE_PROFILE_CACHE_SIZE', 32, minimum=1)

# Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING')


def default_tolerance() -> RankTolerance:
    """Return the tolerance triple configured by the environment.

    Falls back to the built-in defaults if the environment values do not
    form a valid tolerance.
    """
    try:
        return RankTolerance(
            relative_threshold=TOL_RANK,
            intersect_threshold=TOL_INTERSECT,
            close_threshold=TOL_CLOSE,
        )
    except InvalidToleranceError as e:
        logger.warning('Environment tolerances rejected (%s); using built-in defaults', e)
        return RankTolerance()


def log_configuration():
    """Log current configuration."""
    logger.info(
        'Configuration loaded: '
        'TOL_RANK=%g, '
        'TOL_INTERSECT=%g, '
        'TOL_CLOSE=%g, '
        'TRUNCATION=%d, '
        'MAX_GENERATORS=%d, '
        'MAX_TARGETS=%d, '
        'SEED=%d, '
        'LOG_LEVEL=%s',
        TOL_RANK,
        TOL_INTERSECT,
        TOL_CLOSE,
        TRUNCATION,
        MAX_GENERATORS,
        MAX_TARGETS,
        SEED,
        LOG_LEVEL,
    )


def get_config_summary() -> dict:
    """Return a summary of configuration for debugging/logging."""
    return {
        'tol_rank': TOL_RANK,
        'tol_intersect': TOL_INTERSECT,
        'tol_close': TOL_CLOSE,
        'truncation': TRUNCATION,
        'max_generators': MAX_GENERATORS,
        'max_targets': MAX_TARGETS,
        'seed': SEED,
        'profile_cache_size': PROFILE_CACHE_SIZE,
        'log_level': LOG_LEVEL,
    }
