"""Library-wide numeric defaults.

Every CLI flag takes its default from here so the command line never carries
constants the library does not know about.
"""

import logging
import math
import os

logger = logging.getLogger(__name__)


def _env_float(name: str, default: float) -> float:
    """Return an env variable as a positive finite float, falling back to ``default``."""
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        parsed = float(value.strip())
    except ValueError:
        logger.warning("config: ignoring non-numeric %s=%r", name, value)
        return default
    if not math.isfinite(parsed) or parsed <= 0.0:
        logger.warning("config: ignoring non-positive or non-finite %s=%r", name, value)
        return default
    return parsed


class Config:
    # sampling
    DEFAULT_SAMPLES = 257
    ARCLENGTH_SAMPLES = 257

    # condition tolerances
    EPS_ZERO = _env_float("ISOGEO4_EPS_ZERO", 1e-9)
    EPS_NONZERO = _env_float("ISOGEO4_EPS_NONZERO", 1e-7)

    # Frenet construction
    EPS_K = 1e-12
    K2_DEGENERATE = 1e-10
    FRAME_TOL = 1e-10

    # validator thresholds
    GRAM_SINGULAR = 1e-14
    COLLINEARITY_TOL = 1e-9
    TANGENTIAL_TOL = 1e-9

    # grids: (n_s, n_free) for slices, (n_s, n_t, n_q) for volumes
    SLICE_GRID = (65, 17)
    VOLUME_GRID = (33, 9, 9)

    SCENE_SCHEMA_DOC = "docs/scene_schema.md"
