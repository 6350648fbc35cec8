"""
Configuration settings for the characteristic class toolkit
"""
import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


def _int_setting(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        logger.warning(f"{name}={raw!r} is not an integer, using {default}")
        return default


class Config:
    """Application configuration"""

    # Reproducibility: default master seed for random slicing forms
    DEFAULT_SEED = 271828
    SEED = _int_setting("CCS_SEED", DEFAULT_SEED)

    # Generic hyperplane slicing
    SLICE_BOUND = _int_setting("CCS_SLICE_BOUND", 997)
    SLICE_RETRIES = _int_setting("CCS_SLICE_RETRIES", 25)

    # Inclusion-exclusion and batch concurrency
    MAX_WORKERS = _int_setting("CCS_MAX_WORKERS", 1)

    # Groebner engine: "buchberger" (own) or "sympy" (sympy.polys.groebnertools)
    GROEBNER_ENGINE = os.getenv("CCS_GROEBNER_ENGINE", "buchberger").lower()
    VERIFY_GROEBNER = os.getenv("CCS_VERIFY_GROEBNER", "false").lower() == "true"

    # Saturation strategy: "generic" (one random element), "colon" (iterated quotient) or "generators"
    SATURATION = os.getenv("CCS_SATURATION", "generic").lower()

    # Projective degrees: "pullback" (slice in the source) or "graph" (slice the graph ideal)
    DEGREES_METHOD = os.getenv("CCS_DEGREES_METHOD", "pullback").lower()

    LOG_LEVEL = os.getenv("CCS_LOG_LEVEL", "WARNING").upper()

    # Server Settings
    HOST = os.getenv("HOST", "0.0.0.0")
    PORT = _int_setting("PORT", 8000)

    GROEBNER_ENGINES = {"buchberger", "sympy"}
    SATURATION_STRATEGIES = {"generic", "colon", "generators"}
    DEGREES_METHODS = {"pullback", "graph"}

    @classmethod
    def validate(cls):
        """Validate configuration, falling back to defaults on bad values"""
        if cls.SLICE_BOUND < 1:
            logger.warning(f"CCS_SLICE_BOUND must be positive, got {cls.SLICE_BOUND}; using 997")
            cls.SLICE_BOUND = 997
        if cls.SLICE_RETRIES < 1:
            logger.warning(f"CCS_SLICE_RETRIES must be positive, got {cls.SLICE_RETRIES}; using 25")
            cls.SLICE_RETRIES = 25
        if cls.MAX_WORKERS < 1:
            logger.warning(f"CCS_MAX_WORKERS must be positive, got {cls.MAX_WORKERS}; using 1")
            cls.MAX_WORKERS = 1
        if cls.GROEBNER_ENGINE not in cls.GROEBNER_ENGINES:
            logger.warning(f"Unknown CCS_GROEBNER_ENGINE {cls.GROEBNER_ENGINE!r}; using buchberger")
            cls.GROEBNER_ENGINE = "buchberger"
        if cls.SATURATION not in cls.SATURATION_STRATEGIES:
            logger.warning(f"Unknown CCS_SATURATION {cls.SATURATION!r}; using generic")
            cls.SATURATION = "generic"
        if cls.DEGREES_METHOD not in cls.DEGREES_METHODS:
            logger.warning(f"Unknown CCS_DEGREES_METHOD {cls.DEGREES_METHOD!r}; using pullback")
            cls.DEGREES_METHOD = "pullback"
        if not isinstance(logging.getLevelName(cls.LOG_LEVEL), int):
            logger.warning(f"Unknown CCS_LOG_LEVEL {cls.LOG_LEVEL!r}; using WARNING")
            cls.LOG_LEVEL = "WARNING"

        return True

# Validate configuration on import
Config.validate()
