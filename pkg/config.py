import logging
import os
from functools import lru_cache

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseModel):
    """Runtime limits and verbosity, read from the environment"""

    log_level: str = Field(default="WARNING", description="Root log level")
    treewidth_limit: int = Field(default=32, gt=0, description="Max vertices for exact treewidth")
    oracle_limit: int = Field(default=20, gt=0, description="Max vertices for hereditary brute force")
    scan_limit: int = Field(default=16, gt=0, description="Max vertices for a full 2^n scan")
    exhaustive_limit: int = Field(default=7, gt=0, description="Max vertices for all-graph scans")
    exact_mode_limit: int = Field(default=24, gt=0, description="Max vertices for exact co-treewidth mode")
    argmax_cap: int = Field(default=5, ge=0, description="Argmax graphs kept per bound record")


_ENV_NAMES = {
    "treewidth_limit": "CLOSEDGRAPHS_TW_LIMIT",
    "oracle_limit": "CLOSEDGRAPHS_ORACLE_LIMIT",
    "scan_limit": "CLOSEDGRAPHS_SCAN_LIMIT",
    "exhaustive_limit": "CLOSEDGRAPHS_EXHAUSTIVE_LIMIT",
    "exact_mode_limit": "CLOSEDGRAPHS_EXACT_LIMIT",
    "argmax_cap": "CLOSEDGRAPHS_ARGMAX_CAP",
}


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Invalid {name} '{raw}' configured. Falling back to {default}.")
        return default
    if value < 1:
        logger.warning(f"Non-positive {name} '{raw}' configured. Falling back to {default}.")
        return default
    return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Build the process-wide settings from environment variables"""
    defaults = Settings()
    values = {
        field: _int_from_env(env_name, getattr(defaults, field))
        for field, env_name in _ENV_NAMES.items()
    }

    level = os.getenv("CLOSEDGRAPHS_LOG", defaults.log_level).strip().upper()
    if level not in LOG_LEVELS:
        logger.warning(f"Invalid CLOSEDGRAPHS_LOG '{level}' configured. Falling back to '{defaults.log_level}'.")
        level = defaults.log_level
    values["log_level"] = level

    return Settings(**values)
