import logging
import os
from pathlib import Path

from dotenv import load_dotenv

from utils.constants import (
    DEFAULT_COMPOSITION_DEPTH,
    DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_NODE_BUDGET,
    DEFAULT_VERIFY_SAMPLES,
    SUPPORTED_PRIMES,
)

load_dotenv()

logger = logging.getLogger("wexlattice.config")


def _int_from_env(name: str, default: int, hint: str) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(
            f"❌ {name} must be a valid integer (got {raw!r})!\n\n"
            f"{hint}\n"
            f"Either fix the value in your .env file or unset {name} to use "
            f"the default ({default})."
        )


# Field Configuration
DEFAULT_FIELD = _int_from_env(
    "WEX_FIELD",
    2,
    "WEX_FIELD selects the prime field F_p; supported values are 2, 3, 5 and 7.",
)

# Enumeration Budgets
ENUMERATION_BUDGET = _int_from_env(
    "WEX_BUDGET",
    DEFAULT_ENUMERATION_BUDGET,
    "WEX_BUDGET bounds p ** dim(B) for the general submodule sweep.",
)
NODE_BUDGET = _int_from_env(
    "WEX_NODE_BUDGET",
    DEFAULT_NODE_BUDGET,
    "WEX_NODE_BUDGET bounds the number of lattice nodes on the coordinate fast path.",
)

# Worker Pool
WORKERS = _int_from_env(
    "WEX_WORKERS",
    1,
    "WEX_WORKERS is the number of threads used for per-node verdicts.",
)

# Oracle Settings
COMPOSITION_DEPTH = _int_from_env(
    "WEX_COMPOSITION_DEPTH",
    DEFAULT_COMPOSITION_DEPTH,
    "WEX_COMPOSITION_DEPTH is 1 (pushouts of basis classes) or 2 (plus Baer sums).",
)
VERIFY_SAMPLES = _int_from_env(
    "WEX_VERIFY_SAMPLES",
    DEFAULT_VERIFY_SAMPLES,
    "WEX_VERIFY_SAMPLES is the number of sampled cases per randomized check.",
)
SEED = _int_from_env("WEX_SEED", 0, "WEX_SEED seeds every randomized check.")

# Data Storage
CATEGORIES_DIR = Path(__file__).resolve().parent.parent / "categories"

# Logging Configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("WEX_LOG_FILE")


def validate_settings():
    """
    Reject a bad WEX_* environment before any command runs

    Covers the default field, both enumeration budgets, the worker count,
    the composition depth, the verify sample count and the seed. The CLI
    callback turns the error into exit code 2.

    Raises:
        ValueError: Naming the first offending WEX_* variable
    """
    if DEFAULT_FIELD not in SUPPORTED_PRIMES:
        raise ValueError(f"WEX_FIELD must be one of {SUPPORTED_PRIMES}")

    if ENUMERATION_BUDGET < 1:
        raise ValueError("WEX_BUDGET must be at least 1")

    if NODE_BUDGET < 1:
        raise ValueError("WEX_NODE_BUDGET must be at least 1")

    if WORKERS < 1:
        raise ValueError("WEX_WORKERS must be at least 1")

    if COMPOSITION_DEPTH not in (1, 2):
        raise ValueError("WEX_COMPOSITION_DEPTH must be 1 or 2")

    if VERIFY_SAMPLES < 1:
        raise ValueError("WEX_VERIFY_SAMPLES must be at least 1")

    if SEED < 0:
        raise ValueError("WEX_SEED must be non-negative")

    logger.info("✅ Configuration validation completed successfully")
