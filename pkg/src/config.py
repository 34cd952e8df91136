"""Centralized configuration for the Hodge-join toolkit.

Environment variables and paths are defined here. Use get_config() to access
configuration values - it loads dotenv once and caches the result.
"""

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv

MONOMIAL_ORDERS = ("grevlex", "lex")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _parse_int_env(name: str, default: int, minimum: int | None = None) -> int:
    """Parse an integer environment variable with fallback to default.

    Args:
        name: Environment variable name.
        default: Default value if not set, invalid or below ``minimum``.
        minimum: Smallest accepted value.

    Returns:
        Parsed integer value or default.
    """
    value = os.getenv(name)
    if value is None:
        return default
    try:
        parsed = int(value)
    except ValueError:
        return default
    if minimum is not None and parsed < minimum:
        return default
    return parsed


def _validate_order(order: str, default: str = "grevlex") -> str:
    """Validate a monomial order name.

    Args:
        order: Order name to validate.
        default: Order used if the name is unknown.

    Returns:
        Valid monomial order name.
    """
    order = order.strip().lower()
    if order in MONOMIAL_ORDERS:
        return order
    print(f"Warning: Unknown monomial order '{order}', using {default}")
    return default


def _validate_log_level(level: str, default: str = "WARNING") -> str:
    level = level.strip().upper()
    return level if level in LOG_LEVELS else default


def _get_project_root() -> Path:
    """Find project root by locating pyproject.toml."""
    current = Path(__file__).resolve().parent
    while current != current.parent:
        if (current / "pyproject.toml").exists():
            return current
        current = current.parent
    # Fallback to parent of src/
    return Path(__file__).resolve().parent.parent


@dataclass(frozen=True)
class Config:
    """Immutable configuration container."""

    # Paths (all anchored to project root)
    project_root: Path
    output_dir: Path
    problems_dir: Path

    # Computation
    monomial_order: str
    parallel_workers: int
    random_seed: int

    # Diagnostics
    log_level: str


@lru_cache(maxsize=1)
def get_config() -> Config:
    """Load and return configuration. Cached after first call."""
    project_root = _get_project_root()

    # Single load_dotenv call for entire application
    load_dotenv(project_root / ".env")

    output_env = os.getenv("HODGE_OUTPUT_DIR")
    output_dir = Path(output_env) if output_env else project_root / "reports"

    return Config(
        # Paths
        project_root=project_root,
        output_dir=output_dir,
        problems_dir=project_root / "problems",

        # Computation
        monomial_order=_validate_order(os.getenv("HODGE_MONOMIAL_ORDER", "grevlex")),
        parallel_workers=_parse_int_env("HODGE_WORKERS", 4, minimum=1),
        random_seed=_parse_int_env("HODGE_SEED", 20240601),

        # Diagnostics
        log_level=_validate_log_level(os.getenv("HODGE_LOG_LEVEL", "WARNING")),
    )
