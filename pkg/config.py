# config.py
"""Project configuration.

Settings come from (highest priority first):

1) Environment variables prefixed with RSPEC_ (e.g. RSPEC_WORKERS=8)
2) A .env file in the working directory (see .env.example)
3) The defaults below

Command-line flags in main.py override these per run. Modules read the
module-level constants (config.WORKERS, config.CHECKPOINT_EVERY, ...) at call
time so tests can monkeypatch them.
"""

from __future__ import annotations

import os

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def _default_cache_dir() -> str:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return os.path.join(base, "rvalue-spectra")


class Settings(BaseSettings):
    """Main application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="RSPEC_",
        extra="ignore",
    )

    # --- Field selection ---
    # Irreducible polynomial per n, as an int (bit i = coefficient of x^i).
    # Example: {"5": 41} selects x^5 + x^3 + 1 instead of the default x^5 + x^2 + 1.
    poly_overrides: dict[int, int] = Field(default_factory=dict)

    # --- Storage ---
    # Bootstrap pools and checkpoints land here unless a path is given on the command line.
    cache_dir: str = Field(default_factory=_default_cache_dir)

    # --- Sweeps ---
    # 0 means "ask system_monitor.default_worker_count()".
    workers: int = Field(default=0)
    # 0 means "derive 2^t shards from the worker count".
    shards: int = Field(default=0)
    checkpoint_every: int = Field(
        default=2**24,
        description="Gray-code steps between checkpoint writes (0 disables periodic writes).",
    )
    progress_every: int = Field(
        default=2**22,
        description="Gray-code steps between heartbeat log lines (0 disables them).",
    )

    # --- Identity sweeps ---
    verify_trials: int = Field(default=10_000)
    verify_seed: int = Field(default=7)

    # --- Constructive generator search bounds ---
    # How many 5-subsets of the upper coset the size-7 pattern search may examine.
    pattern_search_limit: int = Field(default=200_000)
    # Largest n whose lifted pool is closed under single-element moves (0 disables).
    closure_max_n: int = Field(default=6)

    # --- Console ---
    log_color: bool = Field(default=True)
    verbose: bool = Field(
        default=False,
        description="If True, [DEBUG] lines are printed. If False, they are dropped.",
    )

    @field_validator("workers", "shards", "checkpoint_every", "progress_every", "closure_max_n")
    @classmethod
    def _non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must be >= 0")
        return v


settings = Settings()

# --- Export convenience constants (modules read these by name) ---
POLY_OVERRIDES = settings.poly_overrides
CACHE_DIR = settings.cache_dir

WORKERS = settings.workers
SHARDS = settings.shards
CHECKPOINT_EVERY = settings.checkpoint_every
PROGRESS_EVERY = settings.progress_every

VERIFY_TRIALS = settings.verify_trials
VERIFY_SEED = settings.verify_seed

PATTERN_SEARCH_LIMIT = settings.pattern_search_limit
CLOSURE_MAX_N = settings.closure_max_n

LOG_COLOR = settings.log_color
VERBOSE = settings.verbose
