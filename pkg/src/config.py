"""Environment-driven defaults."""
import os

from src.types import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE_K,
    DEFAULT_WORKERS,
)


def _env_int(name: str, fallback: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return fallback
    return int(raw)


def default_seed() -> int:
    return _env_int("KVBENCH_SEED", DEFAULT_SEED)


def default_samples() -> int:
    return _env_int("KVBENCH_SAMPLES", DEFAULT_SAMPLES)


def default_workers() -> int:
    return _env_int("KVBENCH_WORKERS", DEFAULT_WORKERS)


def default_tolerance_k() -> int:
    return _env_int("KVBENCH_TOLERANCE_K", DEFAULT_TOLERANCE_K)


def log_level() -> str:
    return os.getenv("KVBENCH_LOG_LEVEL", "WARNING").upper()
