import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from .errors import ConfigurationError


load_dotenv()


class Settings(BaseModel):
    """Runtime settings read from the environment (or a .env file)."""

    max_nodes: int = Field(2_000_000, description="Node-visit budget for every brute-force enumeration")
    primes: list[int] = Field(default_factory=lambda: [2, 3], description="Primes used for verification counts")
    seed: int = Field(20240601, description="Seed for randomized checks")
    workers: int = Field(1, description="Parallel work units for submodule enumeration")
    log_level: str = Field("WARNING", description="Logging level for the command line")


_settings: Optional[Settings] = None


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value <= 0:
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return value


def _primes_env(name: str, default: list[int]) -> list[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return list(default)
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"{name} must be a comma separated list of primes, got {raw!r}")


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings(
            max_nodes=_int_env("QP_MAX_NODES", 2_000_000),
            primes=_primes_env("QP_PRIMES", [2, 3]),
            seed=_int_env("QP_SEED", 20240601),
            workers=_int_env("QP_WORKERS", 1),
            log_level=os.getenv("QP_LOG_LEVEL", "WARNING").upper(),
        )
    return _settings


def reset_settings() -> None:
    """Forget cached settings so the next get_settings() rereads the environment."""
    global _settings
    _settings = None
