"""
Run configuration for the grtlab command line.

`RunConfig` collects every knob a run can be given.  Values are read,
in increasing priority, from the defaults below, a ``.env`` file in the
working directory, ``GRTLAB_*`` environment variables and finally the
command-line flags passed to :meth:`RunConfig.from_cli`.
"""
from typing import Any, Dict, Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class RunConfig(BaseSettings):
    """Settings shared by all subcommands."""

    model_config = SettingsConfigDict(env_prefix="GRTLAB_", env_file=".env", env_file_encoding="utf-8",
                                      extra="ignore", frozen=True)

    subcommand: str = ""
    max_degree: int = Field(default=5, ge=1)
    group: Optional[str] = None
    target: Optional[str] = None
    torsor: Optional[str] = None
    pairing: Optional[str] = None
    arity: Optional[int] = Field(default=None, ge=1)
    prime: int = 7
    samples: int = Field(default=10_000, ge=1)
    seed: int = 0
    tolerance: float = Field(default=1e-10, gt=0)
    margin: float = Field(default=1e-3, ge=0)
    format: Optional[Literal["text", "json"]] = None
    jobs: int = 1
    log_dir: Optional[str] = None

    @field_validator("jobs")
    @classmethod
    def _jobs_nonzero(cls, v: int) -> int:
        if v == 0:
            raise ValueError("jobs must be non-zero (use -1 for all cores)")
        return v

    @classmethod
    def from_cli(cls, **overrides: Any) -> "RunConfig":
        """Build a config where explicitly given flags win over env and .env."""
        given: Dict[str, Any] = {k: v for k, v in overrides.items() if v is not None and k in cls.model_fields}
        return cls(**given)
