"""Runtime settings from the environment and YAML experiment files."""

from __future__ import annotations

import os
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Literal

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("config")

BackendName = Literal["sparse", "dense"]
GeneratorKind = Literal["monotone", "lower_star"]


class Settings(BaseModel):
    """Process-wide knobs read from ``HARMONIA_*`` environment variables."""

    model_config = ConfigDict(frozen=True)

    threads: int | None = Field(default=None, ge=1)
    backend: BackendName = "sparse"
    log_level: str = "INFO"

    @property
    def n_jobs(self) -> int:
        """joblib ``n_jobs`` value; ``-1`` uses every core."""

        return self.threads if self.threads is not None else -1


class StabilityConfig(BaseModel):
    """Defaults for a batch of stability trials."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    trials: int = Field(default=100, ge=1)
    eps: Fraction = Fraction(1, 5)
    dimension: int = Field(default=1, ge=0)
    kind: GeneratorKind = "monotone"
    max_vertices: int = Field(default=8, ge=1, le=12)
    max_dim: int = Field(default=2, ge=0)
    p_include: float = Field(default=0.5, ge=0.0, le=1.0)
    seed: int = 0

    @field_validator("eps", mode="before")
    @classmethod
    def _parse_eps(cls, value: object) -> Fraction:
        if isinstance(value, float):
            value = str(value)
        try:
            eps = Fraction(value)  # type: ignore[arg-type]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"eps is not a rational literal: {value!r}") from exc
        if eps < 0:
            raise ValueError("eps must be non-negative")
        return eps


def load_settings(env_file: Path | None = Path(".env")) -> Settings:
    """Build :class:`Settings` from the environment, loading ``env_file`` first if it exists."""

    if env_file is not None and env_file.exists():
        load_dotenv(dotenv_path=env_file)

    raw_threads = os.getenv("HARMONIA_THREADS")
    values: dict[str, object] = {}
    if raw_threads not in (None, ""):
        values["threads"] = raw_threads
    backend = os.getenv("HARMONIA_BACKEND")
    if backend:
        values["backend"] = backend.strip().lower()
    log_level = os.getenv("HARMONIA_LOG_LEVEL")
    if log_level:
        values["log_level"] = log_level.strip().upper()

    try:
        return Settings.model_validate(values)
    except ValidationError as exc:
        raise ValueError(f"Ungültige HARMONIA_* Einstellungen: {exc}") from exc


def load_stability_config(path: str | Path | None) -> StabilityConfig:
    """Read a YAML experiment file; a missing ``path`` yields the defaults."""

    if not path:
        return StabilityConfig()

    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Konfigurationsdatei nicht gefunden: {config_path}")

    data = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    if data is None:
        return StabilityConfig()
    if not isinstance(data, Mapping):
        raise ValueError("Stability YAML muss ein Dictionary enthalten")

    try:
        config = StabilityConfig.model_validate({str(key): value for key, value in data.items()})
    except ValidationError as exc:
        raise ValueError(f"Ungültige Stability-Konfiguration: {exc}") from exc
    LOGGER.debug("Stability-Konfiguration geladen: %s", config_path)
    return config
