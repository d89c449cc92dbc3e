"""Pipeline configuration: one JSON document, CLI flags override file values."""

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .exceptions import ConfigError

CONFIG_ENV_VAR = "TRIAGE_CONFIG"


@dataclass
class PipelineConfig:
    """All pipeline tunables with their documented defaults."""

    k: int = 20
    similarity_threshold: float = 8.0
    min_gap: int = 5
    thumb_width: int = 64
    thumb_height: int = 32
    max_neighbors: int = 4
    max_distance: Optional[float] = None
    downscale: int = 1
    min_size_px: int = 10
    max_size_px: int = 30
    units: str = "reconstruction"
    frames_dir: Optional[str] = None
    reconstruction: Optional[str] = None
    output_dir: Optional[str] = None
    lenient: bool = False

    def validate(self):
        if self.k < 0:
            raise ConfigError(f"k must be >= 0, got {self.k}")
        if not 0.0 <= self.similarity_threshold <= 255.0:
            raise ConfigError(f"similarity_threshold must be in [0, 255], got {self.similarity_threshold}")
        if self.min_gap < 1:
            raise ConfigError(f"min_gap must be >= 1, got {self.min_gap}")
        if self.thumb_width < 8 or self.thumb_height < 4:
            raise ConfigError(f"thumbnails must be at least 8x4, got {self.thumb_width}x{self.thumb_height}")
        if self.max_neighbors < 1:
            raise ConfigError(f"max_neighbors must be >= 1, got {self.max_neighbors}")
        if self.max_distance is not None and self.max_distance <= 0:
            raise ConfigError(f"max_distance must be positive, got {self.max_distance}")
        if self.downscale < 1 or int(self.downscale) != self.downscale:
            raise ConfigError(f"downscale must be an integer >= 1, got {self.downscale}")
        if not 1 <= self.min_size_px <= self.max_size_px:
            raise ConfigError(
                f"hotspot sizes must satisfy 1 <= min <= max, got {self.min_size_px}..{self.max_size_px}"
            )
        if self.units not in ("meters", "reconstruction"):
            raise ConfigError(f"units must be 'meters' or 'reconstruction', got {self.units!r}")
        return self


_FIELD_NAMES = {f.name for f in dataclasses.fields(PipelineConfig)}


def load_config(path):
    """Load a config file; unknown keys are rejected."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg} at offset {exc.pos}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    unknown = sorted(set(raw) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
    try:
        return PipelineConfig(**raw).validate()
    except TypeError as exc:
        raise ConfigError(f"bad config value in {path}: {exc}") from exc


def resolve_config(explicit_path=None):
    """Config from an explicit path, else $TRIAGE_CONFIG, else defaults."""
    path = explicit_path or os.environ.get(CONFIG_ENV_VAR)
    if path:
        return load_config(path)
    return PipelineConfig()


def apply_overrides(config, **overrides):
    """Copy of config with every non-None override applied, revalidated."""
    updates = {name: value for name, value in overrides.items() if value is not None}
    return dataclasses.replace(config, **updates).validate()
