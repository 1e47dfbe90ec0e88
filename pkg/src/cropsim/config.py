"""Sampler configuration and the flat key=value config-file grammar."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Tuple

from .schedule import TrainPlan


class ConfigError(ValueError):
    """Invalid configuration value, key, or file."""


class InvalidAlphaError(ConfigError):
    """Beta concentration must be a finite value > 0."""


@dataclass(frozen=True)
class CropConfig:
    """Knobs shared by both crop samplers.

    scale_min/scale_max bound the crop area fraction, ratio_min/ratio_max
    bound the height/width aspect ratio, k is the localization threshold,
    alpha the symmetric beta concentration for center placement, and
    update_freq the fraction of training between localization refreshes.
    """

    scale_min: float = 0.2
    scale_max: float = 1.0
    ratio_min: float = 0.75
    ratio_max: float = 4.0 / 3.0
    k: float = 0.1
    alpha: float = 0.6
    update_freq: float = 0.2

    def __post_init__(self):
        if not (0.0 < self.scale_min <= self.scale_max <= 1.0):
            raise ConfigError(
                f"scale range must satisfy 0 < scale_min <= scale_max <= 1, "
                f"got [{self.scale_min}, {self.scale_max}]"
            )
        if not (0.0 < self.ratio_min <= self.ratio_max):
            raise ConfigError(
                f"ratio range must satisfy 0 < ratio_min <= ratio_max, "
                f"got [{self.ratio_min}, {self.ratio_max}]"
            )
        if not self.alpha > 0.0:
            raise InvalidAlphaError(f"alpha must be > 0, got {self.alpha}")
        if not (0.0 <= self.k <= 1.0):
            raise ConfigError(f"k must be in [0, 1], got {self.k}")
        if not (0.0 <= self.update_freq <= 0.5):
            raise ConfigError(f"update_freq must be in [0, 0.5], got {self.update_freq}")


# Every configurable field, in canonical file order.
CONFIG_KEYS = (
    "scale_min",
    "scale_max",
    "ratio_min",
    "ratio_max",
    "k",
    "alpha",
    "update_freq",
    "total_epochs",
)

DEFAULT_TOTAL_EPOCHS = 100


def parse_config_text(text: str) -> dict:
    """Parse 'key = value' lines into a raw mapping.

    '#' starts a comment, blank lines are skipped, unknown and duplicate
    keys are errors.
    """
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: missing value for {key!r}")
        raw[key] = value
    return raw


def _as_float(key: str, value) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} must be numeric, got {value!r}") from None
    return out


def config_from_mapping(mapping: Mapping) -> Tuple[CropConfig, TrainPlan]:
    """Build validated CropConfig and TrainPlan from a raw mapping.

    Values may be strings (as parsed from a file) or numbers (as passed by
    callers embedding the library). Unknown keys are rejected by name.
    """
    for key in mapping:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")

    crop_fields = {}
    for key in CONFIG_KEYS[:-1]:
        if key in mapping:
            crop_fields[key] = _as_float(key, mapping[key])
    cfg = CropConfig(**crop_fields)

    total = mapping.get("total_epochs", DEFAULT_TOTAL_EPOCHS)
    total_f = _as_float("total_epochs", total)
    if total_f != int(total_f):
        raise ConfigError(f"total_epochs must be an integer, got {total!r}")
    plan = TrainPlan(total_epochs=int(total_f), update_freq=cfg.update_freq)
    return cfg, plan


def load_config(path) -> Tuple[CropConfig, TrainPlan]:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_mapping(parse_config_text(fh.read()))
