"""Experiment configuration: flat ``key = value`` files plus overrides.

A configuration file holds one assignment per line (``#`` comments and
blank lines ignored).  Values stack in precedence order: built-in
defaults, then the file, then explicit overrides (command-line flags).
Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classifier import TrainConfig


@dataclass(frozen=True)
class ExperimentSettings:
    """Training hyperparameters plus evaluation-side knobs."""

    train: TrainConfig
    t_max: int = 30
    threshold: float = 0.5
    beta: float = 1.0
    sweep_step: float = 0.01
    roc_step: float = 0.01

    def __post_init__(self) -> None:
        if self.t_max < 1:
            raise ValueError("t_max must be >= 1")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        for name in ("sweep_step", "roc_step"):
            step = getattr(self, name)
            if not 0.0 < step <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]")


def parse_hidden_sizes(text: str) -> tuple[int, ...]:
    """Comma-separated layer widths; empty means no hidden layers."""
    sizes = tuple(int(part) for part in text.split(",") if part.strip())
    if any(size < 1 for size in sizes):
        raise ValueError("hidden layer sizes must be >= 1")
    return sizes


def _parse_optional_float(text: str) -> float | None:
    if text.lower() in ("none", ""):
        return None
    return float(text)


_TRAIN_CASTERS = {
    "embedding_dim": int,
    "hidden_sizes": parse_hidden_sizes,
    "dropout_rate": float,
    "learning_rate": float,
    "batch_size": int,
    "patience": int,
    "min_delta": float,
    "negative_ratio": int,
    "loss_weight_kg": _parse_optional_float,
    "loss_weight_effect": float,
    "similarity_threshold": float,
    "ensemble_size": int,
    "max_epochs": int,
    "seed": int,
}

_SETTINGS_CASTERS = {
    "t_max": int,
    "threshold": float,
    "beta": float,
    "sweep_step": float,
    "roc_step": float,
}


def read_config(path: str) -> dict[str, str]:
    """Parse a flat assignment file into raw string values."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ValueError(
                    f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            values[key] = value.strip()
    return values


def build_settings(file_values: dict[str, str] | None = None,
                   overrides: dict[str, object] | None = None
                   ) -> ExperimentSettings:
    """Merge defaults, file values and overrides into settings.

    ``file_values`` holds raw strings (from :func:`read_config`);
    ``overrides`` holds already-typed values, usually from parsed
    command-line flags, and wins on conflicts.
    """
    train_kwargs: dict[str, object] = {}
    settings_kwargs: dict[str, object] = {}

    for key, raw in (file_values or {}).items():
        if key in _TRAIN_CASTERS:
            try:
                train_kwargs[key] = _TRAIN_CASTERS[key](raw)
            except ValueError as exc:
                raise ValueError(f"config key {key}: {exc}") from exc
        elif key in _SETTINGS_CASTERS:
            try:
                settings_kwargs[key] = _SETTINGS_CASTERS[key](raw)
            except ValueError as exc:
                raise ValueError(f"config key {key}: {exc}") from exc
        else:
            raise ValueError(f"unknown configuration key: {key}")

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in _TRAIN_CASTERS:
            train_kwargs[key] = value
        elif key in _SETTINGS_CASTERS:
            settings_kwargs[key] = value
        else:
            raise ValueError(f"unknown configuration key: {key}")

    return ExperimentSettings(train=TrainConfig(**train_kwargs),
                              **settings_kwargs)
