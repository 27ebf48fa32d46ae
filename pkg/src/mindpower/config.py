"""Scoring configuration: reward weights, group-optimization constants,
metric switches, and the key-value config-file loader.

Config files are plain text, one ``key = value`` per line, ``#`` comments.
Verb aliases use a dotted prefix::

    alpha_atomic = 0.2
    alpha_local = 0.3
    alpha_global = 0.5
    epsilon = 0.2
    beta = 0.04
    std_floor = 1e-6
    rouge_component = f1          # or: recall
    layer_mode = per_layer        # or: concatenated
    extractor = dsl               # or: remote
    max_inflight = 32
    alias.pick_up = pick
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .atoms import DEFAULT_ALIASES
from .errors import SchemaError
from .rouge import COMPONENT_F1, COMPONENT_RECALL

LAYER_MODE_PER_LAYER = "per_layer"
LAYER_MODE_CONCATENATED = "concatenated"


@dataclass(frozen=True)
class RewardWeights:
    """Weights for the atomic/local/global reward components."""

    alpha_atomic: float = 0.2
    alpha_local: float = 0.3
    alpha_global: float = 0.5

    def __post_init__(self) -> None:
        for name in ("alpha_atomic", "alpha_local", "alpha_global"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative")

    @property
    def total(self) -> float:
        return self.alpha_atomic + self.alpha_local + self.alpha_global


@dataclass(frozen=True)
class GrpoConfig:
    """Clip range, KL coefficient, and the zero-variance guard."""

    epsilon: float = 0.2
    beta: float = 0.04
    std_floor: float = 1e-6

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.std_floor <= 0:
            raise ValueError("std_floor must be positive")


@dataclass(frozen=True)
class EngineConfig:
    """Everything the scoring pipeline needs to know."""

    weights: RewardWeights = field(default_factory=RewardWeights)
    grpo: GrpoConfig = field(default_factory=GrpoConfig)
    rouge_component: str = COMPONENT_F1
    layer_mode: str = LAYER_MODE_PER_LAYER
    extractor: str = "dsl"
    max_inflight: int = 32
    aliases: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_ALIASES))

    def __post_init__(self) -> None:
        if self.rouge_component not in (COMPONENT_F1, COMPONENT_RECALL):
            raise ValueError(f"unknown rouge_component {self.rouge_component!r}")
        if self.layer_mode not in (LAYER_MODE_PER_LAYER, LAYER_MODE_CONCATENATED):
            raise ValueError(f"unknown layer_mode {self.layer_mode!r}")
        if self.extractor not in ("dsl", "remote"):
            raise ValueError(f"unknown extractor {self.extractor!r}")
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be >= 1")


def load_config(path: str | Path | None) -> EngineConfig:
    """Load an EngineConfig, falling back to defaults when path is None."""
    if path is None:
        return EngineConfig()

    weights = {}
    grpo = {}
    top = {}
    aliases = dict(DEFAULT_ALIASES)
    known_weights = {"alpha_atomic", "alpha_local", "alpha_global"}
    known_grpo = {"epsilon", "beta", "std_floor"}
    known_top = {"rouge_component", "layer_mode", "extractor", "max_inflight"}

    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SchemaError(lineno, line, "expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        try:
            if key in known_weights:
                weights[key] = float(value)
            elif key in known_grpo:
                grpo[key] = float(value)
            elif key == "max_inflight":
                top[key] = int(value)
            elif key in known_top:
                top[key] = value
            elif key.startswith("alias."):
                aliases[key[len("alias."):].strip().lower()] = value.lower()
            else:
                raise SchemaError(lineno, key, "unknown config key")
        except ValueError as exc:
            raise SchemaError(lineno, key, str(exc)) from exc

    try:
        return EngineConfig(
            weights=RewardWeights(**weights),
            grpo=GrpoConfig(**grpo),
            aliases=aliases,
            **top,
        )
    except ValueError as exc:
        raise SchemaError(0, str(path), str(exc)) from exc


def with_component(cfg: EngineConfig, mode: str) -> EngineConfig:
    """Convenience for flipping the f1/recall switch programmatically."""
    return replace(cfg, rouge_component=mode)
