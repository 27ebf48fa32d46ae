"""Reward composition and group-relative optimization math.

The per-sample reward has two parts. The mind reward grades the atomic
content of every annotated layer with three ROUGE components::

    r_mind = alpha_atomic * R_atomic   (ROUGE-1, atomic accuracy)
           + alpha_local  * R_local    (ROUGE-2, local consistency)
           + alpha_global * R_global   (ROUGE-L, global consistency)

and the total adds the binary format reward: ``total = r_mind + r_format``.
Group advantages standardize rewards within one sampled group, and
grpo_objective evaluates the clipped surrogate with a KL penalty as a pure
function of per-sample (reward, ratio, kl) triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .atoms import AtomicSequence, atoms_equal
from .config import LAYER_MODE_CONCATENATED, EngineConfig, GrpoConfig, RewardWeights
from .errors import EmptyGroupError, EmptyReferenceError
from .hierarchy import LAYER_ORDER, LayerKind
from .rouge import component, rouge_l, rouge_n

#: Per-layer triple of (rouge-1, rouge-2, rouge-L) scalars.
LayerComponents = tuple[float, float, float]


@dataclass
class RewardBreakdown:
    """Per-sample reward decomposition.

    r_format and total stay None until total_reward() fills them in.
    warnings carries scoring diagnostics (duplicate tags, unparseable
    layers) so broken rollouts surface in training logs instead of
    silently scoring zero.
    """

    per_layer: dict[LayerKind, LayerComponents] = field(default_factory=dict)
    r_atomic: float = 0.0
    r_local: float = 0.0
    r_global: float = 0.0
    r_mind: float = 0.0
    r_format: int | None = None
    total: float | None = None
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class GroupSample:
    """One rollout inside a sampled group.

    ratio is the new/old policy probability ratio for the rollout; kl_ref is
    a per-sample scalar estimate of the reference-policy KL contribution
    (token- vs sequence-level estimation is the caller's business).
    """

    reward: float
    ratio: float = 1.0
    kl_ref: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.reward):
            raise ValueError("reward must be finite")
        if not math.isfinite(self.ratio) or self.ratio <= 0:
            raise ValueError("ratio must be finite and positive")
        if not math.isfinite(self.kl_ref):
            raise ValueError("kl_ref must be finite")


def layer_components(
    gen: AtomicSequence | None,
    ref: AtomicSequence,
    rouge_mode: str,
) -> LayerComponents:
    """The (r1, r2, rl) triple for one layer.

    A layer the generator never produced scores (0, 0, 0). A reference with
    a single item has no adjacent pair, so r2 falls back to r1 there.
    """
    if gen is None:
        return (0.0, 0.0, 0.0)
    r1 = component(rouge_n(gen.items, ref.items, 1, atoms_equal), rouge_mode)
    if len(ref.items) < 2:
        r2 = r1
    else:
        r2 = component(rouge_n(gen.items, ref.items, 2, atoms_equal), rouge_mode)
    rl = component(rouge_l(gen.items, ref.items, atoms_equal), rouge_mode)
    return (r1, r2, rl)


def compose_reward(
    per_layer: Mapping[LayerKind, LayerComponents],
    weights: RewardWeights = RewardWeights(),
) -> RewardBreakdown:
    """Average component triples over layers and apply the weighted sum."""
    if not per_layer:
        raise EmptyReferenceError("no layers to compose a reward from")
    ordered = {k: per_layer[k] for k in LAYER_ORDER if k in per_layer}
    n = len(ordered)
    r_atomic = sum(c[0] for c in ordered.values()) / n
    r_local = sum(c[1] for c in ordered.values()) / n
    r_global = sum(c[2] for c in ordered.values()) / n
    r_mind = _weighted(r_atomic, r_local, r_global, weights)
    return RewardBreakdown(
        per_layer=ordered,
        r_atomic=r_atomic,
        r_local=r_local,
        r_global=r_global,
        r_mind=r_mind,
    )


def _weighted(r1: float, r2: float, rl: float, weights: RewardWeights) -> float:
    value = (
        weights.alpha_atomic * r1
        + weights.alpha_local * r2
        + weights.alpha_global * rl
    )
    # components live in [0,1]; keep rounding dust from breaching the bound
    return min(max(value, 0.0), weights.total)


def _concatenate(
    sequences: Mapping[LayerKind, AtomicSequence], layers: Sequence[LayerKind]
) -> list:
    items: list = []
    for layer in layers:
        if layer in sequences:
            items.extend(sequences[layer].items)
    return items


def mind_reward(
    gen: Mapping[LayerKind, AtomicSequence],
    ref: Mapping[LayerKind, AtomicSequence],
    weights: RewardWeights = RewardWeights(),
    *,
    rouge_mode: str = "f1",
    layer_mode: str = "per_layer",
) -> RewardBreakdown:
    """Score generated layer sequences against the annotated reference.

    Only layers present in the reference are scored; each contributes
    equally to the component means, and a layer missing from the generation
    scores (0, 0, 0). The concatenated layer_mode instead joins the
    reference layers (hierarchy order) into one sequence before scoring,
    for ablation.
    """
    if not ref:
        raise EmptyReferenceError("reference annotation has no layers")

    ref_layers = [k for k in LAYER_ORDER if k in ref]

    if layer_mode == LAYER_MODE_CONCATENATED:
        ref_items = _concatenate(ref, ref_layers)
        gen_items = _concatenate(gen, ref_layers)
        r1 = component(rouge_n(gen_items, ref_items, 1, atoms_equal), rouge_mode)
        r2 = (
            r1
            if len(ref_items) < 2
            else component(rouge_n(gen_items, ref_items, 2, atoms_equal), rouge_mode)
        )
        rl = component(rouge_l(gen_items, ref_items, atoms_equal), rouge_mode)
        return RewardBreakdown(
            per_layer={},
            r_atomic=r1,
            r_local=r2,
            r_global=rl,
            r_mind=_weighted(r1, r2, rl, weights),
        )

    per_layer = {
        layer: layer_components(gen.get(layer), ref[layer], rouge_mode)
        for layer in ref_layers
    }
    return compose_reward(per_layer, weights)


def total_reward(breakdown: RewardBreakdown, fmt: int) -> float:
    """Add the binary format reward and store the final total."""
    breakdown.r_format = int(fmt)
    breakdown.total = breakdown.r_mind + breakdown.r_format
    return breakdown.total


def group_advantages(
    rewards: Sequence[float], cfg: GrpoConfig = GrpoConfig()
) -> list[float]:
    """Standardize rewards within one group: (r - mean) / max(std, floor).

    Uses the population standard deviation (divide by G); a zero-variance
    group yields all-zero advantages via the std floor.
    """
    if len(rewards) == 0:
        raise EmptyGroupError("cannot normalize an empty group")
    arr = np.asarray(rewards, dtype=float)
    mean = arr.mean()
    std = arr.std()  # population (ddof=0)
    denom = max(float(std), cfg.std_floor)
    return [float(a) for a in (arr - mean) / denom]


def grpo_objective(
    samples: Sequence[GroupSample], cfg: GrpoConfig = GrpoConfig()
) -> float:
    """Evaluate the clipped group surrogate objective minus the KL penalty.

    (1/G) * sum_i min(ratio_i * A_i, clip(ratio_i, 1-eps, 1+eps) * A_i)
    - beta * (1/G) * sum_i kl_ref_i, with advantages computed from the
    samples' rewards via group_advantages. Pure evaluation, no optimization.
    """
    if len(samples) == 0:
        raise EmptyGroupError("cannot evaluate an empty group")
    advantages = group_advantages([s.reward for s in samples], cfg)
    lo, hi = 1.0 - cfg.epsilon, 1.0 + cfg.epsilon
    surrogate = 0.0
    kl = 0.0
    for sample, adv in zip(samples, advantages):
        clipped = min(max(sample.ratio, lo), hi)
        surrogate += min(sample.ratio * adv, clipped * adv)
        kl += sample.kl_ref
    g = len(samples)
    return surrogate / g - cfg.beta * (kl / g)


def engine_mind_reward(
    gen: Mapping[LayerKind, AtomicSequence],
    ref: Mapping[LayerKind, AtomicSequence],
    cfg: EngineConfig,
) -> RewardBreakdown:
    """mind_reward with all switches taken from an EngineConfig."""
    return mind_reward(
        gen,
        ref,
        cfg.weights,
        rouge_mode=cfg.rouge_component,
        layer_mode=cfg.layer_mode,
    )
