"""Shared scoring pipeline: raw trace text in, rewards or metrics out.

Scoring must succeed on arbitrary model output, so every recoverable
defect (duplicate tags, layer text that fails to parse as atoms) turns
into a zero contribution plus a diagnostic warning instead of an error.
Reference annotations, by contrast, come from a validated dataset and are
trusted to parse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .atoms import AtomicSequence
from .config import EngineConfig
from .dataset import DatasetExample
from .errors import DslSyntaxError, DuplicateLayerError, LayerMismatchError
from .extract import Extractor
from .hierarchy import LayerKind, ReasoningTrace, format_reward, parse_trace
from .judge import JudgeClient, judge_bpc
from .metrics import (
    TEXT_LAYERS,
    LayerScores,
    SimilarityPlug,
    action_correctness,
    success_rate,
)
from .reward import RewardBreakdown, engine_mind_reward, total_reward


@dataclass
class ParsedRollout:
    trace: ReasoningTrace
    fmt: int
    atoms: dict[LayerKind, AtomicSequence] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def parse_rollout(raw: str, extractor: Extractor) -> ParsedRollout:
    """Parse a rollout's trace and extract per-layer atoms, never raising."""
    warnings: list[str] = []
    try:
        trace = parse_trace(raw)
    except DuplicateLayerError as exc:
        warnings.append(f"{exc}; trace scored as empty")
        return ParsedRollout(
            trace=ReasoningTrace(layers=(), source=raw), fmt=0, warnings=warnings
        )

    atoms: dict[LayerKind, AtomicSequence] = {}
    for layer in trace.layers:
        try:
            atoms[layer.kind] = extractor.extract(layer.text, layer.kind)
        except (DslSyntaxError, LayerMismatchError) as exc:
            warnings.append(f"<{layer.kind.name}> atoms unusable ({exc}); scored 0")
    return ParsedRollout(
        trace=trace, fmt=format_reward(trace), atoms=atoms, warnings=warnings
    )


def score_rollout(
    example: DatasetExample,
    raw: str,
    cfg: EngineConfig,
    extractor: Extractor,
) -> RewardBreakdown:
    """Total reward (mind + format) of one rollout against one example."""
    rollout = parse_rollout(raw, extractor)
    breakdown = engine_mind_reward(rollout.atoms, example.reference_atoms(), cfg)
    breakdown.warnings.extend(rollout.warnings)
    total_reward(breakdown, rollout.fmt)
    return breakdown


def evaluate_output(
    example: DatasetExample,
    raw: str,
    cfg: EngineConfig,
    extractor: Extractor,
    similarity_b: SimilarityPlug,
    similarity_s: SimilarityPlug,
    judge: JudgeClient | None = None,
) -> LayerScores:
    """Benchmark metrics of one rollout: per-layer similarity, SR, AC, BPC."""
    rollout = parse_rollout(raw, extractor)
    layer_texts = rollout.trace.layer_texts()

    similarities: dict[LayerKind, tuple[float, float]] = {}
    for layer in TEXT_LAYERS:
        gen_text = layer_texts.get(layer, "")
        ref_text = example.ground_truth[layer].text
        similarities[layer] = (
            similarity_b.score(gen_text, ref_text),
            similarity_s.score(gen_text, ref_text),
        )

    ref_action = example.reference_atoms()[LayerKind.Action]
    gen_action = rollout.atoms.get(
        LayerKind.Action, AtomicSequence(layer=LayerKind.Action)
    )
    sr = success_rate(gen_action, ref_action, rouge_mode=cfg.rouge_component)
    correctness = action_correctness(gen_action, ref_action)

    bpc = judge_bpc(rollout.trace, judge) if judge is not None else None

    return LayerScores(
        similarities=similarities,
        action_sr=sr,
        action_ac=correctness.exact,
        action_ac_ratio=correctness.coverage,
        bpc=bpc,
        example_id=example.id,
    )
