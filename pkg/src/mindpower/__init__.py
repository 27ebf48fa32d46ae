"""Scoring stack for six-layer robot-centric reasoning traces.

Parse tagged traces, canonicalize atomic-action sequences, and compute the
mind/format rewards, group-relative advantages, the clipped surrogate
objective, and the benchmark metrics (success rate, action correctness,
text similarity), with a batch CLI and a streaming reward service on top.
"""

from .atoms import (
    DEFAULT_ALIASES,
    MENTAL_PREDICATES,
    PHYSICAL_VERBS,
    ROBOT,
    AtomicAction,
    AtomicSequence,
    MentalPredicate,
    Perspective,
    Term,
    atoms_equal,
    canonicalize,
    human,
    parse_atomic,
    render_sequence,
    validate_vocabulary,
)
from .config import EngineConfig, GrpoConfig, RewardWeights, load_config
from .dataset import (
    DatasetExample,
    ModelOutput,
    TaskType,
    load_dataset,
    load_outputs,
    make_toy_dataset,
    write_dataset,
    write_outputs,
)
from .errors import (
    AtomParseError,
    DslSyntaxError,
    DuplicateIdError,
    DuplicateLayerError,
    EmptyGroupError,
    EmptyReferenceError,
    InvalidNgramSize,
    JudgeMalformedReplyError,
    JudgeUnavailableError,
    LayerMismatchError,
    MindPowerError,
    SchemaError,
    UnknownExampleError,
)
from .extract import DslExtractor, Extractor, RemoteLlmExtractor
from .hierarchy import (
    LAYER_ORDER,
    LayerKind,
    ReasoningTrace,
    TraceLayer,
    format_reward,
    parse_trace,
    render_tagged,
)
from .judge import HttpJudgeClient, judge_bpc, judge_from_env
from .metrics import (
    LayerScores,
    Report,
    SimilarityPlug,
    TokenOverlapSimilarity,
    action_correctness,
    aggregate,
    default_similarity,
    sr_blend,
    success_rate,
)
from .pipeline import evaluate_output, parse_rollout, score_rollout
from .reward import (
    GroupSample,
    RewardBreakdown,
    compose_reward,
    group_advantages,
    grpo_objective,
    layer_components,
    mind_reward,
    total_reward,
)
from .rouge import RougeScore, component, rouge_l, rouge_n
from .service import RewardService, serve_stdio, serve_tcp

__version__ = "0.1.0"

__all__ = [
    "AtomParseError",
    "AtomicAction",
    "AtomicSequence",
    "DEFAULT_ALIASES",
    "DatasetExample",
    "DslExtractor",
    "DslSyntaxError",
    "DuplicateIdError",
    "DuplicateLayerError",
    "EmptyGroupError",
    "EmptyReferenceError",
    "EngineConfig",
    "Extractor",
    "GroupSample",
    "GrpoConfig",
    "HttpJudgeClient",
    "InvalidNgramSize",
    "JudgeMalformedReplyError",
    "JudgeUnavailableError",
    "LAYER_ORDER",
    "LayerKind",
    "LayerMismatchError",
    "LayerScores",
    "MENTAL_PREDICATES",
    "MentalPredicate",
    "MindPowerError",
    "ModelOutput",
    "PHYSICAL_VERBS",
    "Perspective",
    "ROBOT",
    "ReasoningTrace",
    "Report",
    "RewardBreakdown",
    "RewardService",
    "RewardWeights",
    "RougeScore",
    "SchemaError",
    "SimilarityPlug",
    "TaskType",
    "Term",
    "TokenOverlapSimilarity",
    "TraceLayer",
    "UnknownExampleError",
    "action_correctness",
    "aggregate",
    "atoms_equal",
    "canonicalize",
    "component",
    "compose_reward",
    "default_similarity",
    "evaluate_output",
    "format_reward",
    "group_advantages",
    "grpo_objective",
    "human",
    "judge_bpc",
    "judge_from_env",
    "layer_components",
    "load_config",
    "load_dataset",
    "load_outputs",
    "make_toy_dataset",
    "mind_reward",
    "parse_atomic",
    "parse_rollout",
    "parse_trace",
    "render_sequence",
    "render_tagged",
    "rouge_l",
    "rouge_n",
    "score_rollout",
    "serve_stdio",
    "serve_tcp",
    "sr_blend",
    "success_rate",
    "total_reward",
    "validate_vocabulary",
    "write_dataset",
    "write_outputs",
]
