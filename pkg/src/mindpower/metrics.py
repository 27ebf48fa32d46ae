"""Benchmark metrics: success rate, action correctness, text similarity,
and dataset-level aggregation into the standard report table.

The action-sequence metrics are::

    SR = (2*R1 + 3*R2 + 5*RL) / 10
    AC = floor(matched / |reference|)    (binary per example)

where matching is one-to-one, in-order greedy: scanning the generated
sequence left to right, each reference action is consumed (in reference
order) the first time an equal generated action is seen. AC is 1 exactly
when the reference is an in-order subsequence of the generation.

Text layers (Perception through Decision) are scored with two pluggable
similarity backends. The bundled default is a deterministic token-overlap
F1; it is NOT comparable to neural-similarity scores and exists so the
harness runs offline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Protocol, Sequence

from .atoms import AtomicSequence, atoms_equal
from .errors import EmptyReferenceError
from .hierarchy import LayerKind
from .rouge import component, rouge_l, rouge_n

#: Layers reported with similarity columns (the Action layer gets SR/AC).
TEXT_LAYERS: tuple[LayerKind, ...] = (
    LayerKind.Perception,
    LayerKind.Belief,
    LayerKind.Desire,
    LayerKind.Intention,
    LayerKind.Decision,
)


class SimilarityPlug(Protocol):
    name: str

    def score(self, gen_text: str, ref_text: str) -> float: ...


_WORD_RE = re.compile(r"\w+")


def default_similarity(gen_text: str, ref_text: str) -> float:
    """Clipped unigram-overlap F1 over lowercased word tokens."""
    gen_tokens = _WORD_RE.findall(gen_text.lower())
    ref_tokens = _WORD_RE.findall(ref_text.lower())
    if not gen_tokens and not ref_tokens:
        return 1.0
    return rouge_n(gen_tokens, ref_tokens, 1).f1


class TokenOverlapSimilarity:
    """The bundled deterministic similarity plug."""

    name = "token-f1"

    def score(self, gen_text: str, ref_text: str) -> float:
        return default_similarity(gen_text, ref_text)


def sr_blend(r1: float, r2: float, rl: float) -> float:
    """The fixed 2/3/5 blend of ROUGE components behind the SR metric."""
    return (2.0 * r1 + 3.0 * r2 + 5.0 * rl) / 10.0


def success_rate(
    gen: AtomicSequence,
    ref: AtomicSequence,
    *,
    rouge_mode: str = "f1",
) -> float:
    """Weighted ROUGE blend over action sequences."""
    if not ref.items:
        raise EmptyReferenceError("reference action sequence is empty")
    r1 = component(rouge_n(gen.items, ref.items, 1, atoms_equal), rouge_mode)
    r2 = component(rouge_n(gen.items, ref.items, 2, atoms_equal), rouge_mode)
    rl = component(rouge_l(gen.items, ref.items, atoms_equal), rouge_mode)
    return sr_blend(r1, r2, rl)


class CorrectnessResult(NamedTuple):
    exact: int        # the floored, binary metric
    coverage: float   # matched / |ref|, kept as a diagnostic


def action_correctness(gen: AtomicSequence, ref: AtomicSequence) -> CorrectnessResult:
    """Floored ground-truth coverage under in-order greedy matching."""
    if not ref.items:
        raise EmptyReferenceError("reference action sequence is empty")
    matched = 0
    for item in gen.items:
        if matched < len(ref.items) and atoms_equal(item, ref.items[matched]):
            matched += 1
    coverage = matched / len(ref.items)
    # floor(m/|ref|) with m <= |ref| is 1 only on full coverage
    return CorrectnessResult(exact=1 if matched == len(ref.items) else 0,
                             coverage=coverage)


@dataclass
class LayerScores:
    """Per-example benchmark scores.

    similarities maps each text layer to its (backend-B, backend-S) pair;
    action metrics live in their own fields. bpc is present only when a
    judge actually ran.
    """

    similarities: dict[LayerKind, tuple[float, float]] = field(default_factory=dict)
    action_sr: float = 0.0
    action_ac: int = 0
    action_ac_ratio: float = 0.0
    bpc: float | None = None
    example_id: str = ""


@dataclass(frozen=True)
class Report:
    """Aggregated table: column names, per-example rows, dataset means."""

    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    means: dict[str, float]

    def to_tsv(self) -> str:
        lines = ["\t".join(("id",) + self.columns)]
        for row in self.rows:
            lines.append(
                "\t".join(
                    [str(row["id"])] + [_fmt(row[c]) for c in self.columns]
                )
            )
        if self.rows:
            lines.append(
                "\t".join(["mean"] + [_fmt(self.means[c]) for c in self.columns])
            )
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "columns": list(self.columns),
            "rows": [dict(row) for row in self.rows],
            "means": dict(self.means),
        }


def _fmt(value: float | str) -> str:
    if isinstance(value, str):
        return value
    return f"{value:.2f}"


def _column_pairs(include_bpc: bool) -> tuple[str, ...]:
    columns: list[str] = []
    for layer in TEXT_LAYERS:
        columns.append(f"{layer.name}_B")
        columns.append(f"{layer.name}_S")
    columns.extend(["SR", "AC", "AC_ratio"])
    if include_bpc:
        columns.append("BPC")
    return tuple(columns)


def aggregate(rows: Sequence[LayerScores]) -> Report:
    """Build the dataset report: per-column means on a 0-100 scale.

    BPC keeps its native 0-10 scale and its column appears only when at
    least one row carries a judge score (its mean averages those rows).
    The mean of each other column is the mean of the per-example values
    scaled by 100; row values are scaled the same way so the table reads
    uniformly.
    """
    include_bpc = any(r.bpc is not None for r in rows)
    columns = _column_pairs(include_bpc)

    table_rows: list[dict] = []
    for scores in rows:
        row: dict = {"id": scores.example_id}
        for layer in TEXT_LAYERS:
            sim_b, sim_s = scores.similarities.get(layer, (0.0, 0.0))
            row[f"{layer.name}_B"] = 100.0 * sim_b
            row[f"{layer.name}_S"] = 100.0 * sim_s
        row["SR"] = 100.0 * scores.action_sr
        row["AC"] = 100.0 * scores.action_ac
        row["AC_ratio"] = 100.0 * scores.action_ac_ratio
        if include_bpc:
            row["BPC"] = scores.bpc if scores.bpc is not None else ""
        table_rows.append(row)

    means: dict[str, float] = {}
    if table_rows:
        for column in columns:
            if column == "BPC":
                judged = [r.bpc for r in rows if r.bpc is not None]
                means[column] = sum(judged) / len(judged)
            else:
                means[column] = sum(r[column] for r in table_rows) / len(table_rows)

    return Report(columns=columns, rows=tuple(table_rows), means=means)
