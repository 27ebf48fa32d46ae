"""Six-layer reasoning-trace parsing and the binary format reward.

Model output is expected to walk the reasoning hierarchy
``<Perception> -> <Belief> -> <Desire> -> <Intention> -> <Decision> -> <Action>``.
This module scans arbitrary text for those tags (exact case), slices out the
per-layer text, and scores whether the full hierarchy appeared in order.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import DuplicateLayerError


class LayerKind(enum.IntEnum):
    """The six reasoning layers, totally ordered by hierarchy position."""

    Perception = 1
    Belief = 2
    Desire = 3
    Intention = 4
    Decision = 5
    Action = 6

    @property
    def tag(self) -> str:
        return f"<{self.name}>"

    @property
    def closing_tag(self) -> str:
        return f"</{self.name}>"


LAYER_ORDER: tuple[LayerKind, ...] = tuple(LayerKind)

#: Layers whose items are mental predicates rather than physical actions;
#: Perception and Action hold physical actions.
MENTAL_LAYERS = frozenset(
    {LayerKind.Belief, LayerKind.Desire, LayerKind.Intention, LayerKind.Decision}
)

_OPEN_TAG_RE = re.compile(r"<(Perception|Belief|Desire|Intention|Decision|Action)>")
_CLOSE_TAG_RE = re.compile(r"</(?:Perception|Belief|Desire|Intention|Decision|Action)>")


@dataclass(frozen=True)
class TraceLayer:
    """One recognized layer: its kind, cleaned text, and source span.

    ``span`` covers the opening tag through the start of the next recognized
    tag (or end of source), so ``source[span[0]:span[1]]`` reconstructs the
    tag plus the raw region the text was cut from.
    """

    kind: LayerKind
    text: str
    span: tuple[int, int]


@dataclass(frozen=True)
class ReasoningTrace:
    """Parsed trace: recognized layers in the order they were found."""

    layers: tuple[TraceLayer, ...]
    source: str

    def kinds(self) -> tuple[LayerKind, ...]:
        return tuple(layer.kind for layer in self.layers)

    def get(self, kind: LayerKind) -> TraceLayer | None:
        for layer in self.layers:
            if layer.kind == kind:
                return layer
        return None

    def layer_texts(self) -> dict[LayerKind, str]:
        return {layer.kind: layer.text for layer in self.layers}

    def render(self) -> str:
        """Canonical tagged serialization (re-parsing yields the same layers)."""
        return render_tagged((layer.kind, layer.text) for layer in self.layers)


def render_tagged(layers: Iterable[tuple[LayerKind, str]]) -> str:
    return "\n".join(f"{kind.tag}{text}{kind.closing_tag}" for kind, text in layers)


def parse_trace(source: str) -> ReasoningTrace:
    """Scan ``source`` for layer tags and slice out per-layer text.

    Matching is case-sensitive on the exact tag spellings. A layer's region
    runs from its tag to the next recognized tag or end of input; closing
    tags inside a region are tolerated and stripped, as is surrounding
    whitespace. Text before the first tag is ignored. Missing layers are
    simply absent; a repeated tag raises DuplicateLayerError.
    """
    hits = [(m.start(), LayerKind[m.group(1)]) for m in _OPEN_TAG_RE.finditer(source)]

    seen: set[LayerKind] = set()
    for _, kind in hits:
        if kind in seen:
            raise DuplicateLayerError(kind)
        seen.add(kind)

    layers: list[TraceLayer] = []
    for i, (start, kind) in enumerate(hits):
        end = hits[i + 1][0] if i + 1 < len(hits) else len(source)
        region = source[start + len(kind.tag) : end]
        text = _CLOSE_TAG_RE.sub("", region).strip()
        layers.append(TraceLayer(kind=kind, text=text, span=(start, end)))

    return ReasoningTrace(layers=tuple(layers), source=source)


def format_reward(trace: ReasoningTrace) -> int:
    """1 iff all six layers are present in hierarchy order, else 0."""
    return int(trace.kinds() == LAYER_ORDER)
