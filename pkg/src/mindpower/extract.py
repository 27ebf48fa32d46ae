"""Turning raw layer text into atomic sequences.

Two extractors implement the same interface. DslExtractor assumes the layer
text already is canonical atomic-action DSL (true for ground truth and for
models trained to emit it) and parses it deterministically.
RemoteLlmExtractor delegates the conversion of free prose to an external
chat-completion endpoint, feeding it the atomic-action reference table as
an in-context prompt; the HTTP session is injectable so tests can mock it.
"""

from __future__ import annotations

import os
from typing import Mapping, Protocol

from .atoms import (
    DEFAULT_ALIASES,
    MENTAL_PREDICATES_BY_LAYER,
    PHYSICAL_VERBS,
    AtomicSequence,
    parse_atomic,
)
from .errors import MindPowerError
from .hierarchy import MENTAL_LAYERS, LayerKind

ENDPOINT_ENV = "MINDPOWER_LLM_ENDPOINT"
API_KEY_ENV = "MINDPOWER_LLM_API_KEY"
MODEL_ENV = "MINDPOWER_LLM_MODEL"


class Extractor(Protocol):
    def extract(self, text: str, layer: LayerKind) -> AtomicSequence: ...


class DslExtractor:
    """Deterministic extractor: the text must already be DSL."""

    def __init__(self, aliases: Mapping[str, str] = DEFAULT_ALIASES) -> None:
        self.aliases = dict(aliases)

    def extract(self, text: str, layer: LayerKind) -> AtomicSequence:
        return parse_atomic(text, layer, self.aliases)


def build_extraction_prompt(text: str, layer: LayerKind) -> str:
    """In-context instructions for converting one layer's prose into atoms."""
    lines = [
        "Convert the reasoning text below into a comma-separated sequence of",
        "canonical atomic actions. Output only the sequence, nothing else.",
        "",
    ]
    if layer in MENTAL_LAYERS:
        lines.append(
            "This is a mental-reasoning layer. Each item must have the form "
            "predicate(agent, content), where agent is a character identifier "
            "(char0, char1, ...) or 'robot' for the embodied agent."
        )
        lines.append("Allowed predicates per layer:")
        for kind, names in MENTAL_PREDICATES_BY_LAYER.items():
            lines.append(f"  <{kind.name}>: {', '.join(sorted(names))}")
        lines.append(
            "Example contents: searching(object); object_on(location); "
            "human_believes(object_on(location)); assist(human, find(object)); "
            "fetch(object, from=location1, to=location2); "
            "belief_conflict(human, object_location)."
        )
    else:
        lines.append(
            "This is a physical layer. Each item is one of: "
            "action(character, object), "
            "action(character, object, from=location1, to=location2), "
            "action(character, location), action(character)."
        )
        if layer == LayerKind.Action:
            lines.append(
                "This is the embodied agent's own action plan: omit the "
                "character argument entirely."
            )
        lines.append("Allowed verbs: " + ", ".join(sorted(PHYSICAL_VERBS)) + ".")
    lines.extend(
        [
            "",
            f"Layer: <{layer.name}>",
            "Text:",
            text,
        ]
    )
    return "\n".join(lines)


class RemoteLlmExtractor:
    """Extractor backed by an external chat-completion endpoint.

    Speaks the common {"model", "messages"} JSON shape and reads the reply
    from choices[0].message.content, then parses it as DSL. Never used by
    the offline test suite; construct with a mock session there.
    """

    def __init__(
        self,
        endpoint: str | None = None,
        model: str | None = None,
        api_key: str | None = None,
        session=None,
        timeout: float = 30.0,
        aliases: Mapping[str, str] = DEFAULT_ALIASES,
    ) -> None:
        self.endpoint = endpoint or os.environ.get(ENDPOINT_ENV, "")
        if not self.endpoint:
            raise MindPowerError(
                f"no extraction endpoint configured ({ENDPOINT_ENV} unset)"
            )
        self.model = model or os.environ.get(MODEL_ENV, "default")
        self.api_key = api_key or os.environ.get(API_KEY_ENV)
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self.timeout = timeout
        self.aliases = dict(aliases)

    def extract(self, text: str, layer: LayerKind) -> AtomicSequence:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.model,
            "messages": [
                {"role": "user", "content": build_extraction_prompt(text, layer)}
            ],
        }
        response = self.session.post(
            self.endpoint, json=payload, headers=headers, timeout=self.timeout
        )
        response.raise_for_status()
        content = response.json()["choices"][0]["message"]["content"]
        return parse_atomic(content, layer, self.aliases)


def make_extractor(kind: str, aliases: Mapping[str, str]) -> Extractor:
    if kind == "dsl":
        return DslExtractor(aliases)
    if kind == "remote":
        return RemoteLlmExtractor(aliases=aliases)
    raise ValueError(f"unknown extractor kind {kind!r}")
