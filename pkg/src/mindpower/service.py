"""Streaming reward service speaking newline-delimited JSON.

One request per line, one response per line, in arrival order within a
connection. The payload schema (see docs/protocol.md)::

    -> {"request_id": "r1", "example_id": "fb-apple-fridge",
        "group": ["<Perception>...", "..."]}
    <- {"request_id": "r1", "per_rollout": [<breakdown>, ...],
        "advantages": [1.0, -1.0]}

Failures never kill the service: a recoverable problem yields an error
object carrying the request_id, and a line that cannot even be correlated
yields a protocol_error object. Responses are serialized canonically
(sorted keys, no whitespace), so identical requests produce byte-identical
responses regardless of concurrency.

Backpressure: scoring runs under a semaphore of ``max_inflight`` slots
(config key, default 32), each connection processes its lines strictly
sequentially, and responses are written before the next line is read, so a
slow consumer blocks only its own connection and queues at most one
in-flight request there.
"""

from __future__ import annotations

import json
import socketserver
import sys
import threading
from dataclasses import dataclass
from typing import IO, Mapping

from .config import EngineConfig
from .dataset import DatasetExample
from .errors import (
    EmptyGroupError,
    MindPowerError,
    RequestError,
    UnknownExampleError,
)
from .extract import DslExtractor, Extractor
from .pipeline import score_rollout
from .reward import RewardBreakdown, group_advantages


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def breakdown_to_obj(breakdown: RewardBreakdown) -> dict:
    return {
        "per_layer": {
            layer.name: {"r1": c[0], "r2": c[1], "rl": c[2]}
            for layer, c in breakdown.per_layer.items()
        },
        "r_atomic": breakdown.r_atomic,
        "r_local": breakdown.r_local,
        "r_global": breakdown.r_global,
        "r_mind": breakdown.r_mind,
        "r_format": breakdown.r_format,
        "total": breakdown.total,
        "warnings": list(breakdown.warnings),
    }


def _error_obj(request_id, code: str, message: str) -> dict:
    return {"request_id": request_id, "error": {"code": code, "message": message}}


@dataclass
class RewardService:
    """Pure request handler shared by the stdio and TCP transports."""

    examples: Mapping[str, DatasetExample]
    cfg: EngineConfig
    extractor: Extractor | None = None

    def __post_init__(self) -> None:
        if self.extractor is None:
            self.extractor = DslExtractor(self.cfg.aliases)
        self._inflight = threading.BoundedSemaphore(self.cfg.max_inflight)

    @classmethod
    def from_dataset(
        cls,
        examples: list[DatasetExample],
        cfg: EngineConfig,
        extractor: Extractor | None = None,
    ) -> "RewardService":
        return cls(
            examples={e.id: e for e in examples}, cfg=cfg, extractor=extractor
        )

    def handle_obj(self, obj) -> dict:
        if not isinstance(obj, dict):
            return _error_obj(None, "protocol_error", "request must be an object")
        request_id = obj.get("request_id")
        if not isinstance(request_id, str):
            return _error_obj(None, "protocol_error", "missing request_id")
        try:
            example_id = obj.get("example_id")
            if not isinstance(example_id, str):
                raise RequestError("missing example_id")
            group = obj.get("group")
            if not isinstance(group, list) or not all(
                isinstance(r, str) for r in group
            ):
                raise RequestError("group must be a list of strings")
            if not group:
                raise EmptyGroupError("group must contain at least one rollout")
            example = self.examples.get(example_id)
            if example is None:
                raise UnknownExampleError(example_id)

            with self._inflight:
                breakdowns = [
                    score_rollout(example, raw, self.cfg, self.extractor)
                    for raw in group
                ]
            advantages = group_advantages(
                [b.total for b in breakdowns], self.cfg.grpo
            )
            return {
                "request_id": request_id,
                "per_rollout": [breakdown_to_obj(b) for b in breakdowns],
                "advantages": advantages,
            }
        except MindPowerError as exc:
            return _error_obj(request_id, exc.code, str(exc))
        except Exception as exc:  # deliberately total: one line in, one out
            return _error_obj(request_id, "Error", f"{type(exc).__name__}: {exc}")

    def handle_line(self, line: str) -> str:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            return canonical_json(
                _error_obj(None, "protocol_error", f"bad json: {exc}")
            )
        return canonical_json(self.handle_obj(obj))


def serve_stdio(
    service: RewardService,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
) -> None:
    """Blocking line loop over stdio; returns at EOF."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        stdout.write(service.handle_line(line))
        stdout.write("\n")
        stdout.flush()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        service: RewardService = self.server.service  # type: ignore[attr-defined]
        while True:
            raw = self.rfile.readline()
            if not raw:
                return
            response = service.handle_line(raw.decode("utf-8", errors="replace"))
            self.wfile.write(response.encode("utf-8") + b"\n")
            self.wfile.flush()


class TcpRewardServer(socketserver.ThreadingTCPServer):
    """Thread-per-connection NDJSON server; FIFO within each connection."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], service: RewardService) -> None:
        super().__init__(address, _Handler)
        self.service = service


def serve_tcp(service: RewardService, host: str, port: int) -> None:
    with TcpRewardServer((host, port), service) as server:
        server.serve_forever()
