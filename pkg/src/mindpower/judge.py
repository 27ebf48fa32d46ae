"""External-judge client for the 0-10 reasoning-consistency score.

The judge reads a full six-layer trace and grades (a) whether each layer
logically follows from the previous one without contradictions, (b) whether
the reasoning is complete and precise, and (c) whether it genuinely adopts
the robot's own perspective while assisting the humans in the scene. The
transport is any object with ``complete(prompt) -> str``; the bundled HTTP
client reads its endpoint and credentials from environment variables and is
entirely optional: when no endpoint is configured the consistency column is
simply omitted.
"""

from __future__ import annotations

import os
import re
import time
from typing import Protocol

from .errors import JudgeMalformedReplyError, JudgeUnavailableError
from .hierarchy import ReasoningTrace

JUDGE_ENDPOINT_ENV = "MINDPOWER_JUDGE_ENDPOINT"
JUDGE_API_KEY_ENV = "MINDPOWER_JUDGE_API_KEY"
JUDGE_MODEL_ENV = "MINDPOWER_JUDGE_MODEL"

_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")


class JudgeClient(Protocol):
    def complete(self, prompt: str) -> str: ...


def build_bpc_prompt(trace: ReasoningTrace) -> str:
    return "\n".join(
        [
            "You are grading a six-layer reasoning trace produced by an",
            "embodied assistant (<Perception>, <Belief>, <Desire>,",
            "<Intention>, <Decision>, <Action>). Score it from 0 to 10 on:",
            "1. each layer logically follows from the previous one, with no",
            "   contradictions between layers;",
            "2. the overall reasoning is complete and precise;",
            "3. the reasoning genuinely adopts the robot's own perspective,",
            "   separating its beliefs from the humans' beliefs, and",
            "   effectively assists the human characters in the story.",
            "Reply with a single number between 0 and 10 and nothing else.",
            "",
            "Trace:",
            trace.render(),
        ]
    )


def judge_bpc(
    trace: ReasoningTrace,
    judge: JudgeClient,
    attempts: int = 3,
    backoff: float = 0.5,
) -> float:
    """Ask the judge for a 0-10 score, retrying transport failures.

    Retries cover unavailability only (exceptions from the client); a reply
    that arrives but carries no in-range number fails immediately with
    JudgeMalformedReplyError.
    """
    last_error: Exception | None = None
    for attempt in range(attempts):
        try:
            reply = judge.complete(build_bpc_prompt(trace))
        except Exception as exc:  # transport-level failure: retry
            last_error = exc
            if attempt + 1 < attempts:
                time.sleep(backoff * (2**attempt))
            continue
        match = _NUMBER_RE.search(reply)
        if not match:
            raise JudgeMalformedReplyError(reply)
        score = float(match.group(0))
        if not 0.0 <= score <= 10.0:
            raise JudgeMalformedReplyError(reply)
        return score
    raise JudgeUnavailableError(
        f"judge unreachable after {attempts} attempts: {last_error}"
    )


class HttpJudgeClient:
    """Chat-completion judge over HTTP; session injectable for tests."""

    def __init__(
        self,
        endpoint: str,
        model: str = "default",
        api_key: str | None = None,
        session=None,
        timeout: float = 30.0,
    ) -> None:
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        if session is None:
            import requests

            session = requests.Session()
        self.session = session
        self.timeout = timeout

    def complete(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        }
        response = self.session.post(
            self.endpoint, json=payload, headers=headers, timeout=self.timeout
        )
        response.raise_for_status()
        return response.json()["choices"][0]["message"]["content"]


def judge_from_env() -> HttpJudgeClient | None:
    """Build the HTTP judge from the environment, or None when unset."""
    endpoint = os.environ.get(JUDGE_ENDPOINT_ENV)
    if not endpoint:
        return None
    return HttpJudgeClient(
        endpoint=endpoint,
        model=os.environ.get(JUDGE_MODEL_ENV, "default"),
        api_key=os.environ.get(JUDGE_API_KEY_ENV),
    )
