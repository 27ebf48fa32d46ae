import pytest

from mindpower.atoms import parse_atomic
from mindpower.errors import (
    JudgeMalformedReplyError,
    JudgeUnavailableError,
    MindPowerError,
)
from mindpower.extract import (
    DslExtractor,
    RemoteLlmExtractor,
    build_extraction_prompt,
    make_extractor,
)
from mindpower.hierarchy import LayerKind, parse_trace
from mindpower.judge import build_bpc_prompt, judge_bpc

ACTION = LayerKind.Action
TRACE = parse_trace(
    "<Perception>p<Belief>b<Desire>d<Intention>i<Decision>c<Action>walk(a)"
)


def test_dsl_extractor_matches_parse_atomic():
    extractor = DslExtractor()
    text = "walk(fridge), open(fridge)"
    assert extractor.extract(text, ACTION) == parse_atomic(text, ACTION)


def test_dsl_extractor_is_deterministic():
    extractor = DslExtractor()
    text = "attribute_belief(char0, searching(apple))"
    results = {extractor.extract(text, LayerKind.Belief) for _ in range(5)}
    assert len(results) == 1


def test_extraction_prompt_carries_vocabulary():
    prompt = build_extraction_prompt("the robot opens the fridge", ACTION)
    assert "walk" in prompt and "switchon" in prompt
    assert "omit the character" in prompt
    mental = build_extraction_prompt("she thinks it moved", LayerKind.Belief)
    assert "attribute_belief" in mental and "form_intention" in mental


class _FakeResponse:
    def __init__(self, content: str) -> None:
        self._content = content

    def raise_for_status(self) -> None:
        pass

    def json(self) -> dict:
        return {"choices": [{"message": {"content": self._content}}]}


class _FakeSession:
    def __init__(self, content: str) -> None:
        self.content = content
        self.calls = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.calls.append({"url": url, "json": json, "headers": headers})
        return _FakeResponse(self.content)


def test_remote_extractor_parses_reply_through_dsl():
    session = _FakeSession("walk(fridge), pick(apple)")
    extractor = RemoteLlmExtractor(
        endpoint="http://fake/api", model="m", api_key="k", session=session
    )
    seq = extractor.extract("walks over and grabs the apple", ACTION)
    assert seq == parse_atomic("walk(fridge), pick(apple)", ACTION)
    call = session.calls[0]
    assert call["url"] == "http://fake/api"
    assert call["headers"]["Authorization"] == "Bearer k"
    assert "<Action>" in call["json"]["messages"][0]["content"]


def test_remote_extractor_requires_endpoint(monkeypatch):
    monkeypatch.delenv("MINDPOWER_LLM_ENDPOINT", raising=False)
    with pytest.raises(MindPowerError):
        RemoteLlmExtractor()


def test_make_extractor_kinds():
    assert isinstance(make_extractor("dsl", {}), DslExtractor)
    with pytest.raises(ValueError):
        make_extractor("psychic", {})


class _ScriptedJudge:
    def __init__(self, replies) -> None:
        self.replies = list(replies)
        self.calls = 0

    def complete(self, prompt: str) -> str:
        self.calls += 1
        reply = self.replies.pop(0)
        if isinstance(reply, Exception):
            raise reply
        return reply


def test_judge_parses_numeric_reply():
    assert judge_bpc(TRACE, _ScriptedJudge(["7"])) == 7.0
    assert judge_bpc(TRACE, _ScriptedJudge(["Score: 8.5/10"])) == 8.5


def test_judge_malformed_reply():
    with pytest.raises(JudgeMalformedReplyError):
        judge_bpc(TRACE, _ScriptedJudge(["utter nonsense"]))
    with pytest.raises(JudgeMalformedReplyError):
        judge_bpc(TRACE, _ScriptedJudge(["42"]))  # out of the 0-10 range


def test_judge_retries_then_unavailable():
    judge = _ScriptedJudge([ConnectionError("down")] * 3)
    with pytest.raises(JudgeUnavailableError):
        judge_bpc(TRACE, judge, attempts=3, backoff=0.0)
    assert judge.calls == 3


def test_judge_recovers_after_transient_failure():
    judge = _ScriptedJudge([ConnectionError("down"), "9"])
    assert judge_bpc(TRACE, judge, attempts=3, backoff=0.0) == 9.0
    assert judge.calls == 2


def test_bpc_prompt_includes_trace_and_criteria():
    prompt = build_bpc_prompt(TRACE)
    assert "0 to 10" in prompt
    assert "<Perception>" in prompt and "walk(a)" in prompt
    assert "perspective" in prompt


def test_judge_from_env(monkeypatch):
    from mindpower.judge import judge_from_env

    monkeypatch.delenv("MINDPOWER_JUDGE_ENDPOINT", raising=False)
    assert judge_from_env() is None
    monkeypatch.setenv("MINDPOWER_JUDGE_ENDPOINT", "http://fake/judge")
    monkeypatch.setenv("MINDPOWER_JUDGE_API_KEY", "secret")
    client = judge_from_env()
    assert client is not None and client.endpoint == "http://fake/judge"
