import pytest

from mindpower.config import EngineConfig
from mindpower.dataset import make_toy_dataset
from mindpower.extract import DslExtractor
from mindpower.hierarchy import LayerKind, render_tagged
from mindpower.metrics import TokenOverlapSimilarity
from mindpower.pipeline import evaluate_output, parse_rollout, score_rollout

CFG = EngineConfig()
EXTRACTOR = DslExtractor()
SIM = TokenOverlapSimilarity()


def test_every_toy_example_scores_max_reward_against_itself():
    for example in make_toy_dataset():
        breakdown = score_rollout(example, example.atoms_trace_text(), CFG, EXTRACTOR)
        assert breakdown.total == pytest.approx(2.0, abs=1e-12), example.id
        assert breakdown.r_format == 1
        assert breakdown.warnings == []


def test_empty_rollout_scores_zero():
    example = make_toy_dataset()[0]
    breakdown = score_rollout(example, "", CFG, EXTRACTOR)
    assert breakdown.total == 0.0
    assert breakdown.r_format == 0


def test_duplicate_tag_rollout_scores_zero_with_diagnostic():
    example = make_toy_dataset()[0]
    raw = "<Belief>x<Belief>y"
    breakdown = score_rollout(example, raw, CFG, EXTRACTOR)
    assert breakdown.total == 0.0
    assert any("duplicate" in w for w in breakdown.warnings)


def test_unparseable_layer_scores_zero_with_diagnostic():
    example = make_toy_dataset()[0]
    layers = dict.fromkeys(LayerKind, "")
    for layer in LayerKind:
        layers[layer] = example.ground_truth[layer].atoms
    layers[LayerKind.Belief] = "this is prose, not atoms ((("
    raw = render_tagged(layers.items())
    breakdown = score_rollout(example, raw, CFG, EXTRACTOR)
    assert any("Belief" in w for w in breakdown.warnings)
    assert breakdown.per_layer[LayerKind.Belief] == (0.0, 0.0, 0.0)
    assert 0.0 < breakdown.total < 2.0
    assert breakdown.r_format == 1  # tags were fine, only atoms were not


def test_partial_rollout_scores_between_bounds():
    example = make_toy_dataset()[0]
    layers = [
        (layer, example.ground_truth[layer].atoms)
        for layer in (LayerKind.Perception, LayerKind.Action)
    ]
    breakdown = score_rollout(example, render_tagged(layers), CFG, EXTRACTOR)
    assert breakdown.r_format == 0
    assert 0.0 < breakdown.r_mind < 1.0
    assert breakdown.total == pytest.approx(breakdown.r_mind, abs=1e-12)


def test_parse_rollout_never_raises_on_junk():
    for junk in ("", "garbage", "<Belief>)(", "<Action>((", "<Belief>x<Belief>y"):
        rollout = parse_rollout(junk, EXTRACTOR)
        assert rollout.fmt in (0, 1)


def test_evaluate_self_output_is_perfect():
    example = make_toy_dataset()[0]
    scores = evaluate_output(
        example, example.reference_trace_text(), CFG, EXTRACTOR, SIM, SIM
    )
    for pair in scores.similarities.values():
        assert pair == (1.0, 1.0)
    assert scores.action_sr == pytest.approx(1.0, abs=1e-12)
    assert scores.action_ac == 1
    assert scores.bpc is None
    assert scores.example_id == example.id


def test_evaluate_empty_output_scores_zero():
    example = make_toy_dataset()[0]
    scores = evaluate_output(example, "", CFG, EXTRACTOR, SIM, SIM)
    assert scores.action_sr == 0.0
    assert scores.action_ac == 0
    assert all(pair == (0.0, 0.0) for pair in scores.similarities.values())


def test_evaluate_with_mock_judge():
    class SevenJudge:
        def complete(self, prompt: str) -> str:
            return "7"

    example = make_toy_dataset()[0]
    scores = evaluate_output(
        example, example.reference_trace_text(), CFG, EXTRACTOR, SIM, SIM,
        judge=SevenJudge(),
    )
    assert scores.bpc == 7.0
