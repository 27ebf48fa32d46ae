import json

import pytest

from mindpower.atoms import parse_atomic
from mindpower.dataset import (
    TaskType,
    load_dataset,
    load_outputs,
    make_toy_dataset,
    write_dataset,
    write_outputs,
    ModelOutput,
)
from mindpower.errors import (
    AtomParseError,
    DuplicateIdError,
    SchemaError,
)
from mindpower.hierarchy import LAYER_ORDER, LayerKind


def test_toy_dataset_has_ten_examples():
    examples = make_toy_dataset()
    assert len(examples) == 10
    assert len({e.id for e in examples}) == 10
    assert {e.task for e in examples} == {TaskType.FALSE_BELIEF, TaskType.IMPLICIT_GOAL}
    assert {e.simulator for e in examples} == {"virtualhome", "threedworld"}


def test_toy_dataset_false_belief_story_actions():
    example = next(e for e in make_toy_dataset() if e.id == "fb-apple-fridge")
    expected = parse_atomic(
        "walk(fridge), open(fridge), pick(apple), walk(alice)", LayerKind.Action
    )
    assert example.reference_atoms()[LayerKind.Action] == expected


def test_toy_dataset_implicit_goal_story_actions():
    example = next(e for e in make_toy_dataset() if e.id == "ig-fire-hydrant")
    expected = parse_atomic(
        "walk(fire_hydrant), move(fire_hydrant, corner)", LayerKind.Action
    )
    assert example.reference_atoms()[LayerKind.Action] == expected


def test_toy_dataset_all_layers_annotated():
    for example in make_toy_dataset():
        assert set(example.ground_truth) == set(LAYER_ORDER)
        atoms = example.reference_atoms()
        assert all(seq.items for seq in atoms.values())


def test_round_trip_write_then_load(tmp_path):
    examples = make_toy_dataset()
    path = tmp_path / "toy.jsonl"
    write_dataset(examples, path)
    assert load_dataset(path) == examples


def test_outputs_round_trip(tmp_path):
    outputs = [ModelOutput(example_id="a", raw="<Perception>x"),
               ModelOutput(example_id="b", raw="line\nwith<Action>y")]
    path = tmp_path / "out.jsonl"
    write_outputs(outputs, path)
    assert load_outputs(path) == outputs


def _valid_obj():
    return make_toy_dataset()[0].to_json_obj()


def _write_lines(tmp_path, objs):
    path = tmp_path / "data.jsonl"
    path.write_text("\n".join(json.dumps(o) for o in objs) + "\n", encoding="utf-8")
    return path


def test_missing_layer_rejected(tmp_path):
    obj = _valid_obj()
    del obj["ground_truth"]["Desire"]
    with pytest.raises(SchemaError) as err:
        load_dataset(_write_lines(tmp_path, [obj]))
    assert "Desire" in str(err.value)


def test_bad_task_rejected(tmp_path):
    obj = _valid_obj()
    obj["task"] = "mind_reading"
    with pytest.raises(SchemaError):
        load_dataset(_write_lines(tmp_path, [obj]))


def test_duplicate_id_rejected(tmp_path):
    obj = _valid_obj()
    with pytest.raises(DuplicateIdError):
        load_dataset(_write_lines(tmp_path, [obj, obj]))


def test_broken_atoms_rejected_with_location(tmp_path):
    obj = _valid_obj()
    obj["ground_truth"]["Action"]["atoms"] = "walk(fridge"
    with pytest.raises(AtomParseError) as err:
        load_dataset(_write_lines(tmp_path, [obj]))
    assert err.value.line == 1
    assert err.value.layer == LayerKind.Action


def test_unregistered_action_verb_rejected(tmp_path):
    obj = _valid_obj()
    obj["ground_truth"]["Action"]["atoms"] = "identify(apple)"
    with pytest.raises(SchemaError) as err:
        load_dataset(_write_lines(tmp_path, [obj]))
    assert "identify" in str(err.value)


def test_layer_tag_inside_text_rejected(tmp_path):
    obj = _valid_obj()
    obj["ground_truth"]["Belief"]["text"] = "sneaky <Action> tag"
    with pytest.raises(SchemaError):
        load_dataset(_write_lines(tmp_path, [obj]))


def test_empty_atoms_rejected(tmp_path):
    obj = _valid_obj()
    obj["ground_truth"]["Intention"]["atoms"] = ""
    with pytest.raises(SchemaError):
        load_dataset(_write_lines(tmp_path, [obj]))


def test_malformed_json_line_reports_line_number(tmp_path):
    path = tmp_path / "data.jsonl"
    path.write_text(
        json.dumps(_valid_obj()) + "\n{not json}\n", encoding="utf-8"
    )
    with pytest.raises(SchemaError) as err:
        load_dataset(path)
    assert err.value.line == 2


def test_blank_lines_are_skipped(tmp_path):
    path = tmp_path / "data.jsonl"
    path.write_text(json.dumps(_valid_obj()) + "\n\n\n", encoding="utf-8")
    assert len(load_dataset(path)) == 1


def test_trace_renderings_parse_back():
    from mindpower.hierarchy import format_reward, parse_trace

    for example in make_toy_dataset():
        for rendering in (example.reference_trace_text(), example.atoms_trace_text()):
            trace = parse_trace(rendering)
            assert format_reward(trace) == 1
