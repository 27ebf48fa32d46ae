"""Benchmark dataset schema, JSONL loader/writer, and the bundled toy set.

One example per line::

    {"id": "...", "task": "false_belief" | "implicit_goal",
     "simulator": "...", "video_ref": "...", "characters": [...],
     "ground_truth": {"Perception": {"text": "...", "atoms": "..."},
                      ..., "Action": {"text": "...", "atoms": "..."}}}

``text`` is the annotated prose for a layer; ``atoms`` is the same content
in the canonical atomic-action language. Loading validates both: every
layer must be present with non-empty, cleanly parsing atoms, and the
Action layer must stay inside the registered verb set. ``video_ref`` is an
opaque string, never dereferenced here.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .atoms import AtomicSequence, parse_atomic, validate_vocabulary
from .errors import (
    AtomParseError,
    DslSyntaxError,
    DuplicateIdError,
    LayerMismatchError,
    SchemaError,
)
from .hierarchy import LAYER_ORDER, LayerKind, render_tagged

_TAG_NAMES = [k.name for k in LAYER_ORDER]


class TaskType(str, enum.Enum):
    FALSE_BELIEF = "false_belief"
    IMPLICIT_GOAL = "implicit_goal"


@dataclass(frozen=True)
class GroundTruthLayer:
    text: str
    atoms: str


@dataclass(frozen=True)
class DatasetExample:
    id: str
    task: TaskType
    simulator: str
    video_ref: str
    characters: tuple[str, ...]
    ground_truth: dict[LayerKind, GroundTruthLayer]

    def reference_atoms(self) -> dict[LayerKind, AtomicSequence]:
        """Parsed canonical sequences for every annotated layer."""
        return {
            layer: parse_atomic(gt.atoms, layer)
            for layer, gt in self.ground_truth.items()
        }

    def reference_trace_text(self) -> str:
        """Tagged trace for evaluation self-runs: annotated prose for the
        text layers, canonical atoms for the Action layer."""
        return render_tagged(
            (
                layer,
                self.ground_truth[layer].atoms
                if layer == LayerKind.Action
                else self.ground_truth[layer].text,
            )
            for layer in LAYER_ORDER
        )

    def atoms_trace_text(self) -> str:
        """Tagged trace whose every layer is the canonical atoms string;
        scoring it against this example yields the maximum reward."""
        return render_tagged(
            (layer, self.ground_truth[layer].atoms) for layer in LAYER_ORDER
        )

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "task": self.task.value,
            "simulator": self.simulator,
            "video_ref": self.video_ref,
            "characters": list(self.characters),
            "ground_truth": {
                layer.name: {"text": gt.text, "atoms": gt.atoms}
                for layer, gt in sorted(self.ground_truth.items())
            },
        }


@dataclass(frozen=True)
class ModelOutput:
    """One model rollout to evaluate: the raw tagged trace text."""

    example_id: str
    raw: str


def _require(obj: dict, key: str, kind, line: int):
    if key not in obj:
        raise SchemaError(line, key, "missing")
    value = obj[key]
    if not isinstance(value, kind):
        raise SchemaError(line, key, f"expected {kind.__name__}")
    return value


def _parse_example(obj: dict, line: int) -> DatasetExample:
    example_id = _require(obj, "id", str, line)
    task_raw = _require(obj, "task", str, line)
    try:
        task = TaskType(task_raw)
    except ValueError:
        raise SchemaError(line, "task", f"unknown task {task_raw!r}") from None
    simulator = _require(obj, "simulator", str, line)
    video_ref = _require(obj, "video_ref", str, line)
    characters = _require(obj, "characters", list, line)
    if not all(isinstance(c, str) for c in characters):
        raise SchemaError(line, "characters", "must be a list of strings")
    gt_obj = _require(obj, "ground_truth", dict, line)

    ground_truth: dict[LayerKind, GroundTruthLayer] = {}
    for layer in LAYER_ORDER:
        if layer.name not in gt_obj:
            raise SchemaError(line, f"ground_truth.{layer.name}", "missing layer")
        entry = gt_obj[layer.name]
        if not isinstance(entry, dict):
            raise SchemaError(line, f"ground_truth.{layer.name}", "expected object")
        text = entry.get("text")
        atoms = entry.get("atoms")
        if not isinstance(text, str) or not text.strip():
            raise SchemaError(
                line, f"ground_truth.{layer.name}.text", "must be non-empty text"
            )
        if any(f"<{name}>" in text for name in _TAG_NAMES):
            raise SchemaError(
                line, f"ground_truth.{layer.name}.text", "contains a layer tag"
            )
        if not isinstance(atoms, str):
            raise SchemaError(line, f"ground_truth.{layer.name}.atoms", "missing")

        try:
            seq = parse_atomic(atoms, layer)
        except DslSyntaxError as exc:
            raise AtomParseError(line, layer, exc.position, str(exc)) from exc
        except LayerMismatchError as exc:
            raise AtomParseError(line, layer, 0, str(exc)) from exc
        if not seq.items:
            raise SchemaError(
                line, f"ground_truth.{layer.name}.atoms", "must not be empty"
            )
        if layer == LayerKind.Action:
            warnings = validate_vocabulary(seq)
            if warnings:
                raise SchemaError(
                    line, "ground_truth.Action.atoms", "; ".join(warnings)
                )
        ground_truth[layer] = GroundTruthLayer(text=text, atoms=atoms)

    return DatasetExample(
        id=example_id,
        task=task,
        simulator=simulator,
        video_ref=video_ref,
        characters=tuple(characters),
        ground_truth=ground_truth,
    )


def load_dataset(path: str | Path) -> list[DatasetExample]:
    """Load and fully validate a JSONL dataset file."""
    examples: list[DatasetExample] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, "json", str(exc)) from exc
            if not isinstance(obj, dict):
                raise SchemaError(line_no, "json", "expected an object per line")
            example = _parse_example(obj, line_no)
            if example.id in seen:
                raise DuplicateIdError(example.id, line_no)
            seen[example.id] = line_no
            examples.append(example)
    return examples


def write_dataset(examples: Iterable[DatasetExample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(json.dumps(example.to_json_obj(), sort_keys=True))
            handle.write("\n")


def load_outputs(path: str | Path) -> list[ModelOutput]:
    """Load a JSONL file of model outputs ({"example_id", "raw"} per line)."""
    outputs: list[ModelOutput] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, "json", str(exc)) from exc
            if not isinstance(obj, dict):
                raise SchemaError(line_no, "json", "expected an object per line")
            example_id = _require(obj, "example_id", str, line_no)
            raw_text = _require(obj, "raw", str, line_no)
            outputs.append(ModelOutput(example_id=example_id, raw=raw_text))
    return outputs


def write_outputs(outputs: Iterable[ModelOutput], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for output in outputs:
            handle.write(
                json.dumps(
                    {"example_id": output.example_id, "raw": output.raw},
                    sort_keys=True,
                )
            )
            handle.write("\n")


# --------------------------------------------------------------------------
# bundled toy dataset
# --------------------------------------------------------------------------


def _example(
    example_id: str,
    task: TaskType,
    simulator: str,
    characters: tuple[str, ...],
    layers: dict[LayerKind, tuple[str, str]],
) -> DatasetExample:
    return DatasetExample(
        id=example_id,
        task=task,
        simulator=simulator,
        video_ref=f"videos/{example_id}.mp4",
        characters=characters,
        ground_truth={
            layer: GroundTruthLayer(text=text, atoms=atoms)
            for layer, (text, atoms) in layers.items()
        },
    )


def make_toy_dataset() -> list[DatasetExample]:
    """Ten deterministic, hand-authored examples for tests and demos.

    They cover both task types and both simulator tags; every example
    validates cleanly and scores the maximum total reward against itself.
    """
    P, B, D, I, Dc, A = LAYER_ORDER
    examples = [
        _example(
            "fb-apple-fridge", TaskType.FALSE_BELIEF, "virtualhome",
            ("alice", "david"),
            {
                P: (
                    "Alice walks into the kitchen, puts the apple on the table, "
                    "and leaves. David walks in, picks up the apple, and puts it "
                    "in the refrigerator. Alice comes back and walks around.",
                    "walk(alice, kitchen), place(alice, apple, to=table), "
                    "walk(alice, bedroom), walk(david, kitchen), pick(david, apple), "
                    "putin(david, apple, to=fridge), walk(david, bedroom), "
                    "walk(alice, kitchen), turn(alice)",
                ),
                B: (
                    "I think Alice is looking for the apple. I believe she thinks "
                    "the apple is on the table, but I also believe the apple is "
                    "actually in the refrigerator.",
                    "attribute_belief(alice, searching(apple)), "
                    "attribute_belief(alice, human_believes(object_on(table))), "
                    "hold_true_belief(robot, object_on(fridge))",
                ),
                D: (
                    "I want to assist Alice in retrieving the apple and resolve "
                    "the mismatch between her belief and the real world state.",
                    "attribute_desire(robot, assist(alice, find(apple)))",
                ),
                I: (
                    "I want to take the apple out of the fridge and hand it to Alice.",
                    "form_intention(robot, fetch(apple, from=fridge, to=alice))",
                ),
                Dc: (
                    "I need to correct her false belief by opening the refrigerator "
                    "and giving the apple to Alice.",
                    "resolve_misbelief(robot, belief_conflict(alice, object_location)), "
                    "make_decision(robot, fetch(apple, from=fridge, to=alice))",
                ),
                A: (
                    "Walk to the fridge, open it, pick the apple, bring it to Alice.",
                    "walk(fridge), open(fridge), pick(apple), walk(alice)",
                ),
            },
        ),
        _example(
            "ig-fire-hydrant", TaskType.IMPLICIT_GOAL, "threedworld", ("char0",),
            {
                P: (
                    "The man in the wheelchair moves forward, then forward-left, "
                    "backward, and forward-right. A fire hydrant stands in front "
                    "of him.",
                    "move(char0, forward), move(char0, forward_left), "
                    "move(char0, backward), move(char0, forward_right)",
                ),
                B: (
                    "I think the man wants to move forward, but I believe the fire "
                    "hydrant blocks his path.",
                    "attribute_belief(char0, blocked_by(fire_hydrant)), "
                    "hold_true_belief(robot, object_on(path))",
                ),
                D: (
                    "I should help him achieve his goal of moving forward.",
                    "attribute_desire(robot, assist(char0, move(fire_hydrant)))",
                ),
                I: (
                    "Move the fire hydrant to the corner.",
                    "form_intention(robot, fetch(fire_hydrant, from=path, to=corner))",
                ),
                Dc: (
                    "I need to achieve his hidden goal by moving the fire hydrant "
                    "out of the way.",
                    "make_decision(robot, fetch(fire_hydrant, from=path, to=corner))",
                ),
                A: (
                    "Walk to the fire hydrant and move it to the corner.",
                    "walk(fire_hydrant), move(fire_hydrant, corner)",
                ),
            },
        ),
        _example(
            "fb-keys-drawer", TaskType.FALSE_BELIEF, "virtualhome",
            ("char0", "char1"),
            {
                P: (
                    "A woman leaves her keys on the sofa and steps out. Her "
                    "roommate picks the keys up and puts them in the drawer. The "
                    "woman returns and stares at the sofa.",
                    "walk(char0, livingroom), place(char0, keys, to=sofa), "
                    "walk(char0, bathroom), walk(char1, livingroom), "
                    "pick(char1, keys), putin(char1, keys, to=drawer), "
                    "walk(char0, livingroom), lookat(char0, sofa)",
                ),
                B: (
                    "I think she is looking for the keys. She believes they are "
                    "still on the sofa; I know they are in the drawer.",
                    "attribute_belief(char0, searching(keys)), "
                    "attribute_belief(char0, human_believes(object_on(sofa))), "
                    "hold_true_belief(robot, object_on(drawer))",
                ),
                D: (
                    "I want to help her find the keys and clear up the confusion.",
                    "attribute_desire(robot, assist(char0, find(keys)))",
                ),
                I: (
                    "Take the keys out of the drawer and hand them over.",
                    "form_intention(robot, fetch(keys, from=drawer, to=char0))",
                ),
                Dc: (
                    "I will correct her false belief by fetching the keys from "
                    "the drawer.",
                    "resolve_misbelief(robot, belief_conflict(char0, object_location)), "
                    "make_decision(robot, fetch(keys, from=drawer, to=char0))",
                ),
                A: (
                    "Walk to the drawer, open it, pick the keys, bring them to her.",
                    "walk(drawer), open(drawer), pick(keys), walk(char0)",
                ),
            },
        ),
        _example(
            "ig-faucet", TaskType.IMPLICIT_GOAL, "threedworld", ("char0",),
            {
                P: (
                    "A man washes his hands, leaves the faucet running, and walks "
                    "off to the bedroom.",
                    "walk(char0, sink), switchon(char0, faucet), walk(char0, bedroom)",
                ),
                B: (
                    "He does not realize the faucet is still running; I can see "
                    "the water flowing.",
                    "lack_belief(char0, faucet_running), "
                    "hold_true_belief(robot, faucet_running)",
                ),
                D: (
                    "I want to stop the water from being wasted for him.",
                    "attribute_desire(robot, assist(char0, stop(faucet)))",
                ),
                I: (
                    "Turn the faucet off.",
                    "form_intention(robot, switchoff(faucet))",
                ),
                Dc: (
                    "I will switch off the faucet he left running.",
                    "make_decision(robot, switchoff(faucet))",
                ),
                A: (
                    "Walk to the sink and switch the faucet off.",
                    "walk(sink), switchoff(faucet)",
                ),
            },
        ),
        _example(
            "ig-candle-outage", TaskType.IMPLICIT_GOAL, "virtualhome", ("alice",),
            {
                P: (
                    "Alice reads a book in the armchair when the lights go out. "
                    "She stands up and wanders, opening and closing the kitchen "
                    "cabinet.",
                    "sit(alice, chair), read(alice, book), standup(alice), "
                    "walk(alice, kitchen), open(alice, cabinet), "
                    "close(alice, cabinet), walk(alice, livingroom)",
                ),
                B: (
                    "I think she is searching for a candle after the power outage; "
                    "I know the candles are on the shelf.",
                    "attribute_belief(alice, searching(candle)), "
                    "know(robot, object_on(shelf))",
                ),
                D: (
                    "I want to help her get light so she can keep reading.",
                    "attribute_desire(robot, assist(alice, find(candle)))",
                ),
                I: (
                    "Bring a candle from the shelf to Alice.",
                    "form_intention(robot, fetch(candle, from=shelf, to=alice))",
                ),
                Dc: (
                    "I will fetch a candle for her.",
                    "make_decision(robot, fetch(candle, from=shelf, to=alice))",
                ),
                A: (
                    "Walk to the shelf, pick a candle, bring it to Alice.",
                    "walk(shelf), pick(candle), walk(alice)",
                ),
            },
        ),
        _example(
            "ig-knife-carrot", TaskType.IMPLICIT_GOAL, "threedworld", ("char0",),
            {
                P: (
                    "A cook sets a cutting board on the table, puts a carrot on "
                    "it, then rummages through the drawer and turns around.",
                    "walk(char0, kitchen), place(char0, cutting_board, to=table), "
                    "place(char0, carrot, to=cutting_board), open(char0, drawer), "
                    "close(char0, drawer), turn(char0)",
                ),
                B: (
                    "The board and carrot imply cutting; I think he is looking "
                    "for a knife, which I know is on the counter.",
                    "attribute_belief(char0, searching(knife)), "
                    "hold_true_belief(robot, object_on(counter))",
                ),
                D: (
                    "I want to help him finish preparing the carrot.",
                    "attribute_desire(robot, assist(char0, find(knife)))",
                ),
                I: (
                    "Bring him the knife from the counter.",
                    "form_intention(robot, fetch(knife, from=counter, to=char0))",
                ),
                Dc: (
                    "I will fetch the knife so he can cut the carrot.",
                    "make_decision(robot, fetch(knife, from=counter, to=char0))",
                ),
                A: (
                    "Walk to the counter, pick the knife, bring it to the cook.",
                    "walk(counter), pick(knife), walk(char0)",
                ),
            },
        ),
        _example(
            "fb-remote-sofa", TaskType.FALSE_BELIEF, "virtualhome",
            ("bob", "carol"),
            {
                P: (
                    "Bob watches TV and leaves the remote on the sofa before "
                    "heading to the kitchen. Carol tidies up and drops the remote "
                    "in the basket. Bob returns and checks the sofa.",
                    "sit(bob, sofa), watch(bob, tv), place(bob, remote, to=sofa), "
                    "walk(bob, kitchen), walk(carol, livingroom), "
                    "pick(carol, remote), putin(carol, remote, to=basket), "
                    "walk(carol, bedroom), walk(bob, livingroom), lookat(bob, sofa)",
                ),
                B: (
                    "Bob believes the remote is still on the sofa, but Carol moved "
                    "it to the basket.",
                    "attribute_belief(bob, searching(remote)), "
                    "attribute_belief(bob, human_believes(object_on(sofa))), "
                    "hold_true_belief(robot, object_on(basket))",
                ),
                D: (
                    "I want to reunite Bob with the remote and fix his stale belief.",
                    "attribute_desire(robot, assist(bob, find(remote)))",
                ),
                I: (
                    "Fetch the remote from the basket for Bob.",
                    "form_intention(robot, fetch(remote, from=basket, to=bob))",
                ),
                Dc: (
                    "I will correct his false belief by bringing the remote over.",
                    "resolve_misbelief(robot, belief_conflict(bob, object_location)), "
                    "make_decision(robot, fetch(remote, from=basket, to=bob))",
                ),
                A: (
                    "Walk to the basket, pick the remote, bring it to Bob.",
                    "walk(basket), pick(remote), walk(bob)",
                ),
            },
        ),
        _example(
            "ig-child-cereal", TaskType.IMPLICIT_GOAL, "virtualhome", ("child0",),
            {
                P: (
                    "A small child walks into the kitchen, stares up at the cereal "
                    "box on the high shelf, and starts dragging a chair toward it.",
                    "walk(child0, kitchen), lookat(child0, shelf), "
                    "grab(child0, chair), move(child0, chair, to=shelf)",
                ),
                B: (
                    "The child cannot reach the shelf; the chair is a workaround "
                    "for the hidden goal of getting the cereal.",
                    "attribute_belief(child0, unreachable(cereal)), "
                    "know(robot, object_on(shelf))",
                ),
                D: (
                    "I want to get the cereal down safely for the child.",
                    "attribute_desire(robot, assist(child0, move(cereal)))",
                ),
                I: (
                    "Take the cereal off the shelf and hand it down.",
                    "form_intention(robot, fetch(cereal, from=shelf, to=child0))",
                ),
                Dc: (
                    "I will fetch the cereal instead of letting the child climb.",
                    "make_decision(robot, fetch(cereal, from=shelf, to=child0))",
                ),
                A: (
                    "Walk to the shelf, pick the cereal, bring it to the child.",
                    "walk(shelf), pick(cereal), walk(child0)",
                ),
            },
        ),
        _example(
            "fb-dialogue-mug", TaskType.FALSE_BELIEF, "threedworld",
            ("dana", "erik"),
            {
                P: (
                    "Dana parks her mug on the counter and heads to the office. "
                    "Erik clears the mug into the dishwasher. Dana comes back, "
                    "scanning the counter and asking where her mug went.",
                    "walk(dana, kitchen), place(dana, mug, to=counter), "
                    "walk(dana, office), walk(erik, kitchen), pick(erik, mug), "
                    "putin(erik, mug, to=dishwasher), walk(erik, office), "
                    "walk(dana, kitchen), turn(dana)",
                ),
                B: (
                    "Dana believes the mug is on the counter; it is actually in "
                    "the dishwasher.",
                    "attribute_belief(dana, searching(mug)), "
                    "attribute_belief(dana, human_believes(object_on(counter))), "
                    "hold_true_belief(robot, object_on(dishwasher))",
                ),
                D: (
                    "I want to point Dana to her mug and resolve the mix-up.",
                    "attribute_desire(robot, assist(dana, find(mug)))",
                ),
                I: (
                    "Get the mug out of the dishwasher and give it to Dana.",
                    "form_intention(robot, fetch(mug, from=dishwasher, to=dana))",
                ),
                Dc: (
                    "I will correct her belief by retrieving the mug.",
                    "resolve_misbelief(robot, belief_conflict(dana, object_location)), "
                    "make_decision(robot, fetch(mug, from=dishwasher, to=dana))",
                ),
                A: (
                    "Walk to the dishwasher, open it, pick the mug, bring it to Dana.",
                    "walk(dishwasher), open(dishwasher), pick(mug), walk(dana)",
                ),
            },
        ),
        _example(
            "ig-lamp-sleep", TaskType.IMPLICIT_GOAL, "virtualhome", ("frank",),
            {
                P: (
                    "Frank reads in bed, sets the book on the nightstand, and "
                    "drifts off with the lamp still on.",
                    "sit(frank, bed), read(frank, book), "
                    "place(frank, book, to=nightstand), sleep(frank)",
                ),
                B: (
                    "Frank is asleep and unaware the lamp is on; I can see it "
                    "still burning.",
                    "lack_belief(frank, lamp_on), hold_true_belief(robot, lamp_on)",
                ),
                D: (
                    "I want him to sleep undisturbed.",
                    "attribute_desire(robot, assist(frank, sleep))",
                ),
                I: (
                    "Switch the lamp off quietly.",
                    "form_intention(robot, switchoff(lamp))",
                ),
                Dc: (
                    "I will turn the lamp off without waking him.",
                    "make_decision(robot, switchoff(lamp))",
                ),
                A: (
                    "Walk to the lamp and switch it off.",
                    "walk(lamp), switchoff(lamp)",
                ),
            },
        ),
    ]
    return examples
