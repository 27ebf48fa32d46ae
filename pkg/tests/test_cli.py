import json
import subprocess
import sys

import pytest

from mindpower.cli import main
from mindpower.dataset import ModelOutput, write_outputs


@pytest.fixture()
def toy_paths(tmp_path):
    dataset = tmp_path / "toy.jsonl"
    self_outputs = tmp_path / "self.jsonl"
    reward_outputs = tmp_path / "reward.jsonl"
    code = main(
        [
            "toy-dataset",
            "--out", str(dataset),
            "--self-outputs", str(self_outputs),
            "--reward-outputs", str(reward_outputs),
        ]
    )
    assert code == 0
    return dataset, self_outputs, reward_outputs


def test_validate_ok(toy_paths, capsys):
    dataset, _, _ = toy_paths
    assert main(["validate", "--dataset", str(dataset)]) == 0
    out = capsys.readouterr().out
    assert "10 examples valid" in out


def test_validate_rejects_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x"}\n', encoding="utf-8")
    assert main(["validate", "--dataset", str(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_validate_missing_file_exits_2(tmp_path):
    assert main(["validate", "--dataset", str(tmp_path / "nope.jsonl")]) == 2


def test_evaluate_self_score_all_columns_100(toy_paths, tmp_path):
    dataset, self_outputs, _ = toy_paths
    report = tmp_path / "rep"
    code = main(
        [
            "evaluate",
            "--dataset", str(dataset),
            "--outputs", str(self_outputs),
            "--report", str(report),
        ]
    )
    assert code == 0
    obj = json.loads((tmp_path / "rep.json").read_text(encoding="utf-8"))
    assert len(obj["rows"]) == 10
    assert "BPC" not in obj["columns"]
    for column in obj["columns"]:
        assert obj["means"][column] == 100.0
    tsv = (tmp_path / "rep.tsv").read_text(encoding="utf-8")
    assert tsv.splitlines()[-1].startswith("mean\t100.00")


def test_evaluate_report_bytes_stable(toy_paths, tmp_path):
    dataset, self_outputs, _ = toy_paths
    blobs = []
    for name in ("r1", "r2"):
        report = tmp_path / name
        assert main(
            [
                "evaluate",
                "--dataset", str(dataset),
                "--outputs", str(self_outputs),
                "--report", str(report),
            ]
        ) == 0
        blobs.append(
            (
                (tmp_path / f"{name}.tsv").read_bytes(),
                (tmp_path / f"{name}.json").read_bytes(),
            )
        )
    assert blobs[0] == blobs[1]


def test_evaluate_unknown_example_exits_2(toy_paths, tmp_path, capsys):
    dataset, _, _ = toy_paths
    outputs = tmp_path / "bad_outputs.jsonl"
    write_outputs([ModelOutput(example_id="ghost", raw="<Perception>x")], outputs)
    code = main(
        [
            "evaluate",
            "--dataset", str(dataset),
            "--outputs", str(outputs),
            "--report", str(tmp_path / "rep"),
        ]
    )
    assert code == 2
    assert "ghost" in capsys.readouterr().err


def test_evaluate_empty_outputs_ok(toy_paths, tmp_path):
    dataset, _, _ = toy_paths
    outputs = tmp_path / "empty.jsonl"
    outputs.write_text("", encoding="utf-8")
    report = tmp_path / "rep"
    assert main(
        [
            "evaluate",
            "--dataset", str(dataset),
            "--outputs", str(outputs),
            "--report", str(report),
        ]
    ) == 0
    obj = json.loads((tmp_path / "rep.json").read_text(encoding="utf-8"))
    assert obj["rows"] == [] and obj["means"] == {}


def test_evaluate_with_config_switches(toy_paths, tmp_path):
    dataset, self_outputs, _ = toy_paths
    config = tmp_path / "engine.cfg"
    config.write_text(
        "rouge_component = recall\nlayer_mode = concatenated\n"
        "alpha_atomic = 0.2\n# comment\n",
        encoding="utf-8",
    )
    assert main(
        [
            "evaluate",
            "--dataset", str(dataset),
            "--outputs", str(self_outputs),
            "--config", str(config),
            "--report", str(tmp_path / "rep"),
        ]
    ) == 0


def test_bad_config_exits_2(toy_paths, tmp_path):
    dataset, self_outputs, _ = toy_paths
    config = tmp_path / "engine.cfg"
    config.write_text("mystery_knob = 3\n", encoding="utf-8")
    assert main(
        [
            "evaluate",
            "--dataset", str(dataset),
            "--outputs", str(self_outputs),
            "--config", str(config),
            "--report", str(tmp_path / "rep"),
        ]
    ) == 2


def test_reward_stdio_subprocess(toy_paths):
    dataset, _, reward_outputs = toy_paths
    outputs = [
        json.loads(line)
        for line in reward_outputs.read_text(encoding="utf-8").splitlines()
    ]
    requests = []
    for i, output in enumerate(outputs[:3]):
        requests.append(
            json.dumps(
                {
                    "request_id": f"q{i}",
                    "example_id": output["example_id"],
                    "group": [output["raw"], ""],
                }
            )
        )
    proc = subprocess.run(
        [sys.executable, "-m", "mindpower.cli", "reward",
         "--dataset", str(dataset), "--transport", "stdio"],
        input="\n".join(requests) + "\n",
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.splitlines()
    assert len(lines) == 3
    for i, line in enumerate(lines):
        response = json.loads(line)
        assert response["request_id"] == f"q{i}"
        assert [b["total"] for b in response["per_rollout"]] == [2.0, 0.0]
        assert response["advantages"] == [1.0, -1.0]
