"""Integration tests against a live reward service.

The service is always driven through its external surfaces: the CLI to
produce the toy dataset and the newline-delimited JSON protocol to score.
"""

import json
import random
import socket
import string
import subprocess
import sys
import threading
import time

import pytest

from trainer_client import ClientSession, ServiceError, Timeout

SERVICE_CMD = [sys.executable, "-m", "mindpower.cli", "reward", "--transport", "stdio"]


@pytest.fixture(scope="session")
def toy_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("toy")
    dataset = root / "toy.jsonl"
    reward_outputs = root / "reward.jsonl"
    subprocess.run(
        [
            sys.executable, "-m", "mindpower.cli", "toy-dataset",
            "--out", str(dataset),
            "--reward-outputs", str(reward_outputs),
        ],
        check=True,
        capture_output=True,
        timeout=60,
    )
    perfect = {}
    for line in reward_outputs.read_text(encoding="utf-8").splitlines():
        obj = json.loads(line)
        perfect[obj["example_id"]] = obj["raw"]
    return dataset, perfect


@pytest.fixture()
def session(toy_files):
    dataset, _ = toy_files
    client = ClientSession.spawn(
        SERVICE_CMD + ["--dataset", str(dataset)], timeout=30
    )
    yield client
    client.close()


def test_perfect_and_empty_pair(session, toy_files):
    _, perfect = toy_files
    example_id, raw = next(iter(perfect.items()))
    result = session.score_group(example_id, [raw, ""])
    assert result.rewards == [2.0, 0.0]
    assert result.advantages == [1.0, -1.0]
    assert result.breakdowns[0]["r_format"] == 1
    assert result.breakdowns[1]["r_format"] == 0
    print("ACCEPTANCE trainer-client-integration: PASS")


def test_sequential_calls_correlate(session, toy_files):
    _, perfect = toy_files
    for example_id, raw in list(perfect.items())[:5]:
        result = session.score_group(example_id, [raw])
        assert result.rewards == [2.0]
        assert result.advantages == [0.0]


def test_service_error_is_relayed(session):
    with pytest.raises(ServiceError) as err:
        session.score_group("no-such-example", ["x"])
    assert err.value.code == "UnknownExample"


def test_empty_rollout_list_fails_locally(session):
    with pytest.raises(ValueError):
        session.score_group("anything", [])


def test_wire_fidelity_fuzz(session, toy_files):
    _, perfect = toy_files
    example_id = next(iter(perfect))
    rng = random.Random(0xC11E17)
    alphabet = string.printable  # includes newlines, quotes, backslashes
    responses = 0
    for _ in range(100):
        rollout = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        result = session.score_group(example_id, [rollout])
        assert len(result.rewards) == 1
        responses += 1
    assert responses == 100


def test_tcp_transport(toy_files):
    dataset, perfect = toy_files
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "mindpower.cli", "reward",
            "--dataset", str(dataset),
            "--transport", "tcp", "--host", "127.0.0.1", "--port", "0",
        ],
        stderr=subprocess.PIPE,
        text=True,
    )
    try:
        banner = proc.stderr.readline()  # "serving on 127.0.0.1:PORT"
        port = int(banner.rsplit(":", 1)[1])
        with ClientSession.connect("127.0.0.1", port, timeout=30) as client:
            example_id, raw = next(iter(perfect.items()))
            result = client.score_group(example_id, [raw, ""])
            assert result.rewards == [2.0, 0.0]
            assert result.advantages == [1.0, -1.0]
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def test_timeout_against_stopped_service(toy_files):
    dataset, perfect = toy_files
    client = ClientSession.spawn(
        SERVICE_CMD + ["--dataset", str(dataset)], timeout=2
    )
    try:
        client._transport.proc.kill()
        client._transport.proc.wait(timeout=10)
        example_id = next(iter(perfect))
        with pytest.raises(Timeout):
            client.score_group(example_id, ["x"])
        print("ACCEPTANCE trainer-client-timeout: PASS")
    finally:
        client.close()


def test_timeout_against_silent_server():
    listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    listener.bind(("127.0.0.1", 0))
    listener.listen(1)
    port = listener.getsockname()[1]
    accepted = []

    def accept_and_hold():
        try:
            conn, _ = listener.accept()
            accepted.append(conn)  # keep open, never reply
        except OSError:
            pass

    holder = threading.Thread(target=accept_and_hold, daemon=True)
    holder.start()
    try:
        client = ClientSession.connect("127.0.0.1", port, timeout=0.5)
        started = time.monotonic()
        with pytest.raises(Timeout):
            client.score_group("whatever", ["x"])
        assert time.monotonic() - started >= 0.4
        client.close()
    finally:
        for conn in accepted:
            conn.close()
        listener.close()


def test_timeout_when_nothing_listens():
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.bind(("127.0.0.1", 0))
    free_port = probe.getsockname()[1]
    probe.close()
    with pytest.raises(Timeout):
        ClientSession.connect("127.0.0.1", free_port, timeout=1.0)
