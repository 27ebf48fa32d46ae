"""Client for the reward service's line-delimited JSON protocol.

The service scores groups of rollouts: one request line in, one response
line out, FIFO per connection::

    -> {"request_id": "...", "example_id": "...", "group": ["...", ...]}
    <- {"request_id": "...", "per_rollout": [...], "advantages": [...]}
    <- {"request_id": "...", "error": {"code": "...", "message": "..."}}

The client is deliberately synchronous: reward calls sit on the critical
path of a training step, so a blocking call with a per-call timeout is the
honest contract. One session per training process; sessions are not
thread-safe.

Every call resolves to a response, a ServiceError (the service answered
with an error object), or a Timeout. Timeout also covers a transport that
closed or could not be reached, i.e. every way a response can fail to
arrive.
"""

from __future__ import annotations

import json
import queue
import socket
import subprocess
import threading
import time
from dataclasses import dataclass
from typing import Sequence


class Timeout(Exception):
    """No response arrived: deadline passed, or the transport is gone."""


class ServiceError(Exception):
    """The service replied with an error object."""

    def __init__(self, code: str, message: str) -> None:
        self.code = code
        super().__init__(f"[{code}] {message}")


@dataclass(frozen=True)
class GroupScore:
    """Per-rollout results of one scored group, in rollout order."""

    rewards: list[float]
    advantages: list[float]
    breakdowns: list[dict]


_EOF = object()


class _SubprocessTransport:
    def __init__(self, cmd: Sequence[str]) -> None:
        self.proc = subprocess.Popen(
            list(cmd),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
        )

    def send_line(self, line: str) -> None:
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, ValueError, OSError) as exc:
            raise Timeout(f"service stdin closed: {exc}") from exc

    def readable(self):
        return self.proc.stdout

    def close(self) -> None:
        # Never close stdout here: the reader thread holds its buffer lock
        # while blocked. Ending the process delivers EOF and unblocks it.
        try:
            self.proc.stdin.close()
        except OSError:
            pass
        self.proc.terminate()
        try:
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait(timeout=5)
        try:
            self.proc.stdout.close()
        except OSError:
            pass


class _TcpTransport:
    def __init__(self, host: str, port: int, connect_timeout: float) -> None:
        try:
            self.sock = socket.create_connection((host, port), timeout=connect_timeout)
        except OSError as exc:
            raise Timeout(f"cannot reach service at {host}:{port}: {exc}") from exc
        self.sock.settimeout(None)
        self._reader = self.sock.makefile("r", encoding="utf-8")

    def send_line(self, line: str) -> None:
        try:
            self.sock.sendall((line + "\n").encode("utf-8"))
        except OSError as exc:
            raise Timeout(f"service connection closed: {exc}") from exc

    def readable(self):
        return self._reader

    def close(self) -> None:
        # Shut the socket down instead of closing the makefile: the reader
        # thread holds the file's buffer lock while blocked in recv, and
        # shutdown() is what wakes it with EOF.
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        try:
            self.sock.close()
        except OSError:
            pass


class ClientSession:
    """One connection to a reward service.

    Responses are consumed by a background reader thread and matched to
    requests by request_id; out-of-order responses (which a conforming
    service never produces within one connection) are parked in a pending
    map rather than dropped.
    """

    def __init__(self, transport, timeout: float = 10.0) -> None:
        self._transport = transport
        self.timeout = timeout
        self._lines: queue.Queue = queue.Queue()
        self._pending: dict[str, dict] = {}
        self._counter = 0
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    @classmethod
    def spawn(cls, cmd: Sequence[str], timeout: float = 10.0) -> "ClientSession":
        """Launch the service as a subprocess and talk over its stdio."""
        return cls(_SubprocessTransport(cmd), timeout=timeout)

    @classmethod
    def connect(cls, host: str, port: int, timeout: float = 10.0) -> "ClientSession":
        """Connect to a service listening on TCP."""
        return cls(_TcpTransport(host, port, connect_timeout=timeout), timeout=timeout)

    def _read_loop(self) -> None:
        try:
            for line in self._transport.readable():
                self._lines.put(line)
        except (OSError, ValueError):
            pass
        self._lines.put(_EOF)

    def _next_request_id(self) -> str:
        self._counter += 1
        return f"req-{self._counter}"

    def _recv(self, request_id: str, deadline: float) -> dict:
        if request_id in self._pending:
            return self._pending.pop(request_id)
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise Timeout(f"no response to {request_id} within {self.timeout}s")
            try:
                line = self._lines.get(timeout=remaining)
            except queue.Empty:
                raise Timeout(
                    f"no response to {request_id} within {self.timeout}s"
                ) from None
            if line is _EOF:
                raise Timeout("service closed the connection before responding")
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ServiceError("protocol_error", f"unparseable response: {exc}")
            rid = obj.get("request_id")
            if rid == request_id:
                return obj
            if rid is None:
                error = obj.get("error") or {}
                raise ServiceError(
                    error.get("code", "protocol_error"),
                    error.get("message", "uncorrelated error response"),
                )
            self._pending[rid] = obj

    def score_group(
        self, example_id: str, rollouts: Sequence[str]
    ) -> GroupScore:
        """Score one group of rollouts; results come back in rollout order."""
        if not rollouts:
            raise ValueError("rollouts must not be empty")
        if not all(isinstance(r, str) for r in rollouts):
            raise ValueError("rollouts must be strings")
        request_id = self._next_request_id()
        request = {
            "request_id": request_id,
            "example_id": example_id,
            "group": list(rollouts),
        }
        deadline = time.monotonic() + self.timeout
        self._transport.send_line(json.dumps(request))
        response = self._recv(request_id, deadline)
        if "error" in response:
            error = response["error"]
            raise ServiceError(error.get("code", "Error"), error.get("message", ""))
        breakdowns = response["per_rollout"]
        return GroupScore(
            rewards=[b["total"] for b in breakdowns],
            advantages=list(response["advantages"]),
            breakdowns=list(breakdowns),
        )

    def close(self) -> None:
        self._transport.close()
        self._reader.join(timeout=5)

    def __enter__(self) -> "ClientSession":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
