"""Exception taxonomy shared across the package.

Every error carries a short machine-readable ``code`` so the streaming
service can echo it on the wire without string-munging class names.
"""

from __future__ import annotations


class MindPowerError(Exception):
    """Base class for all package errors."""

    code = "Error"


class DuplicateLayerError(MindPowerError):
    """A reasoning-layer tag occurred more than once in a trace."""

    code = "DuplicateLayer"

    def __init__(self, kind) -> None:
        self.kind = kind
        super().__init__(f"duplicate <{kind.name}> tag")


class DslSyntaxError(MindPowerError):
    """Atomic-action text is not syntactically valid DSL."""

    code = "SyntaxError"

    def __init__(self, position: int, message: str) -> None:
        self.position = position
        super().__init__(f"at offset {position}: {message}")


class LayerMismatchError(MindPowerError):
    """A mental predicate in a physical layer, or a physical verb in a mental layer."""

    code = "LayerMismatch"


class InvalidNgramSize(MindPowerError, ValueError):
    code = "InvalidN"


class EmptyReferenceError(MindPowerError):
    code = "EmptyReference"


class EmptyGroupError(MindPowerError):
    code = "EmptyGroup"


class SchemaError(MindPowerError):
    """A dataset/outputs/config file violates its documented schema."""

    code = "SchemaError"

    def __init__(self, line: int, field: str, message: str = "") -> None:
        self.line = line
        self.field = field
        detail = f": {message}" if message else ""
        super().__init__(f"line {line}, field {field!r}{detail}")


class RequestError(MindPowerError):
    """A service request object violates the wire schema."""

    code = "SchemaError"


class AtomParseError(MindPowerError):
    """Ground-truth atoms failed to parse while loading a dataset."""

    code = "AtomParseError"

    def __init__(self, line: int, layer, position: int, message: str) -> None:
        self.line = line
        self.layer = layer
        self.position = position
        super().__init__(
            f"line {line}, layer {layer.name}, offset {position}: {message}"
        )


class DuplicateIdError(MindPowerError):
    code = "DuplicateId"

    def __init__(self, example_id: str, line: int) -> None:
        self.example_id = example_id
        self.line = line
        super().__init__(f"duplicate example id {example_id!r} (line {line})")


class UnknownExampleError(MindPowerError):
    code = "UnknownExample"

    def __init__(self, example_id: str) -> None:
        self.example_id = example_id
        super().__init__(f"unknown example id {example_id!r}")


class JudgeUnavailableError(MindPowerError):
    code = "JudgeUnavailable"


class JudgeMalformedReplyError(MindPowerError):
    code = "JudgeMalformedReply"

    def __init__(self, raw: str) -> None:
        self.raw = raw
        super().__init__(f"judge reply is not a 0-10 score: {raw!r}")
