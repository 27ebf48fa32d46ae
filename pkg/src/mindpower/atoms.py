"""Atomic-action language: grammar, parser, canonical forms, and matching.

Every reasoning layer is scored as a sequence of atomic items written in a
small functor language, e.g.::

    walk(fridge), open(fridge), pick(apple), walk(alice)
    attribute_belief(char0, human_believes(object_on(table)))
    form_intention(robot, fetch(apple, from=fridge, to=alice))

Physical layers (Perception, Action) hold actions; mental layers (Belief,
Desire, Intention, Decision) hold predicates of the form
``name(agent, content)``. Items are separated by commas, semicolons, or
newlines. Whitespace around parentheses is insignificant: ``open (fridge)``
parses the same as ``open(fridge)``. ``from=``/``to=`` keyword arguments on
actions populate dedicated source/destination slots.

Perspective rules:

* Action-layer items always belong to the embodied agent (robot); they carry
  no character argument.
* Perception-layer items name the acting character as their first argument,
  which is lifted into a human perspective tag.
* Mental predicates name their agent explicitly; the tokens ``robot`` and
  ``self`` denote the embodied agent, anything else a human identifier.

Tokens are canonicalized to lowercase with internal whitespace collapsed to
underscores, and verbs pass through a configurable alias table (by default
only ``pick_up -> pick``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import DslSyntaxError, LayerMismatchError
from .hierarchy import MENTAL_LAYERS, LayerKind

#: Verbs executable by humanoid/embodied agents in the physical layers.
PHYSICAL_VERBS = frozenset(
    {
        "walk", "turn", "sit", "standup", "open", "close", "pick", "place",
        "putin", "putback", "hold", "puton", "switchon", "switchoff",
        "lookat", "grab", "stand", "move", "sleep", "read", "write",
        "watch", "listen", "cut", "cook",
    }
)

#: Mental predicates, keyed by the layer they canonically belong to.
MENTAL_PREDICATES_BY_LAYER: Mapping[LayerKind, frozenset[str]] = {
    LayerKind.Belief: frozenset(
        {"attribute_belief", "hold_true_belief", "lack_belief", "know", "unknow"}
    ),
    LayerKind.Desire: frozenset({"attribute_desire"}),
    LayerKind.Intention: frozenset({"form_intention"}),
    LayerKind.Decision: frozenset({"resolve_misbelief", "make_decision"}),
}

MENTAL_PREDICATES = frozenset().union(*MENTAL_PREDICATES_BY_LAYER.values())

#: Default verb alias table; both spellings of "pick" circulate in traces.
DEFAULT_ALIASES: Mapping[str, str] = {"pick_up": "pick"}

#: Agent tokens that denote the embodied agent rather than a human.
ROBOT_TOKENS = frozenset({"robot", "self"})

#: Deepest allowed term nesting, e.g. human_believes(object_on(location)).
MAX_TERM_DEPTH = 4


@dataclass(frozen=True)
class Perspective:
    """Owner of an action or mental state: a named human, or the robot."""

    human: str | None = None

    @property
    def is_robot(self) -> bool:
        return self.human is None

    def token(self) -> str:
        return "robot" if self.human is None else self.human


ROBOT = Perspective()


def human(identifier: str) -> Perspective:
    identifier = _normalize_token(identifier)
    if not identifier:
        raise ValueError("human identifier must be a non-empty token")
    return Perspective(human=identifier)


@dataclass(frozen=True)
class Term:
    """Recursive term: an atom (no args) or a compound ``functor(args...)``."""

    functor: str
    args: tuple["Term", ...] = ()

    @property
    def is_atom(self) -> bool:
        return not self.args

    def depth(self) -> int:
        if not self.args:
            return 1
        return 1 + max(arg.depth() for arg in self.args)

    def render(self) -> str:
        if not self.args:
            return self.functor
        # Single-argument from/to wrappers render in keyword form so nested
        # fetch(obj, from=a, to=b) terms round-trip.
        if self.functor in ("from", "to") and len(self.args) == 1:
            return f"{self.functor}={self.args[0].render()}"
        return f"{self.functor}({', '.join(arg.render() for arg in self.args)})"


def atom(token: str) -> Term:
    return Term(_normalize_token(token))


@dataclass(frozen=True)
class AtomicAction:
    """One physical action: verb, owner perspective, arguments, motion slots."""

    verb: str
    perspective: Perspective = ROBOT
    args: tuple[Term, ...] = ()
    from_loc: Term | None = None
    to_loc: Term | None = None

    def render(self, layer: LayerKind) -> str:
        parts: list[str] = []
        if layer == LayerKind.Perception and not self.perspective.is_robot:
            parts.append(self.perspective.token())
        parts.extend(arg.render() for arg in self.args)
        if self.from_loc is not None:
            parts.append(f"from={self.from_loc.render()}")
        if self.to_loc is not None:
            parts.append(f"to={self.to_loc.render()}")
        return f"{self.verb}({', '.join(parts)})"


@dataclass(frozen=True)
class MentalPredicate:
    """One mental-state item: ``name(agent, content)``."""

    name: str
    agent: Perspective
    content: Term

    def render(self, layer: LayerKind) -> str:  # layer kept for a uniform API
        return f"{self.name}({self.agent.token()}, {self.content.render()})"


AtomicItem = Union[AtomicAction, MentalPredicate]


@dataclass(frozen=True)
class AtomicSequence:
    """Ordered items of one layer."""

    layer: LayerKind
    items: tuple[AtomicItem, ...] = ()

    def __len__(self) -> int:
        return len(self.items)

    def render(self) -> str:
        return render_sequence(self)


def render_sequence(seq: AtomicSequence) -> str:
    """Canonical textual form; parse_atomic(render(seq)) reproduces seq."""
    return ", ".join(item.render(seq.layer) for item in seq.items)


# --------------------------------------------------------------------------
# tokenizing / parsing
# --------------------------------------------------------------------------

_DELIMS = "(),=;\n\r"
_SEPARATORS = ",;\n"


def _normalize_token(raw: str) -> str:
    # lowercase, trim, collapse internal whitespace runs to single underscores
    return "_".join(raw.strip().lower().split())


class _Scanner:
    """Recursive-descent reader for the functor language.

    Produces generic ``(functor, args, kwargs)`` call nodes; layer-specific
    interpretation happens afterwards. All failure paths raise
    DslSyntaxError with the source offset, so arbitrary byte strings either
    parse or fail cleanly.
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> DslSyntaxError:
        return DslSyntaxError(self.pos if pos is None else pos, message)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self, include_newlines: bool) -> None:
        ws = " \t\f\v" + ("\n\r" if include_newlines else "")
        while not self.at_end() and self.text[self.pos] in ws:
            self.pos += 1

    def read_token(self) -> str:
        # A token may contain internal spaces ("fire hydrant"); they collapse
        # to underscores. Delimiters terminate it.
        start = self.pos
        while not self.at_end() and self.text[self.pos] not in _DELIMS:
            self.pos += 1
        return _normalize_token(self.text[start : self.pos])

    def parse_term(self, depth: int) -> Term:
        self.skip_ws(include_newlines=depth > 1)
        start = self.pos
        name = self.read_token()
        self.skip_ws(include_newlines=depth > 1)
        if self.peek() == "(":
            if not name:
                raise self.error("empty functor", start)
            if depth >= MAX_TERM_DEPTH:
                raise self.error("term nesting deeper than "
                                 f"{MAX_TERM_DEPTH}", start)
            self.pos += 1  # consume "("
            args = self.parse_term_args(depth + 1)
            if self.peek() != ")":
                raise self.error("unbalanced parenthesis: expected ')'")
            self.pos += 1
            return Term(name, tuple(args))
        if not name:
            raise self.error("expected a term", start)
        return Term(name)

    def parse_term_args(self, depth: int) -> list[Term]:
        args: list[Term] = []
        self.skip_ws(include_newlines=True)
        if self.peek() == ")":
            return args
        while True:
            term = self.parse_term(depth)
            self.skip_ws(include_newlines=True)
            if self.peek() == "=":
                # keyword argument inside a nested term: wrap as key(value)
                self.pos += 1
                value = self.parse_term(depth)
                if not term.is_atom:
                    raise self.error("keyword name must be a plain token")
                term = Term(term.functor, (value,))
                self.skip_ws(include_newlines=True)
            args.append(term)
            if self.peek() == ",":
                self.pos += 1
                continue
            if self.peek() == ")":
                return args
            raise self.error("expected ',' or ')' in argument list")

    def parse_call(self) -> tuple[str, list[Term], dict[str, Term], int]:
        """One top-level item: functor, positional args, from/to keywords."""
        self.skip_ws(include_newlines=False)
        start = self.pos
        name = self.read_token()
        if not name:
            raise self.error("empty functor", start)
        self.skip_ws(include_newlines=False)
        args: list[Term] = []
        kwargs: dict[str, Term] = {}
        if self.peek() == "(":
            self.pos += 1
            self.skip_ws(include_newlines=True)
            if self.peek() != ")":
                while True:
                    self.skip_ws(include_newlines=True)
                    arg_start = self.pos
                    term = self.parse_term(depth=2)
                    self.skip_ws(include_newlines=True)
                    if self.peek() == "=":
                        self.pos += 1
                        if not term.is_atom:
                            raise self.error("keyword name must be a plain token",
                                             arg_start)
                        key = term.functor
                        value = self.parse_term(depth=2)
                        if key in ("from", "to"):
                            if key in kwargs:
                                raise self.error(f"duplicate keyword '{key}'",
                                                 arg_start)
                            kwargs[key] = value
                        else:
                            args.append(Term(key, (value,)))
                        self.skip_ws(include_newlines=True)
                    else:
                        args.append(term)
                    if self.peek() == ",":
                        self.pos += 1
                        continue
                    break
            if self.peek() != ")":
                raise self.error("unbalanced parenthesis: expected ')'")
            self.pos += 1
        return name, args, kwargs, start

    def parse_calls(self) -> list[tuple[str, list[Term], dict[str, Term], int]]:
        calls = []
        while True:
            self.skip_ws(include_newlines=True)
            while not self.at_end() and self.peek() in _SEPARATORS:
                self.pos += 1
                self.skip_ws(include_newlines=True)
            if self.at_end():
                return calls
            calls.append(self.parse_call())
            self.skip_ws(include_newlines=False)
            if self.at_end():
                return calls
            if self.peek() not in _SEPARATORS:
                raise self.error("expected ',' between items")


# --------------------------------------------------------------------------
# layer interpretation
# --------------------------------------------------------------------------


def _agent_perspective(token: str) -> Perspective:
    return ROBOT if token in ROBOT_TOKENS else Perspective(human=token)


def _interpret_physical(
    name: str,
    args: list[Term],
    kwargs: dict[str, Term],
    layer: LayerKind,
    aliases: Mapping[str, str],
) -> AtomicAction:
    if name in MENTAL_PREDICATES:
        raise LayerMismatchError(
            f"mental predicate '{name}' in physical layer {layer.name}"
        )
    verb = aliases.get(name, name)
    perspective = ROBOT
    if layer == LayerKind.Perception and args and args[0].is_atom:
        perspective = _agent_perspective(args[0].functor)
        args = args[1:]
    return AtomicAction(
        verb=verb,
        perspective=perspective,
        args=tuple(args),
        from_loc=kwargs.get("from"),
        to_loc=kwargs.get("to"),
    )


def _interpret_mental(
    name: str,
    args: list[Term],
    kwargs: dict[str, Term],
    layer: LayerKind,
    start: int,
    aliases: Mapping[str, str],
) -> MentalPredicate:
    if name in PHYSICAL_VERBS or aliases.get(name) in PHYSICAL_VERBS:
        raise LayerMismatchError(
            f"physical verb '{name}' in mental layer {layer.name}"
        )
    if kwargs:
        # put from/to back as positional wrappers; mental predicates have no
        # motion slots of their own
        args = args + [Term(key, (value,)) for key, value in kwargs.items()]
    if len(args) != 2 or not args[0].is_atom:
        raise DslSyntaxError(
            start, f"mental predicate '{name}' requires (agent, content)"
        )
    return MentalPredicate(
        name=name, agent=_agent_perspective(args[0].functor), content=args[1]
    )


def parse_atomic(
    text: str,
    layer: LayerKind,
    aliases: Mapping[str, str] = DEFAULT_ALIASES,
) -> AtomicSequence:
    """Parse one layer's atomic-item list into a canonical AtomicSequence.

    Raises DslSyntaxError for malformed text (unbalanced parentheses, empty
    functors, over-deep nesting, malformed mental predicates) and
    LayerMismatchError when an item sits in the wrong layer family. Unknown
    verbs and predicate names parse fine; validate_vocabulary flags them.
    """
    scanner = _Scanner(text)
    calls = scanner.parse_calls()
    items: list[AtomicItem] = []
    for name, args, kwargs, start in calls:
        for term in list(args) + list(kwargs.values()):
            if term.depth() > MAX_TERM_DEPTH:
                raise DslSyntaxError(start, "term nesting deeper than "
                                            f"{MAX_TERM_DEPTH}")
        if layer in MENTAL_LAYERS:
            items.append(_interpret_mental(name, args, kwargs, layer, start, aliases))
        else:
            items.append(_interpret_physical(name, args, kwargs, layer, aliases))
    return AtomicSequence(layer=layer, items=tuple(items))


# --------------------------------------------------------------------------
# canonicalization / matching / vocabulary
# --------------------------------------------------------------------------


def _canon_term(term: Term) -> Term:
    return Term(_normalize_token(term.functor),
                tuple(_canon_term(arg) for arg in term.args))


def _canon_perspective(p: Perspective) -> Perspective:
    if p.human is None:
        return ROBOT
    token = _normalize_token(p.human)
    return ROBOT if token in ROBOT_TOKENS else Perspective(human=token)


def canonicalize(
    seq: AtomicSequence,
    aliases: Mapping[str, str] = DEFAULT_ALIASES,
) -> AtomicSequence:
    """Normalize tokens and resolve verb aliases; idempotent, order-preserving.

    parse_atomic already canonicalizes, so this matters mostly for sequences
    built programmatically.
    """
    items: list[AtomicItem] = []
    for item in seq.items:
        if isinstance(item, AtomicAction):
            verb = _normalize_token(item.verb)
            items.append(
                AtomicAction(
                    verb=aliases.get(verb, verb),
                    perspective=_canon_perspective(item.perspective),
                    args=tuple(_canon_term(a) for a in item.args),
                    from_loc=_canon_term(item.from_loc) if item.from_loc else None,
                    to_loc=_canon_term(item.to_loc) if item.to_loc else None,
                )
            )
        else:
            items.append(
                MentalPredicate(
                    name=_normalize_token(item.name),
                    agent=_canon_perspective(item.agent),
                    content=_canon_term(item.content),
                )
            )
    return AtomicSequence(layer=seq.layer, items=tuple(items))


def atoms_equal(a: AtomicItem, b: AtomicItem) -> bool:
    """Exact-match unit used by all reward and metric computation.

    True iff the items are the same kind, the verb/predicate name matches,
    the perspective matches, and every term (args, from/to, content) is
    structurally equal. Both items are assumed canonical.
    """
    if type(a) is not type(b):
        return False
    return a == b


def validate_vocabulary(seq: AtomicSequence) -> list[str]:
    """Warn (never fail) about verbs/predicates outside the registered sets.

    Unknown names still score; they simply never match ground truth.
    """
    warnings: list[str] = []
    for i, item in enumerate(seq.items):
        if isinstance(item, AtomicAction):
            if item.verb not in PHYSICAL_VERBS:
                warnings.append(
                    f"item {i}: verb '{item.verb}' is not a registered "
                    f"executable verb"
                )
        else:
            if item.name not in MENTAL_PREDICATES:
                warnings.append(
                    f"item {i}: '{item.name}' is not a registered mental predicate"
                )
    return warnings


def sequences_from_texts(
    texts: Mapping[LayerKind, str],
    aliases: Mapping[str, str] = DEFAULT_ALIASES,
) -> dict[LayerKind, AtomicSequence]:
    """Parse a whole per-layer mapping of DSL strings."""
    return {
        layer: parse_atomic(text, layer, aliases) for layer, text in texts.items()
    }
