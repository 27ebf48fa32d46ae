"""ROUGE-1/2/L over sequences of arbitrary comparable items.

The shared scoring kernel: n-gram overlap uses clipped multiset counting
(repeated items legitimately occur in action sequences, e.g. walk, open,
walk), and ROUGE-L uses longest-common-subsequence length. Equality between
items is a pluggable predicate so the same kernel scores atomic actions,
mental predicates, or plain tokens.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

from .errors import InvalidNgramSize

T = TypeVar("T")
EqFn = Callable[[T, T], bool]

#: Component selector values for collapsing a RougeScore to one number.
COMPONENT_F1 = "f1"
COMPONENT_RECALL = "recall"


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


_ZERO = RougeScore(0.0, 0.0, 0.0)
_ONE = RougeScore(1.0, 1.0, 1.0)


def _score(overlap: int, gen_total: int, ref_total: int) -> RougeScore:
    precision = overlap / gen_total if gen_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return RougeScore(precision, recall, f1)


def _seq_equal(a: Sequence[T], b: Sequence[T], eq: EqFn) -> bool:
    return len(a) == len(b) and all(eq(x, y) for x, y in zip(a, b))


def _ngrams(seq: Sequence[T], n: int) -> list[Sequence[T]]:
    return [seq[i : i + n] for i in range(len(seq) - n + 1)]


def rouge_n(
    gen: Sequence[T],
    ref: Sequence[T],
    n: int,
    eq: EqFn = operator.eq,
) -> RougeScore:
    """Clipped n-gram overlap between a generated and a reference sequence.

    overlap = sum over distinct n-grams of min(count in gen, count in ref);
    recall divides by the reference n-gram count, precision by the generated
    one. Sequences too short to form any n-gram fall back to identity: if
    neither side has an n-gram and the sequences are equal, everything is 1;
    otherwise such a pair scores 0.
    """
    if n < 1:
        raise InvalidNgramSize(f"n must be >= 1, got {n}")
    gen = list(gen)
    ref = list(ref)
    gen_grams = _ngrams(gen, n)
    ref_grams = _ngrams(ref, n)

    if not ref_grams:
        return _ONE if not gen_grams and _seq_equal(gen, ref, eq) else _ZERO
    if not gen_grams:
        return _ZERO

    # Clipped multiset intersection under eq: one-to-one greedy matching of
    # reference grams against unconsumed generated grams. For an equivalence
    # relation this equals summing min counts per equality class.
    consumed = [False] * len(gen_grams)
    overlap = 0
    for rg in ref_grams:
        for j, gg in enumerate(gen_grams):
            if not consumed[j] and _seq_equal(rg, gg, eq):
                consumed[j] = True
                overlap += 1
                break
    return _score(overlap, len(gen_grams), len(ref_grams))


def rouge_l(
    gen: Sequence[T],
    ref: Sequence[T],
    eq: EqFn = operator.eq,
) -> RougeScore:
    """Longest-common-subsequence overlap.

    recall = LCS/|ref|, precision = LCS/|gen|. Two empty sequences score 1,
    exactly one empty scores 0.
    """
    gen = list(gen)
    ref = list(ref)
    if not gen and not ref:
        return _ONE
    if not gen or not ref:
        return _ZERO
    lcs = _lcs_length(gen, ref, eq)
    return _score(lcs, len(gen), len(ref))


def _lcs_length(a: Sequence[T], b: Sequence[T], eq: EqFn) -> int:
    # standard O(|a|*|b|) DP, one rolling row
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if eq(x, y):
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[len(b)]


def component(score: RougeScore, mode: str) -> float:
    """Collapse a RougeScore to the configured scalar (f1 by default)."""
    if mode == COMPONENT_F1:
        return score.f1
    if mode == COMPONENT_RECALL:
        return score.recall
    raise ValueError(f"unknown rouge component mode {mode!r}")
