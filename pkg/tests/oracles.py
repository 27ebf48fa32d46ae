"""Independent brute-force implementations used to cross-check the library.

These deliberately share no code with the package: n-gram overlap counts
multisets with collections.Counter over hashable tuples, and the
common-subsequence search enumerates subsequences explicitly (fine for the
short sequences the checks use).
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def ngram_scores(gen, ref, n):
    """(precision, recall, f1) by explicit clipped multiset counting."""
    gen_grams = [tuple(gen[i : i + n]) for i in range(len(gen) - n + 1)]
    ref_grams = [tuple(ref[i : i + n]) for i in range(len(ref) - n + 1)]
    if not ref_grams:
        if not gen_grams and list(gen) == list(ref):
            return (1.0, 1.0, 1.0)
        return (0.0, 0.0, 0.0)
    if not gen_grams:
        return (0.0, 0.0, 0.0)
    gen_counts = Counter(gen_grams)
    overlap = sum(min(gen_counts[g], c) for g, c in Counter(ref_grams).items())
    precision = overlap / len(gen_grams)
    recall = overlap / len(ref_grams)
    return (precision, recall, _f1(precision, recall))


def _is_subsequence(candidate, seq) -> bool:
    it = iter(seq)
    return all(any(x == y for y in it) for x in candidate)


def lcs_by_enumeration(gen, ref) -> int:
    """LCS length by trying every subsequence of gen, longest first."""
    gen = tuple(gen)
    ref = tuple(ref)
    for size in range(min(len(gen), len(ref)), 0, -1):
        for idxs in combinations(range(len(gen)), size):
            if _is_subsequence(tuple(gen[i] for i in idxs), ref):
                return size
    return 0


def lcs_scores(gen, ref):
    """(precision, recall, f1) from the enumerated LCS length."""
    if not gen and not ref:
        return (1.0, 1.0, 1.0)
    if not gen or not ref:
        return (0.0, 0.0, 0.0)
    lcs = lcs_by_enumeration(gen, ref)
    precision = lcs / len(gen)
    recall = lcs / len(ref)
    return (precision, recall, _f1(precision, recall))
