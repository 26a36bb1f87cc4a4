"""Independent reference implementations used only to cross-check the library.

Everything here is deliberately naive or exhaustively enumerative and stays
decoupled from the code paths under test: Levenshtein is re-derived from the
textbook suffix recursion, clustering quality from raw pair enumeration, and
exemplar clustering from exhaustive subset search.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def levenshtein_recursive(a: str, b: str) -> int:
    """Textbook memoized recursion on string suffixes."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        levenshtein_recursive(a[1:], b) + 1,
        levenshtein_recursive(a, b[1:]) + 1,
        levenshtein_recursive(a[1:], b[1:]) + (a[0] != b[0]),
    )


def all_strings(alphabet: str, max_len: int) -> list[str]:
    """Every string over ``alphabet`` of length 0..max_len, shortest first."""
    out = [""]
    for length in range(1, max_len + 1):
        out.extend("".join(t) for t in itertools.product(alphabet, repeat=length))
    return out


def levenshtein_table(strings: list[str]) -> np.ndarray:
    """Distances between all pairs of ``strings``, by evaluating the suffix
    recursion bottom-up over a table indexed by suffix id.

    ``strings`` must be closed under taking suffixes (as ``all_strings``
    output is) and sorted shortest first.  Independent of the library's
    prefix-DP formulation: the recurrence runs over suffix ids via gathers.
    """
    index = {s: i for i, s in enumerate(strings)}
    n = len(strings)
    tail = np.array([index[s[1:]] if s else 0 for s in strings], dtype=np.int64)
    head = np.array([ord(s[0]) if s else -1 for s in strings], dtype=np.int64)
    lengths = np.array([len(s) for s in strings], dtype=np.int64)

    table = np.zeros((n, n), dtype=np.int64)
    ids_by_len = {la: np.flatnonzero(lengths == la) for la in np.unique(lengths)}
    max_len = int(lengths.max())
    for la in range(max_len + 1):
        for lb in range(max_len + 1):
            ra, rb = ids_by_len[la], ids_by_len[lb]
            if la == 0:
                table[np.ix_(ra, rb)] = lb
                continue
            if lb == 0:
                table[np.ix_(ra, rb)] = la
                continue
            ta, tb = tail[ra], tail[rb]
            drop_a = table[np.ix_(ta, rb)] + 1
            drop_b = table[np.ix_(ra, tb)] + 1
            drop_both = table[np.ix_(ta, tb)] + (
                head[ra][:, None] != head[rb][None, :]
            )
            table[np.ix_(ra, rb)] = np.minimum(
                np.minimum(drop_a, drop_b), drop_both
            )
    return table


def jaro_by_formula(m: int, t: int, len1: int, len2: int) -> float:
    """Direct evaluation of the Jaro equation for given counts."""
    if m == 0:
        return 0.0
    return (m / len1 + m / len2 + (m - t) / m) / 3.0


def pair_counts_by_enumeration(predicted, truth):
    """(tp, fp, tn, fn) over every unordered token pair, one pair at a time."""
    pred_label = {tok: i for i, cluster in enumerate(predicted) for tok in cluster}
    true_label = {tok: i for i, cluster in enumerate(truth) for tok in cluster}
    assert set(pred_label) == set(true_label)
    tokens = sorted(pred_label)
    tp = fp = tn = fn = 0
    for x, y in itertools.combinations(tokens, 2):
        same_pred = pred_label[x] == pred_label[y]
        same_true = true_label[x] == true_label[y]
        if same_pred and same_true:
            tp += 1
        elif same_pred and not same_true:
            fp += 1
        elif not same_pred and same_true:
            fn += 1
        else:
            tn += 1
    return tp, fp, tn, fn


def ari_from_pair_counts(tp: int, fp: int, tn: int, fn: int) -> float:
    """Adjusted Rand index in its pair-counting form.

    Degenerate denominators (both partitions all-singletons or both
    one-cluster) collapse to 1.0 when the counts agree perfectly, else 0.0.
    """
    numerator = 2.0 * (tp * tn - fn * fp)
    denominator = (tp + fn) * (fn + tn) + (tp + fp) * (fp + tn)
    if denominator == 0:
        return 1.0 if fp == 0 and fn == 0 else 0.0
    return numerator / denominator


def set_partitions(items: list):
    """All partitions of ``items`` into non-empty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[head] + smaller[i]] + smaller[i + 1 :]
        yield [[head]] + smaller


def net_similarity(sim: np.ndarray, exemplar_of) -> float:
    """Score of an assignment: each point's similarity to its exemplar
    (exemplars contribute their diagonal preference)."""
    return float(sum(sim[i, int(k)] for i, k in enumerate(exemplar_of)))


def best_exemplar_partitions(sim: np.ndarray) -> tuple[float, set[frozenset[frozenset[int]]]]:
    """Exhaustive search over exemplar subsets maximizing net similarity.

    Net similarity of an exemplar set E: every exemplar contributes its
    diagonal entry, every other point the best similarity to a member of E.
    Returns the optimum and every partition achieving it (points grouped by
    their best exemplar, ties to the lowest exemplar index).
    """
    n = sim.shape[0]
    best_score = -np.inf
    best: set[frozenset[frozenset[int]]] = set()
    for size in range(1, n + 1):
        for exemplars in itertools.combinations(range(n), size):
            score = sum(sim[k, k] for k in exemplars)
            assign = {k: k for k in exemplars}
            for i in range(n):
                if i in assign:
                    continue
                k_best = max(exemplars, key=lambda k: (sim[i, k], -k))
                score += sim[i, k_best]
                assign[i] = k_best
            groups: dict[int, set[int]] = {}
            for i, k in assign.items():
                groups.setdefault(k, set()).add(i)
            partition = frozenset(frozenset(g) for g in groups.values())
            if score > best_score + 1e-9:
                best_score = score
                best = {partition}
            elif abs(score - best_score) <= 1e-9:
                best.add(partition)
    return best_score, best
