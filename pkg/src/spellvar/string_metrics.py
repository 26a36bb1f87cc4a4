"""String distance and similarity kernels.

Levenshtein distance feeds the clustering similarity matrix; Jaro-Winkler
similarity drives the post-clustering threshold filter.  All functions are
pure and operate on Unicode scalar values of already-normalized strings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "JaroBreakdown",
    "WinklerParams",
    "levenshtein",
    "levenshtein_matrix",
    "jaro_breakdown",
    "jaro",
    "jaro_winkler",
]


@dataclass(frozen=True)
class JaroBreakdown:
    """Ingredients of a Jaro similarity: match and transposition counts.

    ``transpositions`` is half the number of matched-but-out-of-order
    character pairs, rounded down.
    """

    matches: int
    transpositions: int
    len1: int
    len2: int

    def __post_init__(self) -> None:
        if self.matches > min(self.len1, self.len2):
            raise ValueError("matches cannot exceed the shorter string length")
        if self.transpositions > self.matches:
            raise ValueError("transpositions cannot exceed matches")

    def similarity(self) -> float:
        """Evaluate the Jaro formula for these counts (0.0 when no matches)."""
        m = self.matches
        if m == 0:
            return 0.0
        t = self.transpositions
        return (m / self.len1 + m / self.len2 + (m - t) / m) / 3.0


@dataclass(frozen=True)
class WinklerParams:
    """Prefix-boost parameters: scale per prefix character and prefix cap."""

    prefix_scale: float = 0.1
    max_prefix: int = 4

    def __post_init__(self) -> None:
        if not 0.0 <= self.prefix_scale <= 0.25:
            raise ValueError("prefix_scale must lie in [0, 0.25]")
        if self.max_prefix < 1:
            raise ValueError("max_prefix must be a positive integer")
        if self.prefix_scale * self.max_prefix > 1.0:
            raise ValueError("prefix_scale * max_prefix must not exceed 1")


DEFAULT_WINKLER = WinklerParams()


def levenshtein(a: str, b: str) -> int:
    """Minimum number of insertions, deletions and substitutions turning
    ``a`` into ``b``.

    Examples:
        >>> levenshtein("kitten", "sitting")
        3
        >>> levenshtein("", "abc")
        3
    """
    if a == b:
        return 0
    # Keep b the shorter string: the DP rows have len(b) + 1 entries.
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)

    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        append = current.append
        for j, cb in enumerate(b, start=1):
            append(
                min(
                    previous[j] + 1,  # delete from a
                    current[j - 1] + 1,  # insert into a
                    previous[j - 1] + (ca != cb),  # substitute / match
                )
            )
        previous = current
    return previous[-1]


def levenshtein_matrix(words: list[str]) -> np.ndarray:
    """All-pairs Levenshtein distances, vectorized over the pair axis.

    Words are bucketed by length; for each length pair the classic row-wise
    DP advances simultaneously for every word pair in the bucket, so the
    Python-level loop is O(max_len^2) instead of O(n^2 * max_len^2).
    Returns an int64 matrix D with D[i, j] = levenshtein(words[i], words[j]).
    """
    n = len(words)
    dist = np.zeros((n, n), dtype=np.int64)
    if n < 2:
        return dist

    max_len = max(len(w) for w in words)
    # Code points, padded with -1 (never equal to a real character).
    codes = np.full((n, max_len), -1, dtype=np.int32)
    lengths = np.empty(n, dtype=np.int64)
    for i, w in enumerate(words):
        lengths[i] = len(w)
        if w:
            codes[i, : len(w)] = [ord(c) for c in w]

    by_len: dict[int, np.ndarray] = {
        la: np.flatnonzero(lengths == la) for la in np.unique(lengths)
    }
    for la, rows in by_len.items():
        for lb, cols in by_len.items():
            if lb < la:
                continue  # filled by symmetry below
            if la == 0:
                dist[np.ix_(rows, cols)] = lb
                if lb > 0:
                    dist[np.ix_(cols, rows)] = lb
                continue
            a = codes[rows][:, :la]  # (n1, la)
            b = codes[cols][:, :lb]  # (n2, lb)
            n1, n2 = len(rows), len(cols)
            # Two DP rows, laid out as (lb + 1) contiguous (n1, n2) slabs so
            # every update streams over whole slabs.  Distances fit int16.
            prev = np.empty((lb + 1, n1, n2), dtype=np.int16)
            cur = np.empty_like(prev)
            scratch = np.empty((n1, n2), dtype=np.int16)
            for j in range(lb + 1):
                prev[j] = j
            for i in range(1, la + 1):
                cur[0] = i
                ai = a[:, i - 1][:, None]  # (n1, 1) broadcast over n2
                for j in range(1, lb + 1):
                    np.add(
                        prev[j - 1],
                        ai != b[None, :, j - 1],
                        out=cur[j],
                        casting="unsafe",
                    )
                    np.add(prev[j], 1, out=scratch)
                    np.minimum(cur[j], scratch, out=cur[j])
                    np.add(cur[j - 1], 1, out=scratch)
                    np.minimum(cur[j], scratch, out=cur[j])
                prev, cur = cur, prev
            block = prev[lb]
            dist[np.ix_(rows, cols)] = block
            if lb > la:
                dist[np.ix_(cols, rows)] = block.T
    return dist


def _common_prefix_len(a: str, b: str, cap: int) -> int:
    n = 0
    for ca, cb in zip(a, b):
        if ca != cb or n >= cap:
            break
        n += 1
    return n


def jaro_breakdown(a: str, b: str) -> JaroBreakdown:
    """Count matches and transpositions between ``a`` and ``b``.

    Characters match when equal and within a sliding window of
    ``floor(max(|a|, |b|) / 2) - 1`` positions (never negative).  Each
    character of ``b`` is consumed by at most one match.
    """
    len1, len2 = len(a), len(b)
    if len1 == 0 or len2 == 0:
        return JaroBreakdown(0, 0, len1, len2)

    window = max(max(len1, len2) // 2 - 1, 0)
    b_taken = [False] * len2
    a_hits: list[int] = []
    b_hits: list[int] = []
    for i, ca in enumerate(a):
        lo = max(0, i - window)
        hi = min(i + window + 1, len2)
        for j in range(lo, hi):
            if not b_taken[j] and ca == b[j]:
                b_taken[j] = True
                a_hits.append(i)
                b_hits.append(j)
                break

    m = len(a_hits)
    if m == 0:
        return JaroBreakdown(0, 0, len1, len2)
    # Matched characters, each side read in its own string order.
    b_hits.sort()
    out_of_order = sum(a[i] != b[j] for i, j in zip(a_hits, b_hits))
    return JaroBreakdown(m, out_of_order // 2, len1, len2)


def jaro(a: str, b: str) -> float:
    """Jaro similarity in [0, 1]; 1.0 iff the strings are equal."""
    if a == b:
        return 1.0
    return jaro_breakdown(a, b).similarity()


def jaro_winkler(a: str, b: str, params: WinklerParams = DEFAULT_WINKLER) -> float:
    """Jaro similarity boosted by the shared prefix:
    ``sim_j + l * p * (1 - sim_j)`` with ``l`` capped at ``params.max_prefix``.
    """
    sim_j = jaro(a, b)
    if sim_j == 0.0:
        return 0.0
    prefix = _common_prefix_len(a, b, params.max_prefix)
    return sim_j + prefix * params.prefix_scale * (1.0 - sim_j)
