"""End-to-end clustering of raw phrases.

Stages: normalize each phrase to a clustering key, deduplicate, partition by
first letter, cluster every partition with affinity propagation, keep only
members that clear the Jaro-Winkler threshold against their exemplar, and
re-run the rejected remainder for the configured number of passes.  Partitions
are independent work units; results merge into one cluster book.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .affinity import ApConfig, ExemplarAssignment, run_affinity_propagation
from .errors import EmptyInputError
from .string_metrics import WinklerParams, jaro_winkler

__all__ = [
    "Token",
    "PipelineConfig",
    "ClusterBook",
    "normalize",
    "partition",
    "threshold_filter",
    "run_pipeline",
]

_DIGITS = re.compile(r"\d+")


@dataclass(frozen=True)
class Token:
    """A deduplicated clustering unit: normalized key plus its source phrase.

    When several raw phrases normalize to the same key, one token survives
    with ``raw`` set to the lexicographically smallest phrase.
    """

    id: int
    raw: str
    normalized: str


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline knobs with the defaults used throughout.

    ``damping`` takes precedence over ``ap.damping`` when the solver runs, so
    the headline knob can be set without rebuilding the nested config.
    """

    damping: float = 0.65
    jw_threshold: float = 0.95
    passes: int = 2
    partition_by_first_letter: bool = True
    stopwords: frozenset[str] = frozenset()
    winkler: WinklerParams = WinklerParams()
    ap: ApConfig = ApConfig()

    def __post_init__(self) -> None:
        if not 0.0 <= self.jw_threshold <= 1.0:
            raise ValueError("jw_threshold must lie in [0, 1]")
        if self.passes < 1:
            raise ValueError("passes must be at least 1")

    def solver_config(self) -> ApConfig:
        return replace(self.ap, damping=self.damping)


@dataclass(frozen=True)
class ClusterBook:
    """Final clustering: exemplar key to sorted member keys, raw phrases per
    clustered member, and the tokens no pass managed to place."""

    clusters: dict[str, list[str]]
    raws: dict[str, list[str]]
    unclustered: list[str]

    def clustered_count(self) -> int:
        return sum(len(members) for members in self.clusters.values())


def normalize(phrase: str, stopwords: Iterable[str] = ()) -> str | None:
    """Clean a phrase into its clustering key, or None if nothing remains.

    Lowercases, deletes digit runs, drops abbreviations (single letters, or
    words that reduce to at most two letters once periods are removed) and
    stopwords, and joins the remaining words with single spaces.
    """
    stop = set(stopwords)
    words = []
    for word in _DIGITS.sub("", phrase.lower()).split():
        if "." in word:
            word = word.replace(".", "")
            if len(word) <= 2:
                continue
        if len(word) <= 1:
            continue
        if word in stop:
            continue
        words.append(word)
    return " ".join(words) if words else None


def partition(tokens: Sequence[Token]) -> list[list[Token]]:
    """Group tokens by the first character of their normalized form.

    One group per letter a-z that occurs, in letter order, then a single
    overflow group for every other leading character.
    """
    groups: dict[str, list[Token]] = {}
    overflow: list[Token] = []
    for token in tokens:
        first = token.normalized[0]
        if "a" <= first <= "z":
            groups.setdefault(first, []).append(token)
        else:
            overflow.append(token)
    ordered = [groups[key] for key in sorted(groups)]
    if overflow:
        ordered.append(overflow)
    return ordered


def threshold_filter(
    assignment: ExemplarAssignment,
    tokens: Sequence[Token],
    params: WinklerParams,
    threshold: float,
) -> tuple[dict[Token, list[Token]], list[Token]]:
    """Split an assignment into threshold-passing clusters and rejects.

    A member stays with its exemplar iff their Jaro-Winkler similarity meets
    the threshold; exemplars always stay, so a fully rejected cluster shrinks
    to a singleton rather than disappearing.
    """
    accepted: dict[Token, list[Token]] = {}
    rejected: list[Token] = []
    for exemplar_idx, member_idxs in assignment.clusters().items():
        exemplar = tokens[exemplar_idx]
        kept = []
        for i in member_idxs:
            if i == exemplar_idx or (
                jaro_winkler(tokens[i].normalized, exemplar.normalized, params)
                >= threshold
            ):
                kept.append(tokens[i])
            else:
                rejected.append(tokens[i])
        accepted[exemplar] = kept
    return accepted, rejected


def _cluster_group(
    tokens: list[Token], config: PipelineConfig
) -> tuple[dict[Token, list[Token]], list[Token]]:
    """Run up to ``config.passes`` cluster-filter rounds over one partition."""
    clusters: dict[Token, list[Token]] = {}
    pool = tokens
    solver = config.solver_config()
    for _ in range(config.passes):
        if not pool:
            break
        if len(pool) == 1:
            clusters[pool[0]] = [pool[0]]
            pool = []
            break
        assignment = run_affinity_propagation([t.normalized for t in pool], solver)
        accepted, pool = threshold_filter(
            assignment, pool, config.winkler, config.jw_threshold
        )
        clusters.update(accepted)
    return clusters, pool


def run_pipeline(
    phrases: Sequence[str],
    config: PipelineConfig = PipelineConfig(),
    max_workers: int | None = None,
) -> ClusterBook:
    """Cluster raw phrases into a ClusterBook.

    Deterministic in the multiset of phrases (input order never matters) and
    in ``max_workers``: partitions are processed independently and merged in
    partition order, so any worker count produces the identical book.
    """
    if not phrases:
        raise EmptyInputError("no phrases to cluster")
    by_key: dict[str, set[str]] = {}
    for phrase in phrases:
        key = normalize(phrase, config.stopwords)
        if key is not None:
            by_key.setdefault(key, set()).add(phrase)
    if not by_key:
        raise EmptyInputError("every phrase normalized to nothing")
    tokens = [
        Token(id=i, raw=min(raws), normalized=key)
        for i, (key, raws) in enumerate(sorted(by_key.items()))
    ]

    groups = partition(tokens) if config.partition_by_first_letter else [list(tokens)]
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(lambda g: _cluster_group(g, config), groups))
    else:
        results = [_cluster_group(g, config) for g in groups]

    clusters: dict[str, list[str]] = {}
    raws: dict[str, list[str]] = {}
    unclustered: list[str] = []
    for accepted, leftover in results:
        for exemplar, members in accepted.items():
            names = sorted(m.normalized for m in members)
            clusters[exemplar.normalized] = names
            for member in members:
                raws[member.normalized] = sorted(by_key[member.normalized])
        unclustered.extend(t.normalized for t in leftover)
    clusters = {key: clusters[key] for key in sorted(clusters)}
    return ClusterBook(
        clusters=clusters,
        raws={key: raws[key] for key in sorted(raws)},
        unclustered=sorted(unclustered),
    )
