"""Affinity propagation over string-distance similarities.

Exemplar clustering by message passing: a similarity matrix with negative
Levenshtein distances off the diagonal and a shared preference on it, then
alternating responsibility and availability updates (damped) until the
exemplar assignment is stable.  Everything is dense numpy; one solver run
owns its matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .string_metrics import levenshtein_matrix

__all__ = [
    "SimilarityMatrix",
    "MessageState",
    "ApConfig",
    "ExemplarAssignment",
    "build_similarity_matrix",
    "update_responsibility",
    "update_availability",
    "recompute_criterion",
    "extract_exemplars",
    "run_affinity_propagation",
]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise similarities with the exemplar preference on the diagonal."""

    n: int
    s: np.ndarray
    preference: float


@dataclass(frozen=True)
class MessageState:
    """Responsibility, availability and criterion matrices of one solver run.

    ``c`` is only meaningful right after :func:`recompute_criterion`; the
    update functions leave it untouched.
    """

    r: np.ndarray
    a: np.ndarray
    c: np.ndarray
    iteration: int = 0

    @classmethod
    def zeros(cls, n: int) -> "MessageState":
        return cls(
            r=np.zeros((n, n)), a=np.zeros((n, n)), c=np.zeros((n, n)), iteration=0
        )


@dataclass(frozen=True)
class ApConfig:
    """Solver knobs: damping factor, iteration cap, stability window."""

    damping: float = 0.65
    max_iterations: int = 200
    stability_window: int = 15
    distance_exponent: float = 1.0

    def __post_init__(self) -> None:
        if not 0.5 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0.5, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not 0 < self.stability_window < self.max_iterations:
            raise ValueError("stability_window must be in (0, max_iterations)")
        if self.distance_exponent <= 0:
            raise ValueError("distance_exponent must be positive")


@dataclass(frozen=True)
class ExemplarAssignment:
    """Cluster result: ``exemplar_of[i]`` is the exemplar index of point i."""

    exemplar_of: np.ndarray
    converged: bool
    iterations_run: int

    def clusters(self) -> dict[int, list[int]]:
        """Members grouped by exemplar index, both in ascending order."""
        groups: dict[int, list[int]] = {}
        for i, k in enumerate(self.exemplar_of):
            groups.setdefault(int(k), []).append(i)
        return {k: groups[k] for k in sorted(groups)}


def build_similarity_matrix(
    words: Sequence[str], distance_exponent: float = 1.0
) -> SimilarityMatrix:
    """Similarity matrix over distinct words.

    Off-diagonal entries are negated Levenshtein distances (optionally raised
    to ``distance_exponent`` first); the diagonal carries the preference,
    the minimum off-diagonal similarity.  A single word gets the 1x1 zero
    matrix.
    """
    if len(words) == 0:
        raise ValueError("cannot build a similarity matrix from no words")
    if len(set(words)) != len(words):
        raise ValueError("words must be pairwise distinct")
    n = len(words)
    if n == 1:
        return SimilarityMatrix(n=1, s=np.zeros((1, 1)), preference=0.0)
    dist = levenshtein_matrix(list(words)).astype(float)
    if distance_exponent != 1.0:
        dist **= distance_exponent
    s = -dist
    preference = float(s.min())  # diagonal is 0 here, never the minimum
    np.fill_diagonal(s, preference)
    return SimilarityMatrix(n=n, s=s, preference=preference)


def update_responsibility(
    state: MessageState, sim: SimilarityMatrix, damping: float
) -> MessageState:
    """One responsibility sweep:
    ``r(i,k) <- s(i,k) - max_{k' != k}(a(i,k') + s(i,k'))``, damped against
    the previous r.  The diagonal uses the same rule.
    """
    s = sim.s
    n = sim.n
    if n == 1:
        # No competing candidate: the single point is maximally responsible
        # for itself.
        computed = np.full((1, 1), np.inf)
    else:
        a_plus_s = state.a + s
        idx = np.argmax(a_plus_s, axis=1)
        rows = np.arange(n)
        best = a_plus_s[rows, idx]
        a_plus_s[rows, idx] = -np.inf
        runner_up = a_plus_s.max(axis=1)
        computed = s - best[:, None]
        computed[rows, idx] = s[rows, idx] - runner_up
    new_r = damping * state.r + (1.0 - damping) * computed
    return replace(state, r=new_r)


def update_availability(state: MessageState, damping: float) -> MessageState:
    """One availability sweep.

    Off the diagonal ``a(i,k) <- min(0, r(k,k) + sum_{i' not in {i,k}}
    max(0, r(i',k)))``; on it the self-availability
    ``a(k,k) <- sum_{i' != k} max(0, r(i',k))``.  Damped like r.
    """
    r = state.r
    n = r.shape[0]
    positive = np.maximum(r, 0.0)
    np.fill_diagonal(positive, 0.0)
    support = positive.sum(axis=0)  # sum over i' != k of max(0, r(i',k))
    computed = np.minimum(0.0, r.diagonal()[None, :] + support[None, :] - positive)
    np.fill_diagonal(computed, support)
    new_a = damping * state.a + (1.0 - damping) * computed
    return replace(state, a=new_a)


def recompute_criterion(state: MessageState) -> MessageState:
    """Refresh ``c = r + a`` and advance the iteration counter."""
    return replace(state, c=state.r + state.a, iteration=state.iteration + 1)


def extract_exemplars(
    state: MessageState, sim: SimilarityMatrix
) -> ExemplarAssignment:
    """Row-wise argmax of the criterion matrix, then self-consistency repair.

    Ties break to the lowest index.  Points whose chosen exemplar does not
    elect itself are reassigned to the most similar self-electing exemplar;
    with no self-electing exemplar at all, every such point becomes its own
    singleton.
    """
    choice = np.argmax(state.c, axis=1)
    n = choice.shape[0]
    self_electing = np.flatnonzero(choice == np.arange(n))
    if self_electing.size == 0:
        exemplar_of = np.arange(n)
    elif self_electing.size == n:
        exemplar_of = choice.copy()
    else:
        exemplar_of = choice.copy()
        broken = np.flatnonzero(~np.isin(choice, self_electing))
        nearest = np.argmax(sim.s[np.ix_(broken, self_electing)], axis=1)
        exemplar_of[broken] = self_electing[nearest]
    return ExemplarAssignment(
        exemplar_of=exemplar_of, converged=False, iterations_run=state.iteration
    )


# Relative magnitude of the deterministic tie-breaking perturbation.  Integer
# string distances make exact energy ties common, and ties famously leave the
# message passing oscillating between equivalent solutions.  Raising each
# preference by a tiny distinct amount resolves exemplar-set ties (toward the
# solution with more exemplars) without moving any strict optimum.
_TIE_JITTER = 1e-6


def run_affinity_propagation(
    words: Sequence[str], config: ApConfig = ApConfig()
) -> ExemplarAssignment:
    """Cluster ``words`` by full message passing.

    Iterates responsibility, availability and criterion updates until the
    exemplar assignment survives ``config.stability_window`` consecutive
    iterations (converged) or ``config.max_iterations`` is hit (the current
    assignment is returned unconverged).  Deterministic for fixed input: the
    tie-breaking jitter comes from a fixed-seed generator.
    """
    sim = build_similarity_matrix(words, config.distance_exponent)
    if sim.n == 1:
        return ExemplarAssignment(
            exemplar_of=np.zeros(1, dtype=np.int64), converged=True, iterations_run=0
        )
    span = float(sim.s.max() - sim.s.min()) or 1.0
    bump = span * _TIE_JITTER * np.random.default_rng(0).random(sim.n)
    jittered = sim.s.copy()
    jittered[np.diag_indices(sim.n)] += bump
    sim = SimilarityMatrix(n=sim.n, s=jittered, preference=sim.preference)
    state = MessageState.zeros(sim.n)
    identity = np.arange(sim.n)
    previous: np.ndarray | None = None
    stable = 0
    for _ in range(config.max_iterations):
        state = update_responsibility(state, sim, config.damping)
        state = update_availability(state, config.damping)
        state = recompute_criterion(state)
        assignment = extract_exemplars(state, sim)
        if not np.any(np.argmax(state.c, axis=1) == identity):
            # Messages are still warming up: no point elects itself yet, so
            # the repair fallback owns the assignment.  Not a stable state.
            previous, stable = None, 0
            continue
        if previous is not None and np.array_equal(assignment.exemplar_of, previous):
            stable += 1
        else:
            stable = 0
        previous = assignment.exemplar_of
        if stable >= config.stability_window:
            return replace(assignment, converged=True)
    return assignment
