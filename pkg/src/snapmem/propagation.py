"""Signal propagation over poc graphs, and the greedy reactive planner.

Literal sets are boolean numpy vectors indexed by proper literals.  The
central operation is ``propagate(g, B, T) = (B ∪ U) \\ U*`` where U is
the forward closure of the signal T in the graph; with B = ∅ this
computes the coherent projection of T, and with B an up-closed coherent
state it computes the literal description of the closest-point
projection of V[B] onto the convex target V[coh T].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np


class OpCounter:
    """Instrumentation: counts literal/edge touches inside propagation."""

    def __init__(self):
        self.ops = 0

    def add(self, n: int) -> None:
        self.ops += int(n)


def lits_to_mask(n_literals: int, literals: Iterable[int]) -> np.ndarray:
    mask = np.zeros(n_literals, dtype=bool)
    for lit in literals:
        if not 0 <= lit < n_literals:
            raise ValueError(f"literal {lit} out of range")
        mask[lit] = True
    return mask


def mask_to_lits(mask: np.ndarray) -> frozenset[int]:
    return frozenset(np.flatnonzero(mask).tolist())


def star_mask(mask: np.ndarray) -> np.ndarray:
    """Image of a literal mask under the star involution (XOR with 1)."""
    return mask.reshape(-1, 2)[:, ::-1].reshape(-1)


def closure(g, signal: np.ndarray, counter: Optional[OpCounter] = None
            ) -> np.ndarray:
    """Forward closure: all literals reachable from the signal set
    (including it) along directed edges of g.

    Each literal's out-edges are scanned exactly once (frontier BFS), so
    the work is bounded by |edges| + |literals|.
    """
    adj = g.adj
    visited = signal.copy()
    frontier = signal.copy()
    if counter is not None:
        counter.add(len(visited))
    while frontier.any():
        rows = adj[frontier]
        if counter is not None:
            counter.add(int(rows.sum()))
        reached = rows.any(axis=0)
        frontier = reached & ~visited
        visited |= frontier
    return visited


def propagate(g, loaded: np.ndarray, signal: np.ndarray,
              counter: Optional[OpCounter] = None) -> np.ndarray:
    """Algorithm: U = closure(signal); return (loaded ∪ U) \\ U*.

    With an up-closed coherent load this is the literal description of
    the projection of the loaded state onto V[coh(signal)]; the result
    is always coherent and up-closed.
    """
    u = closure(g, signal, counter)
    return (loaded | u) & ~star_mask(u)


def project_to_target(g, current: np.ndarray, target: np.ndarray,
                      counter: Optional[OpCounter] = None) -> np.ndarray:
    """Literal description of proj_{V[coh T]}(V[current])."""
    return propagate(g, current, target, counter)


def action_signal(n_literals: int, action: Iterable[int],
                  current: np.ndarray,
                  context_of: Optional[Mapping[tuple[int, int], int]] = None
                  ) -> np.ndarray:
    """The signal announcing a generalized action: its literals plus every
    available contextualized sensor α∧s with α invoked and s in the
    current state."""
    signal = lits_to_mask(n_literals, action)
    if context_of:
        for (alpha, s), context_literal in context_of.items():
            if signal[alpha] and current[s]:
                signal[context_literal] = True
    return signal


def predict_action(g, current: np.ndarray, action: Iterable[int],
                   context_of: Optional[Mapping[tuple[int, int], int]] = None,
                   counter: Optional[OpCounter] = None) -> np.ndarray:
    """Hallucinated post-state: propagate the action's signal over the
    graph loaded with the current state."""
    signal = action_signal(len(current), action, current, context_of)
    return propagate(g, current, signal, counter)


@dataclass
class PlanDecision:
    """Outcome of one planning step."""

    chosen: frozenset[int]
    achieved_subgoals: int
    fallback: bool
    scores: tuple[int, ...] = field(default=())


def grp_decide(g, current: np.ndarray, target: Iterable[int],
               actions: Sequence[frozenset[int]], rng: np.random.Generator,
               context_of: Optional[Mapping[tuple[int, int], int]] = None,
               mode: str = "progress",
               trace_hook=None,
               counter: Optional[OpCounter] = None) -> PlanDecision:
    """Greedy reactive planning step.

    Projects the current state onto the target, treats the projection's
    literals as subgoals, scores each candidate action by how many
    subgoals its predicted outcome achieves, and picks an argmax (ties
    broken uniformly with the provided rng).  If no action scores, a
    uniformly random action is returned with the fallback flag set.

    ``mode="progress"`` (default) counts only subgoals absent from the
    current state -- standing satisfaction is not an achievement.
    ``mode="guarantee"`` counts target literals forced by the action
    itself (propagation over the empty load), regardless of standing;
    this is the reading needed to hold a position once reached.
    """
    if not actions:
        raise ValueError("grp_decide requires a non-empty action list")
    n = len(current)
    target_mask = lits_to_mask(n, target)
    if mode == "progress":
        projection = propagate(g, current, target_mask, counter)
        subgoals = projection & ~current

        def predicted(action):
            return predict_action(g, current, action, context_of, counter)
    elif mode == "guarantee":
        empty = np.zeros(n, dtype=bool)
        subgoals = target_mask

        def predicted(action):
            signal = action_signal(n, action, current, context_of)
            return propagate(g, empty, signal, counter)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    scores = [int((predicted(action) & subgoals).sum()) for action in actions]
    best = max(scores)
    if best > 0:
        winners = [i for i, s in enumerate(scores) if s == best]
        pick = winners[int(rng.integers(len(winners)))]
        decision = PlanDecision(actions[pick], best, False, tuple(scores))
    else:
        pick = int(rng.integers(len(actions)))
        decision = PlanDecision(actions[pick], 0, True, tuple(scores))
    if trace_hook is not None:
        trace_hook(mask_to_lits(subgoals), tuple(scores), decision)
    return decision
