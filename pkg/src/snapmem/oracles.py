"""Random instance generators and brute-force checks shared by the
self-test command and the test suite.

Probabilistic snapshots are generated constraint-satisfying by
construction: any convex combination of complete-observation indicator
squares satisfies consistency, normalization, and the orientation
cocycle identity exactly.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from snapmem.pocset import Sensorium, WeakPocSet
from snapmem.propagation import lits_to_mask
from snapmem.snapshot import Snapshot, _pair_mask


def random_weak_pocset(rng: np.random.Generator, n_sensors: int,
                       relation_rate: float = 0.25) -> WeakPocSet:
    """A random weak poc set from random generator relations."""
    names = tuple(f"s{i}" for i in range(n_sensors))
    sensorium = Sensorium(names)
    relations = []
    n = sensorium.n_literals
    for a in range(n):
        for b in range(n):
            if b not in (a, a ^ 1) and rng.random() < relation_rate:
                relations.append((a, b))
    return WeakPocSet.from_generators(sensorium, relations)


def random_canonical_pocset(rng: np.random.Generator, n_sensors: int,
                            relation_rate: float = 0.25) -> WeakPocSet:
    """A random canonical (strict, no equivalences) poc set."""
    while True:
        p = random_weak_pocset(rng, n_sensors, relation_rate)
        try:
            q, _ = p.canonical_quotient()
        except ValueError:
            continue  # a literal collapsed onto its complement; redraw
        if q.sensorium.n_sensors >= 1:
            return q


def random_complete_selection(sensorium: Sensorium,
                              rng: np.random.Generator) -> frozenset[int]:
    return frozenset(
        2 * i + int(rng.integers(2)) for i in range(sensorium.n_sensors)
    )


def random_vertex(pocset: WeakPocSet,
                  rng: np.random.Generator) -> Optional[frozenset[int]]:
    """A random coherent complete *-selection, or None if the random
    greedy assignment fails (rare for sparse orders)."""
    chosen: list[int] = []
    for sensor in rng.permutation(pocset.sensorium.n_sensors):
        options = [2 * int(sensor), 2 * int(sensor) + 1]
        rng.shuffle(options)
        placed = False
        for literal in options:
            if all(not pocset.leq(c, literal ^ 1) for c in chosen) and not (
                pocset.leq(literal, literal ^ 1)
            ):
                chosen.append(literal)
                placed = True
                break
        if not placed:
            return None
    return frozenset(chosen)


def random_coherent_set(pocset: WeakPocSet, rng: np.random.Generator,
                        max_size: int = 3) -> Optional[frozenset[int]]:
    """A random coherent literal set (subset of a random vertex)."""
    vertex = random_vertex(pocset, rng)
    if vertex is None:
        return None
    vertex = sorted(vertex)
    size = int(rng.integers(0, min(max_size, len(vertex)) + 1))
    picks = rng.choice(len(vertex), size=size, replace=False)
    return frozenset(vertex[i] for i in picks)


def random_probabilistic_snapshot(sensorium: Sensorium,
                                  rng: np.random.Generator,
                                  n_mix: int = 6,
                                  tau: float = 0.1) -> Snapshot:
    """Convex combination of indicator squares: probabilistic by
    construction."""
    n = sensorium.n_literals
    weights = np.zeros((n, n))
    coefficients = rng.dirichlet(np.ones(n_mix))
    pair = _pair_mask(n)
    for coefficient in coefficients:
        observation = random_complete_selection(sensorium, rng)
        mask = lits_to_mask(n, observation)
        weights += coefficient * (np.outer(mask, mask) & pair)
    s = Snapshot(sensorium, tau, kind="discounted", q=0.5)
    s.weights = weights
    s.clock = 1
    return s


def random_empirical_evolution(sensorium: Sensorium,
                               rng: np.random.Generator,
                               steps: int, tau: float = 0.1) -> Snapshot:
    """An evolution of the trivial snapshot under random observations."""
    s = Snapshot(sensorium, tau, kind="empirical")
    for _ in range(steps):
        s.ingest(random_complete_selection(sensorium, rng))
    return s
