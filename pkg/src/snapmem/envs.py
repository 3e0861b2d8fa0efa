"""Deterministic simulated environments with exact ground truth.

Every environment is a finite position set with total deterministic
atomic actions and a family of binary place fields (position sensors).
Ground-truth implication matrices come from exact footprint containment
(``dir_true``) or from the stationary distribution of the uniform-action
random walk with a learning threshold (``dir_thresholded``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass
class Environment:
    name: str
    positions: tuple
    actions: tuple[str, ...]
    transitions: dict  # (position, action) -> position
    fields: dict  # sensor name -> frozenset of positions
    distance: Optional[Callable] = None
    target: object = None
    position: object = field(default=None)

    def __post_init__(self):
        if self.position is None:
            self.position = self.positions[0]
        for pos in self.positions:
            for action in self.actions:
                if (pos, action) not in self.transitions:
                    raise ValueError(f"transition missing for {(pos, action)}")

    @property
    def sensor_names(self) -> list[str]:
        return list(self.fields)

    def transition(self, pos, action):
        return self.transitions[(pos, action)]

    def step(self, action) -> None:
        self.position = self.transition(self.position, action)

    def reset(self, pos) -> None:
        if pos not in self.transitions and pos not in self.positions:
            raise ValueError(f"unknown position {pos}")
        self.position = pos

    def reads(self, sensor_name: str, pos=None) -> bool:
        if pos is None:
            pos = self.position
        return pos in self.fields[sensor_name]

    # -- chain analysis ----------------------------------------------------

    def chain_matrix(self) -> np.ndarray:
        """Transition matrix of the uniform-action random walk."""
        index = {pos: i for i, pos in enumerate(self.positions)}
        n = len(self.positions)
        chain = np.zeros((n, n))
        for pos in self.positions:
            for action in self.actions:
                chain[index[pos], index[self.transition(pos, action)]] += 1
        return chain / len(self.actions)

    def stationary_distribution(self, tol: float = 1e-12) -> np.ndarray:
        """Stationary vector by power iteration (residual < tol)."""
        chain = self.chain_matrix()
        pi = np.full(len(self.positions), 1.0 / len(self.positions))
        for _ in range(200_000):
            nxt = pi @ chain
            if np.abs(nxt - pi).max() < tol:
                return nxt / nxt.sum()
            pi = nxt
        raise RuntimeError("stationary distribution did not converge")

    def is_doubly_stochastic(self, tol: float = 1e-12) -> bool:
        chain = self.chain_matrix()
        return bool(
            np.abs(chain.sum(axis=0) - 1).max() < tol
            and np.abs(chain.sum(axis=1) - 1).max() < tol
        )

    def is_reversible(self) -> bool:
        """Every action edge x -> y has some action leading y -> x."""
        edges = {
            (pos, self.transition(pos, action))
            for pos in self.positions
            for action in self.actions
        }
        return all((y, x) in edges for x, y in edges)

    def is_connected(self) -> bool:
        seen = {self.positions[0]}
        frontier = [self.positions[0]]
        while frontier:
            pos = frontier.pop()
            for action in self.actions:
                nxt = self.transition(pos, action)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return len(seen) == len(self.positions)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "positions": [list(p) if isinstance(p, tuple) else p
                              for p in self.positions],
                "actions": list(self.actions),
                "fields": {
                    name: sorted(
                        list(p) if isinstance(p, tuple) else p for p in positions
                    )
                    for name, positions in self.fields.items()
                },
                "target": (list(self.target) if isinstance(self.target, tuple)
                           else self.target),
            }
        )


# -- factories -------------------------------------------------------------

def make_path(length: int = 20) -> Environment:
    """Path with ``length`` edges, threshold sensors [a_k](x)=1 iff pos<k,
    and clamped fwd/back/wait actions."""
    positions = tuple(range(length + 1))
    transitions = {}
    for pos in positions:
        transitions[(pos, "fwd")] = min(length, pos + 1)
        transitions[(pos, "back")] = max(0, pos - 1)
        transitions[(pos, "wait")] = pos
    fields = {
        f"a{k}": frozenset(range(k)) for k in range(1, length + 1)
    }
    return Environment(
        name=f"path({length})",
        positions=positions,
        actions=("fwd", "back", "wait"),
        transitions=transitions,
        fields=fields,
        distance=lambda p, q: abs(p - q),
    )


def make_cycle(n: int = 20) -> Environment:
    """Cycle of n positions with beacon fields U_i = {i-1, i, i+1} mod n."""
    positions = tuple(range(n))
    transitions = {}
    for pos in positions:
        transitions[(pos, "fwd")] = (pos + 1) % n
        transitions[(pos, "back")] = (pos - 1) % n
        transitions[(pos, "wait")] = pos
    fields = {
        f"loc{i}": frozenset({(i - 1) % n, i, (i + 1) % n})
        for i in range(n)
    }
    return Environment(
        name=f"cycle({n})",
        positions=positions,
        actions=("fwd", "back", "wait"),
        transitions=transitions,
        fields=fields,
        distance=lambda p, q: min((p - q) % n, (q - p) % n),
    )


def make_circular_rail(n: int = 20) -> Environment:
    """A cycle with its modular distance gradient exposed for navigation."""
    env = make_cycle(n)
    env.name = f"rail({n})"
    return env


def make_grid(nx: int = 10, ny: int = 10) -> Environment:
    """(nx+1) x (ny+1) grid with axis threshold sensors and clamped moves."""
    positions = tuple((x, y) for x in range(nx + 1) for y in range(ny + 1))
    transitions = {}
    for (x, y) in positions:
        transitions[((x, y), "right")] = (min(nx, x + 1), y)
        transitions[((x, y), "left")] = (max(0, x - 1), y)
        transitions[((x, y), "up")] = (x, min(ny, y + 1))
        transitions[((x, y), "down")] = (x, max(0, y - 1))
        transitions[((x, y), "wait")] = (x, y)
    fields = {}
    for i in range(1, nx + 1):
        fields[f"x{i}"] = frozenset(p for p in positions if p[0] < i)
    for j in range(1, ny + 1):
        fields[f"y{j}"] = frozenset(p for p in positions if p[1] < j)
    return Environment(
        name=f"grid({nx},{ny})",
        positions=positions,
        actions=("right", "left", "up", "down", "wait"),
        transitions=transitions,
        fields=fields,
        distance=lambda p, q: abs(p[0] - q[0]) + abs(p[1] - q[1]),
    )


def make_punctured_grid(n: int, removed_vertex: tuple) -> Environment:
    """Grid with one interior vertex removed; moves into it fail in place."""
    x0, y0 = removed_vertex
    if not (0 < x0 < n and 0 < y0 < n):
        raise ValueError("removed vertex must be interior")
    base = make_grid(n, n)
    positions = tuple(p for p in base.positions if p != removed_vertex)
    transitions = {}
    for pos in positions:
        for action in base.actions:
            nxt = base.transition(pos, action)
            transitions[(pos, action)] = pos if nxt == removed_vertex else nxt
    fields = {
        name: frozenset(p for p in positions_ if p != removed_vertex)
        for name, positions_ in base.fields.items()
    }
    return Environment(
        name=f"punctured-grid({n},{removed_vertex})",
        positions=positions,
        actions=base.actions,
        transitions=transitions,
        fields=fields,
        distance=base.distance,
    )


def make_random_fields(length: int = 20, n_sensors: int = 20,
                       rng: Optional[np.random.Generator] = None
                       ) -> Environment:
    """Path dynamics with independently random place fields (drawn anew
    per run from the provided rng)."""
    if rng is None:
        raise ValueError("make_random_fields requires an explicit rng")
    env = make_path(length)
    fields = {}
    for i in range(n_sensors):
        members = frozenset(
            pos for pos in env.positions if rng.integers(2) == 1
        )
        fields[f"r{i}"] = members
    env.fields = fields
    env.name = f"random-fields({length},{n_sensors})"
    return env


# -- ground truth ----------------------------------------------------------

@dataclass(frozen=True)
class GroundTruth:
    sensor_names: tuple[str, ...]
    dir: np.ndarray  # bool over ordered proper literal pairs
    mode: str

    def to_csv(self) -> str:
        lines = ["a,b,value"]
        names = []
        for name in self.sensor_names:
            names.extend((name, name + "*"))
        for a in range(len(names)):
            for b in range(len(names)):
                lines.append(f"{names[a]},{names[b]},{int(self.dir[a, b])}")
        return "\n".join(lines) + "\n"


def _footprints(env: Environment, sensor_names) -> list[frozenset]:
    universe = frozenset(env.positions)
    footprints = []
    for name in sensor_names:
        positive = frozenset(env.fields[name])
        footprints.extend((positive, universe - positive))
    return footprints


def ground_truth(env: Environment, sensor_names=None, mode: str = "true",
                 tau: Optional[float] = None) -> GroundTruth:
    """Reference implication matrix over the chosen position sensors."""
    if not env.is_connected():
        raise ValueError("ground truth requires a connected environment")
    if sensor_names is None:
        sensor_names = env.sensor_names
    rho = _footprints(env, sensor_names)
    n = len(rho)
    same_sensor = np.zeros((n, n), dtype=bool)
    for a in range(n):
        same_sensor[a, a] = same_sensor[a, a ^ 1] = True
    dir_matrix = np.zeros((n, n), dtype=bool)
    if mode == "true":
        for a in range(n):
            for b in range(n):
                if not same_sensor[a, b]:
                    dir_matrix[a, b] = rho[a] <= rho[b]
    elif mode == "thresholded":
        if tau is None:
            raise ValueError("thresholded mode requires tau")
        pi = env.stationary_distribution()
        index = {pos: i for i, pos in enumerate(env.positions)}

        def mass(region: frozenset) -> float:
            return float(sum(pi[index[pos]] for pos in region))

        for a in range(n):
            for b in range(n):
                if same_sensor[a, b]:
                    continue
                w_ab_star = mass(rho[a] & rho[b ^ 1])
                others = min(
                    mass(rho[a] & rho[b]),
                    mass(rho[a ^ 1] & rho[b]),
                    mass(rho[a ^ 1] & rho[b ^ 1]),
                )
                dir_matrix[a, b] = w_ab_star < min(tau, others)
    else:
        raise ValueError(f"unknown ground-truth mode {mode!r}")
    return GroundTruth(tuple(sensor_names), dir_matrix, mode)


def err(dir_learned: np.ndarray, dir_reference: np.ndarray) -> int:
    """L1 mismatch count between two implication matrices."""
    if dir_learned.shape != dir_reference.shape:
        raise ValueError("implication matrices have different shapes")
    return int((dir_learned.astype(bool) ^ dir_reference.astype(bool)).sum())
