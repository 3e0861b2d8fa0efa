"""Exact dual median graph ("cubing") of a small weak poc set.

Vertices are the coherent complete *-selections of the poc set; two
vertices are adjacent when they differ in exactly one sensor.  The
resulting graph is connected and median.  This module is a brute-force
oracle used for tests and inspection; it is never part of the agent
loop, and refuses to build beyond configurable caps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from snapmem.pocset import ONE, ZERO, WeakPocSet, star_set


@dataclass(frozen=True)
class Realization:
    """Assignment of a footprint (subset of a finite witness space) to
    each positive literal; starred literals get the complement."""

    space: tuple
    footprints: Mapping[int, frozenset]  # positive literal -> witness subset

    def rho(self, literal: int) -> frozenset:
        if literal % 2 == 0:
            return frozenset(self.footprints[literal])
        return frozenset(self.space) - frozenset(self.footprints[literal ^ 1])

    def violations(self, pocset: WeakPocSet) -> list[tuple[int, int]]:
        """Order relations ``a <= b`` whose footprints fail containment."""
        bad = []
        n = pocset.sensorium.n_literals
        for a in range(n):
            for b in range(n):
                if a != b and pocset.reach[a, b] and not self.rho(a) <= self.rho(b):
                    bad.append((a, b))
        return bad


class CapExceeded(RuntimeError):
    """Raised when a dual would exceed the configured size caps."""


class NoTargetError(ValueError):
    """Raised when a projection target halfspace is empty."""


class Cubing:
    """The dual median graph of a canonical weak poc set."""

    def __init__(self, pocset: WeakPocSet, max_pairs: int = 16,
                 max_vertices: int = 2 ** 16):
        if not pocset.is_canonical:
            raise ValueError(
                "build requires the canonical quotient "
                "(no negligible literals or merged classes)"
            )
        if pocset.sensorium.n_sensors > max_pairs:
            raise CapExceeded(
                f"{pocset.sensorium.n_sensors} proper pairs exceeds cap {max_pairs}"
            )
        self.pocset = pocset
        self.vertices: list[frozenset[int]] = []
        self._index: dict[frozenset[int], int] = {}
        self._enumerate(max_vertices)
        self.adjacency: list[list[int]] = [
            sorted(
                self._index[v]
                for v in (self.flip(u, a) for a in self.min_set(u))
            )
            for u in self.vertices
        ]

    # -- enumeration -------------------------------------------------------

    def _enumerate(self, max_vertices: int) -> None:
        reach = self.pocset.reach
        n_sensors = self.pocset.sensorium.n_sensors

        def extend(chosen: list[int], sensor: int) -> None:
            if len(self.vertices) > max_vertices:
                raise CapExceeded(f"dual exceeds {max_vertices} vertices")
            if sensor == n_sensors:
                vertex = frozenset(chosen)
                self._index[vertex] = len(self.vertices)
                self.vertices.append(vertex)
                return
            for literal in (2 * sensor, 2 * sensor + 1):
                # coherence: no previous choice c with c <= literal*
                if not any(reach[c, literal ^ 1] for c in chosen):
                    chosen.append(literal)
                    extend(chosen, sensor + 1)
                    chosen.pop()

        extend([], 0)

    # -- basic queries -----------------------------------------------------

    def index(self, vertex: frozenset[int]) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise ValueError(f"not a vertex of this cubing: {sorted(vertex)}")

    def distance(self, u: frozenset[int], v: frozenset[int]) -> int:
        """Wall metric |u \\ v| (equals hop distance)."""
        return len(u - v)

    def bfs_distance(self, u: frozenset[int], v: frozenset[int]) -> int:
        """Hop distance by breadth-first search (independent oracle)."""
        start, goal = self.index(u), self.index(v)
        seen = {start: 0}
        frontier = [start]
        while frontier:
            if goal in seen:
                return seen[goal]
            next_frontier = []
            for x in frontier:
                for w in self.adjacency[x]:
                    if w not in seen:
                        seen[w] = seen[x] + 1
                        next_frontier.append(w)
            frontier = next_frontier
        raise ValueError("dual graph is disconnected")

    def median(self, u: frozenset[int], v: frozenset[int],
               w: frozenset[int]) -> frozenset[int]:
        """Majority vote ``(u∩v) ∪ (u∩w) ∪ (v∩w)``; always a vertex."""
        med = (u & v) | (u & w) | (v & w)
        self.index(med)
        return med

    def halfspace(self, literals: Iterable[int]) -> set[frozenset[int]]:
        """``V[B]``: all vertices containing the literal set B."""
        wanted = {lit for lit in literals if lit != ONE}
        if ZERO in wanted:
            return set()
        return {v for v in self.vertices if wanted <= v}

    def is_convex(self, vertex_set: Iterable[frozenset[int]]) -> bool:
        """A vertex set is convex iff it is the halfspace of its common
        literals."""
        vertex_set = set(vertex_set)
        if not vertex_set:
            return True
        common = frozenset.intersection(*vertex_set)
        return self.halfspace(common) == vertex_set

    # -- local structure ---------------------------------------------------

    def min_set(self, u: frozenset[int]) -> frozenset[int]:
        """Minimal literals of u: those with no smaller literal inside u."""
        reach = self.pocset.reach
        return frozenset(
            a for a in u if not any(b != a and reach[b, a] for b in u)
        )

    def flip(self, u: frozenset[int], a: int) -> frozenset[int]:
        """Neighbor of u across the wall of a minimal literal a ∈ u."""
        if a not in self.min_set(u):
            raise ValueError(f"literal {a} is not minimal in the vertex")
        return (u - {a}) | {a ^ 1}

    def cubes_at(self, u: frozenset[int]) -> list[frozenset[int]]:
        """All cubes incident to u, as transverse subsets of min_set(u)."""
        minimal = sorted(self.min_set(u))
        cubes: list[frozenset[int]] = []

        def grow(prefix: list[int], rest: list[int]) -> None:
            cubes.append(frozenset(prefix))
            for i, a in enumerate(rest):
                if all(self.pocset.crosses(a, b) for b in prefix):
                    grow(prefix + [a], rest[i + 1:])

        grow([], minimal)
        return cubes

    # -- projections -------------------------------------------------------

    def geodesic_to_convex(self, u: frozenset[int],
                           target: Iterable[int]) -> list[frozenset[int]]:
        """Shortest path from u into ``V[target]`` by flipping, at each
        step, a minimal literal lying below the complement of an
        unsatisfied target literal."""
        target = frozenset(target) - {ONE}
        if not self.halfspace(target):
            raise NoTargetError("target halfspace is empty")
        reach = self.pocset.reach
        path = [u]
        current = u
        while not target <= current:
            b = min(b for b in target if b not in current)
            c = min(c for c in self.min_set(current) if reach[c, b ^ 1])
            current = self.flip(current, c)
            path.append(current)
        return path

    def project_point(self, u: frozenset[int],
                      target: Iterable[int]) -> frozenset[int]:
        """Closest-point projection ``(u \\ down(T*)) ∪ up(T)`` onto V[T]."""
        target = frozenset(target) - {ONE}
        if not self.halfspace(target):
            raise NoTargetError("target halfspace is empty")
        p = self.pocset
        result = (u - p.down_set(star_set(target))) | (
            p.up_set(target) - {ONE}
        )
        self.index(frozenset(result))
        return frozenset(result)

    def project_convex(self, source: Iterable[int],
                       target: Iterable[int]) -> set[frozenset[int]]:
        """Projection of the convex set V[S] onto V[T], as a vertex set:
        ``V[(up S ∪ up T) \\ down T*]``."""
        source = frozenset(source) - {ONE}
        target = frozenset(target) - {ONE}
        if not self.halfspace(source) or not self.halfspace(target):
            raise NoTargetError("source or target halfspace is empty")
        p = self.pocset
        description = (p.up_set(source) | p.up_set(target)) - p.down_set(
            star_set(target)
        )
        return self.halfspace(description)

    def separator(self, k_vertices: Iterable[frozenset[int]],
                  l_vertices: Iterable[frozenset[int]]) -> frozenset[int]:
        """Literals a with K ⊆ V[a] and L ⊆ V[a*]."""
        k_vertices, l_vertices = set(k_vertices), set(l_vertices)
        common_k = frozenset.intersection(*k_vertices)
        common_l = frozenset.intersection(*l_vertices)
        return frozenset(a for a in common_k if (a ^ 1) in common_l)

    def gate(self, k_vertices: Iterable[frozenset[int]],
             l_vertices: Iterable[frozenset[int]]
             ) -> tuple[frozenset[int], frozenset[int]]:
        """The closest pair (u, v) ∈ K × L; requires both sets convex."""
        k_vertices, l_vertices = set(k_vertices), set(l_vertices)
        for name, vs in (("K", k_vertices), ("L", l_vertices)):
            if not self.is_convex(vs):
                raise ValueError(f"gate requires convex input: {name} is not")
        pair = min(
            ((u, v) for u in k_vertices for v in l_vertices),
            key=lambda uv: (self.distance(*uv), sorted(uv[0]), sorted(uv[1])),
        )
        return pair

    # -- punctured dual and dual maps --------------------------------------

    def consistent_vertex(self, realization: Realization,
                          witness) -> frozenset[int]:
        """The complete *-selection observed at a witness point."""
        vertex = set()
        for sensor in range(self.pocset.sensorium.n_sensors):
            positive = 2 * sensor
            vertex.add(positive if witness in realization.rho(positive)
                       else positive ^ 1)
        return frozenset(vertex)

    def punctured_dual(self, realization: Realization) -> set[frozenset[int]]:
        """Vertices witnessed by at least one state/transition."""
        bad = realization.violations(self.pocset)
        if bad:
            a, b = bad[0]
            name = self.pocset.sensorium.literal_name
            raise ValueError(
                f"realization is not a poc morphism: "
                f"{name(a)} <= {name(b)} but footprints are not nested"
            )
        return {self.consistent_vertex(realization, w)
                for w in realization.space}

    # -- export ------------------------------------------------------------

    def vertex_label(self, vertex: frozenset[int]) -> str:
        name = self.pocset.sensorium.literal_name
        return "{" + ",".join(name(a) for a in sorted(vertex)) + "}"

    def to_json(self) -> str:
        return json.dumps(
            {
                "vertices": [
                    [self.pocset.sensorium.literal_name(a) for a in sorted(v)]
                    for v in self.vertices
                ],
                "edges": [
                    [i, j]
                    for i, nbrs in enumerate(self.adjacency)
                    for j in nbrs
                    if i < j
                ],
            },
            indent=2,
        )

    def to_dot(self) -> str:
        lines = ["graph dual {"]
        for i, v in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{self.vertex_label(v)}"];')
        for i, nbrs in enumerate(self.adjacency):
            lines.extend(f"  v{i} -- v{j};" for j in nbrs if i < j)
        lines.append("}")
        return "\n".join(lines)


def dual_map(f: Mapping[int, int], source: WeakPocSet,
             c_target: Cubing) -> dict[int, frozenset[int]]:
    """Pullback of a poc morphism ``f : source → target`` on dual vertices.

    Returns a map from vertex indices of ``c_target`` to vertices of the
    dual of ``source`` (as literal sets).  Validates *-equivariance and
    order preservation; the result is median-preserving and injective
    when f is bijective on literals.
    """
    target = c_target.pocset
    n = source.sensorium.n_literals
    for a in range(n):
        if a not in f:
            raise ValueError(f"morphism undefined on literal {a}")
        fa, fa_star = f[a], f[a ^ 1]
        if fa_star != (fa ^ 1):
            raise ValueError(f"morphism not *-equivariant at literal {a}")
    for a in range(n):
        for b in range(n):
            if a != b and source.reach[a, b] and not target.leq(f[a], f[b]):
                raise ValueError(
                    f"morphism not order-preserving: {a} <= {b} in source"
                )
    result = {}
    for i, vertex in enumerate(c_target.vertices):
        preimage = frozenset(
            a for a in range(n) if f[a] == ONE or f[a] in vertex
        )
        result[i] = preimage
    return result
