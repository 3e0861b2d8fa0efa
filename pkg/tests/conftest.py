"""Shared brute-force oracles for the test suite.

Every derived quantity is checked against an independent implementation:
reachability via Floyd-Warshall, shortest paths via BFS, equivalence
classes via union-find, and convexity/projection via exhaustive vertex
enumeration (the cubing module, which is itself validated here against
definition-level filters).
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest


def warshall(edges: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by the textbook triple loop."""
    n = edges.shape[0]
    reach = edges.astype(bool).copy()
    np.fill_diagonal(reach, True)
    for k in range(n):
        for i in range(n):
            if reach[i, k]:
                for j in range(n):
                    if reach[k, j]:
                        reach[i, j] = True
    return reach


def bfs_distances(n_vertices: int, edges) -> np.ndarray:
    """All-pairs hop distances on an undirected graph; -1 = unreachable."""
    adj = [[] for _ in range(n_vertices)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = -np.ones((n_vertices, n_vertices), dtype=int)
    for s in range(n_vertices):
        dist[s, s] = 0
        queue = [s]
        while queue:
            nxt = []
            for u in queue:
                for v in adj[u]:
                    if dist[s, v] < 0:
                        dist[s, v] = dist[s, u] + 1
                        nxt.append(v)
            queue = nxt
    return dist


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        self.parent[self.find(x)] = self.find(y)

    def classes(self) -> dict:
        out = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), set()).add(x)
        return out


def brute_force_vertices(pocset) -> set:
    """Coherent complete *-selections by exhaustive 2^k filtering."""
    k = pocset.sensorium.n_sensors
    out = set()
    for bits in itertools.product((0, 1), repeat=k):
        selection = frozenset(2 * i + b for i, b in enumerate(bits))
        if pocset.is_coherent(selection):
            out.add(selection)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)
