"""Snapshots: co-occurrence weights over sensor-literal pairs, learning
thresholds, and the derived implication record.

A snapshot assigns a non-negative weight ``w[a, b]`` to every edge of
the complete graph on proper literals minus the ``a a*`` edges.  Each
unordered sensor pair {a, b} spans a "square" of four weights
``(w_ab, w_ab*, w_a*b, w_a*b*)``.  Two update dynamics are provided:

* empirical -- integer counters incremented by each observation;
* discounted -- exponential moving average with decay q, followed by
  truncation (zeroing weights certified negligible by the thresholds).

The derived poc graph has an edge ``a -> b`` ("a virtually implies b")
whenever ``w_ab* < min(τ_ab, w_ab, w_a*b, w_a*b*)`` (strictly; for
empirical snapshots the threshold is scaled by the clock).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from snapmem.pocset import Sensorium, WeakPocSet, _transitive_closure
from snapmem.propagation import OpCounter, lits_to_mask, propagate, star_mask

#: weights below this are "exact zeros" for equivalence detection
ZERO_EPS = 1e-12
#: tolerance for the probabilistic constraint checks
PROB_EPS = 1e-9


@lru_cache(maxsize=64)
def _star_index(n: int) -> np.ndarray:
    return np.arange(n) ^ 1


@lru_cache(maxsize=64)
def _pair_mask(n: int) -> np.ndarray:
    """mask[a, b] is True iff a, b belong to distinct sensors."""
    idx = np.arange(n)
    mask = (idx[:, None] // 2) != (idx[None, :] // 2)
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True)
class PocGraph:
    """Directed implication graph over proper literals."""

    n_literals: int
    adj: np.ndarray  # bool (n, n); adj[a, b] means edge a -> b

    def __post_init__(self):
        self.adj.setflags(write=False)

    def edges(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in np.argwhere(self.adj)]

    @property
    def n_edges(self) -> int:
        return int(self.adj.sum())

    def equivalence_pairs(self) -> np.ndarray:
        return self.adj & self.adj.T

    def find_cycle(self) -> Optional[list[int]]:
        """A directed cycle if one exists (strict mode check), else None."""
        closure = _transitive_closure(self.adj.copy())
        strict = self.adj.copy()
        on_cycle = [
            a for a in range(self.n_literals)
            if any(strict[a, b] and closure[b, a] for b in range(self.n_literals))
        ]
        if not on_cycle:
            return None
        start = on_cycle[0]
        cycle = [start]
        node = start
        while True:
            node = next(
                b for b in range(self.n_literals)
                if strict[node, b] and closure[b, start]
            )
            if node == start:
                return cycle
            cycle.append(node)

    def is_acyclic(self) -> bool:
        return self.find_cycle() is None


def derived_poc_set(g: PocGraph, sensorium: Sensorium,
                    strict: bool = False) -> WeakPocSet:
    """Transitive closure of a poc graph as a weak poc set."""
    if strict:
        cycle = g.find_cycle()
        if cycle is not None:
            names = [sensorium.literal_name(a) for a in cycle]
            raise ValueError(f"poc graph has a directed cycle: {names}")
    return WeakPocSet(sensorium, _transitive_closure(g.adj.copy()))


def _threshold_matrix(sensorium: Sensorium, tau) -> np.ndarray:
    n = sensorium.n_literals
    matrix = np.asarray(tau, dtype=float)
    if matrix.ndim == 0:
        matrix = np.full((n, n), float(matrix))
    if matrix.shape != (n, n):
        raise ValueError("thresholds must be a scalar or an (n, n) matrix")
    sp = _star_index(n)
    if not (
        np.allclose(matrix, matrix.T)
        and np.allclose(matrix, matrix[sp][:, sp])
        and np.allclose(matrix, matrix[:, sp])
    ):
        raise ValueError("thresholds must be constant on each square orbit")
    if (matrix[_pair_mask(n)] > 0.25 + 1e-15).any():
        raise ValueError("thresholds must not exceed 1/4")
    return matrix


class Snapshot:
    """Mutable snapshot owned by a single agent.

    The module-level operations (:func:`empirical_update`, etc.) are
    functional wrappers that copy first.
    """

    def __init__(self, sensorium: Sensorium, tau, kind: str = "empirical",
                 q: Optional[float] = None):
        if kind not in ("empirical", "discounted"):
            raise ValueError(f"unknown snapshot kind {kind!r}")
        if kind == "discounted":
            if q is None or not 0.0 <= q <= 1.0:
                raise ValueError("discounted snapshots need a decay q in [0, 1]")
        n = sensorium.n_literals
        self.sensorium = sensorium
        self.kind = kind
        self.q = q
        self.tau = _threshold_matrix(sensorium, tau)
        dtype = np.int32 if kind == "empirical" else np.float64
        self.weights = np.zeros((n, n), dtype=dtype)
        self.clock = 0
        self.state = np.zeros(n, dtype=bool)
        self.op_counter = OpCounter()

    # -- constructors ------------------------------------------------------

    @classmethod
    def trivial(cls, sensorium: Sensorium, tau, kind: str = "empirical",
                q: Optional[float] = None) -> "Snapshot":
        return cls(sensorium, tau, kind, q)

    @classmethod
    def uniform(cls, sensorium: Sensorium, tau, q: float) -> "Snapshot":
        """The maximum-entropy probabilistic snapshot (all weights 1/4)."""
        s = cls(sensorium, tau, "discounted", q)
        s.weights[_pair_mask(sensorium.n_literals)] = 0.25
        return s

    def copy(self) -> "Snapshot":
        s = Snapshot.__new__(Snapshot)
        s.sensorium = self.sensorium
        s.kind = self.kind
        s.q = self.q
        s.tau = self.tau
        s.weights = self.weights.copy()
        s.clock = self.clock
        s.state = self.state.copy()
        s.op_counter = OpCounter()
        return s

    # -- basic accessors ---------------------------------------------------

    @property
    def n_literals(self) -> int:
        return self.sensorium.n_literals

    def w(self, a: int, b: int):
        if not _pair_mask(self.n_literals)[a, b]:
            raise ValueError("weights are defined on distinct-sensor pairs only")
        return self.weights[a, b]

    def square(self, a: int, b: int) -> tuple:
        """(w_ab, w_ab*, w_a*b, w_a*b*) for the sensor pair spanned by a, b."""
        return (
            self.weights[a, b],
            self.weights[a, b ^ 1],
            self.weights[a ^ 1, b],
            self.weights[a ^ 1, b ^ 1],
        )

    def _as_mask(self, observation) -> np.ndarray:
        if isinstance(observation, np.ndarray) and observation.dtype == bool:
            mask = observation
        else:
            mask = lits_to_mask(self.n_literals, observation)
        if not (mask ^ star_mask(mask)).all():
            raise ValueError("observation must be a complete *-selection")
        return mask

    # -- update dynamics ---------------------------------------------------

    def ingest(self, observation) -> None:
        """One full in-place update cycle: weights, derived graph, state."""
        mask = self._as_mask(observation)
        n = self.n_literals
        pair = _pair_mask(n)
        if self.kind == "empirical":
            indicator = np.outer(mask, mask) & pair
            self.weights += indicator
        else:
            indicator = (np.outer(mask, mask) & pair).astype(float)
            self.weights *= self.q
            self.weights += (1.0 - self.q) * indicator
            self._truncate_inplace()
        self.clock += 1
        self.op_counter.add(n * n)
        graph = self.derive_graph(extend_equivalences=True)
        self.op_counter.add(n * n)
        self.state = propagate(graph, np.zeros(n, dtype=bool), mask,
                               self.op_counter)
        self._graph = graph

    @property
    def graph(self) -> PocGraph:
        """Derived poc graph with equivalences, as of the last update."""
        if not hasattr(self, "_graph"):
            self._graph = self.derive_graph(extend_equivalences=True)
        return self._graph

    def _implications_from(self, mixed: np.ndarray) -> np.ndarray:
        """Strict virtual-implication test given ``mixed = w[:, star]``.

        Weight symmetry gives ``w_a*b = mixed.T`` and
        ``w_a*b* = mixed[star]``, so one permuted copy serves all three
        off-square comparisons.
        """
        n = self.n_literals
        sp = _star_index(n)
        tau_eff = self.tau * self.clock if self.kind == "empirical" else self.tau
        return (
            (mixed < tau_eff)
            & (mixed < self.weights)
            & (mixed < mixed.T)
            & (mixed < mixed[sp])
            & _pair_mask(n)
        )

    def _virtual_implications(self) -> np.ndarray:
        """Edge matrix of Dir(S): the strict virtual-implication test."""
        return self._implications_from(
            self.weights[:, _star_index(self.n_literals)]
        )

    def _zero_pairs_from(self, mixed: np.ndarray) -> np.ndarray:
        """Pairs with w_ab* = w_a*b = 0 (exact / below ZERO_EPS)."""
        n = self.n_literals
        if self.kind == "empirical":
            zero = (mixed == 0) & (mixed.T == 0)
        else:
            zero = (mixed < ZERO_EPS) & (mixed.T < ZERO_EPS)
        return zero & _pair_mask(n)

    def _zero_pairs(self) -> np.ndarray:
        return self._zero_pairs_from(
            self.weights[:, _star_index(self.n_literals)]
        )

    def derive_graph(self, extend_equivalences: bool = False) -> PocGraph:
        mixed = self.weights[:, _star_index(self.n_literals)]
        adj = self._implications_from(mixed)
        if extend_equivalences:
            # triangle inequality holds by construction for both update
            # dynamics (sums / convex combinations of indicators)
            adj = adj | self._zero_pairs_from(mixed)
        return PocGraph(self.n_literals, adj)

    def _truncate_inplace(self) -> None:
        if self.kind == "empirical":
            raise ValueError("truncation applies to probabilistic snapshots")
        n = self.n_literals
        sp = _star_index(n)
        edges = self._virtual_implications()
        if not edges.any():
            return
        # each square supports at most one implication orbit
        # {(a,b), (b*,a*)}; keep one representative per orbit
        idx = np.arange(n)
        code = idx[:, None] * n + idx[None, :]
        code_contra = (idx[None, :] ^ 1) * n + (idx[:, None] ^ 1)
        canonical = edges & (code < code_contra)
        delta = np.where(canonical, self.weights[:, sp], 0.0)
        self.weights += delta + delta.T
        d_ss = delta[sp][:, sp]
        self.weights += d_ss + d_ss.T
        d_sb = delta[sp, :]
        self.weights -= d_sb + d_sb.T
        zero_at = canonical[:, sp]
        self.weights[zero_at | zero_at.T] = 0.0

    # -- constraint checks -------------------------------------------------

    def _row_sums(self) -> np.ndarray:
        """w_a(b) = w_ab + w_ab*; constant over b for consistent snapshots."""
        n = self.n_literals
        return self.weights + self.weights[:, _star_index(n)]

    def sensor_weight(self, a: int):
        """w_a, taken from any valid partner column."""
        b = 0 if a > 1 else 2
        return self._row_sums()[a, b]

    def extended_weights(self) -> np.ndarray:
        """Weights extended to degenerate pairs: w_aa = w_a, w_aa* = 0."""
        n = self.n_literals
        w = self.weights.astype(float).copy()
        for a in range(n):
            w[a, a] = float(self.sensor_weight(a))
            w[a, a ^ 1] = 0.0
        return w

    def orientation_matrix(self) -> np.ndarray:
        """ori_ab = w_a*b - w_ab* over all literal pairs (extended)."""
        n = self.n_literals
        sp = _star_index(n)
        w = self.extended_weights()
        return w[sp, :] - w[:, sp]


def empirical_update(s: Snapshot, observation) -> Snapshot:
    """Functional empirical update: returns a new snapshot."""
    if s.kind != "empirical":
        raise ValueError("empirical_update requires an empirical snapshot")
    out = s.copy()
    out.ingest(observation)
    return out


def discounted_update(s: Snapshot, observation, q: Optional[float] = None
                      ) -> Snapshot:
    """Functional discounted update (with truncation): new snapshot."""
    if s.kind != "discounted":
        raise ValueError("discounted_update requires a discounted snapshot")
    out = s.copy()
    if q is not None:
        if not 0.0 <= q <= 1.0:
            raise ValueError("decay q must lie in [0, 1]")
        out.q = q
    out.ingest(observation)
    return out


def truncate(s: Snapshot) -> Snapshot:
    """Zero out certified-negligible weights with compensating transfers.

    Preserves probabilisticity and the derived graph exactly.
    """
    out = s.copy()
    out._truncate_inplace()
    return out


def derive_poc_graph(s: Snapshot) -> PocGraph:
    """The implication record Dir(S) (no equivalence edges)."""
    return s.derive_graph(extend_equivalences=False)


def extend_with_equivalences(s: Snapshot, g: PocGraph,
                             assume_triangle: bool = False) -> PocGraph:
    """Dir(S)_0: add both directed edges for every zero-pair square.

    Requires the triangle inequality (checked unless ``assume_triangle``),
    which guarantees the zero-pair classes quotient to an acyclic graph.
    """
    if not assume_triangle:
        ok, witness = check_triangle(s)
        if not ok:
            raise ValueError(
                f"triangle inequality violated at literal triple {witness}"
            )
    return PocGraph(g.n_literals, g.adj | s._zero_pairs())


def check_triangle(s: Snapshot, eps: float = PROB_EPS
                   ) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Δ_ac ≤ Δ_ab + Δ_bc for all distinct-sensor triples,
    Δ_ab = w_a*b + w_ab*."""
    n = s.n_literals
    sp = _star_index(n)
    w = s.weights.astype(float)
    delta = w[sp, :] + w[:, sp]
    pair = _pair_mask(n)
    for b in range(n):
        bound = delta[:, b][:, None] + delta[b, :][None, :]
        bad = (delta > bound + eps) & pair & pair[:, b][:, None] & pair[b, :][None, :]
        if bad.any():
            a, c = map(int, np.argwhere(bad)[0])
            return False, (a, b, c)
    return True, None


def is_probabilistic(s: Snapshot, eps: float = PROB_EPS
                     ) -> tuple[bool, list[str]]:
    """Check consistency, normalization, and the orientation cocycle."""
    n = s.n_literals
    sp = _star_index(n)
    pair = _pair_mask(n)
    w = s.weights.astype(float)
    report: list[str] = []
    row = w + w[:, sp]
    for a in range(n):
        values = row[a][pair[a]]
        if values.max() - values.min() > eps:
            report.append(
                f"consistency: w_a b + w_a b* varies with b for literal {a}"
            )
            break
    square_sum = w + w[:, sp] + w[sp, :] + w[sp][:, sp]
    if np.abs(square_sum[pair] - 1.0).max() > eps:
        report.append("normalization: some square does not sum to 1")
    ori = s.orientation_matrix()
    defect = np.abs(
        ori[:, :, None] + ori[None, :, :] - ori[:, None, :]
    ).max()
    if defect > eps:
        report.append(f"orientation cocycle: additivity defect {defect:.3g}")
    return (not report), report


def orientation_cocycle(s: Snapshot, a: int, b: int) -> float:
    """ori_ab = w_a*b - w_ab*, extended to degenerate pairs."""
    return float(s.orientation_matrix()[a, b])


def is_empirical(s: Snapshot) -> bool:
    """Numeric characterization of evolutions of the trivial snapshot."""
    n = s.n_literals
    pair = _pair_mask(n)
    w = s.weights
    if not np.issubdtype(w.dtype, np.integer):
        if not np.array_equal(w, np.round(w)):
            return False
        w = w.astype(np.int64)
    if (w[pair] < 0).any():
        return False
    sp = _star_index(n)
    row = w + w[:, sp]
    w_a = np.zeros(n, dtype=np.int64)
    for a in range(n):
        values = row[a][pair[a]]
        if values.max() != values.min():
            return False
        w_a[a] = values[0]
    clocks = w_a + w_a[sp]
    if len(set(clocks.tolist())) != 1 or clocks[0] != s.clock:
        return False
    # state must be a *-selection vanishing wherever w_a does
    if (s.state & s.state[sp]).any():
        return False
    if (s.state & (w_a == 0)).any():
        return False
    return True


def _full_decomposition(w: np.ndarray, clock: int,
                        n: int) -> Optional[list[frozenset[int]]]:
    """Decompose the weights into ``clock`` complete-*-selection
    indicators, or return None if no such decomposition exists.

    A greedy step-by-step peeling is unsound (a locally valid selection
    can strand the remainder), so this is solved exactly as an integer
    feasibility problem over the multiset of candidate selections.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    k = n // 2
    if k > 12:
        raise ValueError("decomposition search supports at most 12 sensors")
    selections = [
        frozenset(2 * i + ((bits >> i) & 1) for i in range(k))
        for bits in range(2 ** k)
    ]
    entries = [
        (a, b) for a in range(n) for b in range(a + 1, n) if b != (a ^ 1)
    ]
    system = np.zeros((len(entries) + 1, len(selections)))
    for j, selection in enumerate(selections):
        for i, (a, b) in enumerate(entries):
            system[i, j] = float(a in selection and b in selection)
        system[-1, j] = 1.0
    target = np.array([float(w[a, b]) for a, b in entries] + [float(clock)])
    result = milp(
        c=np.zeros(len(selections)),
        constraints=LinearConstraint(system, target, target),
        integrality=np.ones(len(selections)),
        bounds=Bounds(0, clock),
    )
    if not result.success:
        return None
    counts = np.round(result.x).astype(np.int64)
    pair = _pair_mask(n)
    total = np.zeros((n, n), dtype=np.int64)
    for j in np.flatnonzero(counts):
        mask = lits_to_mask(n, selections[j])
        total += counts[j] * (np.outer(mask, mask) & pair)
    if not np.array_equal(total, np.asarray(np.round(w), dtype=np.int64)):
        raise RuntimeError("decomposition solver returned an inexact solution")
    return [
        selections[j]
        for j in np.flatnonzero(counts)
        for _ in range(counts[j])
    ]


def decompose_evolution(s: Snapshot
                        ) -> Optional[tuple[Snapshot, frozenset[int]]]:
    """Invert one empirical update: find a complete *-selection O whose
    indicator can be subtracted so that the remainder still decomposes
    all the way down to the trivial snapshot.

    Returns (predecessor, O), or None for the trivial snapshot.
    """
    if s.clock == 0:
        return None
    if not is_empirical(s):
        raise ValueError("decompose_evolution requires an empirical snapshot")
    n = s.n_literals
    steps = _full_decomposition(s.weights, s.clock, n)
    if steps is None:
        raise ValueError("snapshot is not an evolution of the trivial snapshot")
    state = frozenset(np.flatnonzero(s.state).tolist())
    observation = next(
        (sel for sel in steps if state <= sel), steps[0]
    )
    mask = lits_to_mask(n, observation)
    pred = s.copy()
    pred.weights = s.weights - (np.outer(mask, mask) & _pair_mask(n))
    pred.clock = s.clock - 1
    sp = _star_index(n)
    pair = _pair_mask(n)
    row = pred.weights + pred.weights[:, sp]
    w_a = np.array([row[a][pair[a]][0] for a in range(n)])
    pred.state = w_a > w_a[sp]
    if hasattr(pred, "_graph"):
        del pred._graph
    return pred, frozenset(observation)


# -- serialization ---------------------------------------------------------

def snapshot_to_json(s: Snapshot) -> str:
    return json.dumps(
        {
            "sensors": list(s.sensorium.names),
            "degrees": list(s.sensorium.degrees),
            "kind": s.kind,
            "q": s.q,
            "clock": s.clock,
            "tau": s.tau.tolist(),
            "weights": s.weights.tolist(),
            "state": [
                s.sensorium.literal_name(a) for a in np.flatnonzero(s.state)
            ],
        }
    )


def snapshot_from_json(text: str) -> Snapshot:
    data = json.loads(text)
    sensorium = Sensorium(tuple(data["sensors"]), tuple(data["degrees"]))
    s = Snapshot(sensorium, np.array(data["tau"]), data["kind"], data["q"])
    dtype = np.int32 if data["kind"] == "empirical" else np.float64
    s.weights = np.array(data["weights"], dtype=dtype)
    s.clock = int(data["clock"])
    s.state = lits_to_mask(
        sensorium.n_literals,
        [sensorium.parse_literal(name) for name in data["state"]],
    )
    return s
