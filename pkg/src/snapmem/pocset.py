"""Weak poc sets: sensor literals with complementation and a partial order.

A sensorium indexes ``n`` binary sensors.  Sensor ``i`` contributes the
"proper" literals ``2*i`` (positive reading) and ``2*i + 1`` (starred
reading); the complementation involution ``star`` is XOR with 1.  Two
virtual literals ``ZERO`` (never fires) and ``ONE`` (always fires) sit
below and above every proper literal; they are kept outside the dense
index range so snapshot weight matrices never see them.

A weak poc set is a partial order on the literals such that ``a <= b``
implies ``star(b) <= star(a)`` and ``ZERO <= a <= ONE`` throughout.
"Weak" means ``a <= star(a)`` is permitted; such a literal is negligible
(its complement is then ubiquitous).  Mutually comparable literals form
equivalence classes rather than being rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Virtual minimum literal.  star(ZERO) == ONE because -2 ^ 1 == -1.
ZERO = -2
#: Virtual maximum literal.
ONE = -1


def star(literal: int) -> int:
    """The complementation involution on literals (works for ZERO/ONE too)."""
    return literal ^ 1


def star_set(literals: Iterable[int]) -> frozenset[int]:
    """Image of a literal set under star."""
    return frozenset(lit ^ 1 for lit in literals)


@dataclass(frozen=True)
class Sensorium:
    """An indexed family of binary sensors closed under complementation.

    ``names[i]`` is the label of sensor ``i``; ``degrees[i]`` is 0 for
    state sensors and 1 for transition sensors.
    """

    names: tuple[str, ...]
    degrees: tuple[int, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.degrees is None:
            object.__setattr__(self, "degrees", (0,) * len(self.names))
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("sensor names must be unique")

    @property
    def n_sensors(self) -> int:
        return len(self.names)

    @property
    def n_literals(self) -> int:
        return 2 * len(self.names)

    def literals(self) -> range:
        """All proper literals, in index order."""
        return range(self.n_literals)

    def is_proper(self, literal: int) -> bool:
        return 0 <= literal < self.n_literals

    def literal_name(self, literal: int) -> str:
        if literal == ZERO:
            return "0"
        if literal == ONE:
            return "1"
        if not self.is_proper(literal):
            raise ValueError(f"unknown literal {literal}")
        name = self.names[literal // 2]
        return name + "*" if literal % 2 else name

    def parse_literal(self, text: str) -> int:
        starred = text.endswith("*")
        name = text[:-1] if starred else text
        if name == "0":
            return ONE if starred else ZERO
        if name == "1":
            return ZERO if starred else ONE
        try:
            index = self.names.index(name)
        except ValueError:
            raise ValueError(f"unknown sensor name {name!r}") from None
        return 2 * index + (1 if starred else 0)


def _transitive_closure(adjacency: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean adjacency matrix."""
    reach = adjacency.copy()
    np.fill_diagonal(reach, True)
    while True:
        step = (reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0
        new = reach | step
        if np.array_equal(new, reach):
            return new
        reach = new


class WeakPocSet:
    """Immutable weak poc set over a sensorium.

    The order is held as a reflexive-transitive boolean reachability
    matrix over the proper literals, closed under contraposition.
    ZERO/ONE comparisons are answered positionally.
    """

    def __init__(self, sensorium: Sensorium, reach: np.ndarray):
        n = sensorium.n_literals
        if reach.shape != (n, n):
            raise ValueError("reachability matrix shape mismatch")
        self.sensorium = sensorium
        self._reach = reach
        self._reach.setflags(write=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_generators(
        cls, sensorium: Sensorium, relations: Sequence[tuple[int, int]]
    ) -> "WeakPocSet":
        """Smallest weak poc set containing the given ``a <= b`` relations.

        The result is closed under transitivity and contraposition
        (``a <= b`` implies ``star(b) <= star(a)``).
        """
        n = sensorium.n_literals
        adjacency = np.zeros((n, n), dtype=bool)
        for a, b in relations:
            for lit in (a, b):
                if not sensorium.is_proper(lit):
                    raise ValueError(f"unknown literal index {lit}")
            adjacency[a, b] = True
            adjacency[b ^ 1, a ^ 1] = True
        return cls(sensorium, _transitive_closure(adjacency))

    @classmethod
    def free(cls, sensorium: Sensorium) -> "WeakPocSet":
        """The free weak poc set: all proper pairs cross."""
        return cls.from_generators(sensorium, [])

    # -- order queries -----------------------------------------------------

    @property
    def reach(self) -> np.ndarray:
        return self._reach

    def leq(self, a: int, b: int) -> bool:
        """True iff ``a <= b``."""
        if a == b:
            return True
        if a == ZERO or b == ONE:
            return True
        if b == ZERO or a == ONE:
            return False
        return bool(self._reach[a, b])

    def classify_pair(self, a: int, b: int) -> str:
        """Nesting class of a proper pair: one of the four nested forms or
        ``"crossing"``."""
        if not (self.sensorium.is_proper(a) and self.sensorium.is_proper(b)):
            raise ValueError("classify_pair requires proper literals")
        if b in (a, a ^ 1):
            raise ValueError("classify_pair requires literals of distinct sensors")
        if self._reach[a, b]:
            return "a<=b"
        if self._reach[a ^ 1, b]:
            return "a*<=b"
        if self._reach[a, b ^ 1]:
            return "a<=b*"
        if self._reach[a ^ 1, b ^ 1]:
            return "a*<=b*"
        return "crossing"

    def crosses(self, a: int, b: int) -> bool:
        return self.classify_pair(a, b) == "crossing"

    # -- up/down sets and coherence ---------------------------------------

    def up_set(self, literals: Iterable[int]) -> frozenset[int]:
        """Union of principal up-sets ``up(a) = {b : a <= b}`` (with ONE)."""
        result: set[int] = set()
        for a in literals:
            if a == ZERO:
                result.update(self.sensorium.literals())
                result.update((ZERO, ONE))
            elif a == ONE:
                result.add(ONE)
            else:
                result.update(np.flatnonzero(self._reach[a]).tolist())
                result.add(ONE)
        return frozenset(result)

    def down_set(self, literals: Iterable[int]) -> frozenset[int]:
        """Union of principal down-sets ``down(a) = {b : b <= a}`` (with ZERO)."""
        result: set[int] = set()
        for a in literals:
            if a == ONE:
                result.update(self.sensorium.literals())
                result.update((ZERO, ONE))
            elif a == ZERO:
                result.add(ZERO)
            else:
                result.update(np.flatnonzero(self._reach[:, a]).tolist())
                result.add(ZERO)
        return frozenset(result)

    def is_coherent(self, literals: Iterable[int]) -> bool:
        """True iff no two members satisfy ``a <= star(b)``."""
        items = list(literals)
        return not any(self.leq(a, b ^ 1) for a in items for b in items)

    def coherent_projection(self, literals: Iterable[int]) -> frozenset[int]:
        """``coh(A) = up(A) \\ down(A*)``: coherent, up-closed, idempotent."""
        items = frozenset(literals)
        return self.up_set(items) - self.down_set(star_set(items))

    # -- classification ----------------------------------------------------

    def is_negligible(self, a: int) -> bool:
        if a == ZERO:
            return True
        if a == ONE:
            return False
        return bool(self._reach[a, a ^ 1])

    def is_ubiquitous(self, a: int) -> bool:
        return self.is_negligible(a ^ 1)

    def proper_literals(self) -> list[int]:
        """Literals that are neither negligible nor ubiquitous."""
        return [
            a
            for a in self.sensorium.literals()
            if not self.is_negligible(a) and not self.is_ubiquitous(a)
        ]

    def equivalence_classes(self) -> list[frozenset[int]]:
        """Classes of mutual reachability among proper literals."""
        mutual = self._reach & self._reach.T
        seen: set[int] = set()
        classes = []
        for a in self.sensorium.literals():
            if a in seen:
                continue
            members = frozenset(np.flatnonzero(mutual[a]).tolist())
            seen.update(members)
            classes.append(members)
        return classes

    @property
    def is_canonical(self) -> bool:
        """True iff there are no negligible literals and no merged classes."""
        n = self.sensorium.n_literals
        if any(self.is_negligible(a) for a in range(n)):
            return False
        mutual = self._reach & self._reach.T
        return int(mutual.sum()) == n

    # -- constructions -----------------------------------------------------

    def canonical_quotient(self) -> tuple["WeakPocSet", dict[int, int]]:
        """Merge negligible literals into ZERO, ubiquitous into ONE, and
        mutually-comparable literals into a single representative.

        Returns the quotient poc set and the literal map (a poc morphism;
        ZERO/ONE map to themselves).

        A literal equivalent to its own complement would force ZERO and
        ONE to merge, so no quotient exists; this is rejected.
        """
        for a in self.sensorium.literals():
            if self._reach[a, a ^ 1] and self._reach[a ^ 1, a]:
                name = self.sensorium.literal_name(a)
                raise ValueError(
                    f"literal {name} is equivalent to its complement; "
                    "the structure has no canonical quotient"
                )
        mapping: dict[int, int] = {ZERO: ZERO, ONE: ONE}
        for a in self.sensorium.literals():
            if self.is_negligible(a):
                mapping[a] = ZERO
            elif self.is_ubiquitous(a):
                mapping[a] = ONE
        mutual = self._reach & self._reach.T
        new_names: list[str] = []
        new_degrees: list[int] = []
        reps: list[int] = []  # old literal representing each new literal
        for a in self.sensorium.literals():
            if a in mapping:
                continue
            new_index = len(new_names)
            new_names.append(self.sensorium.names[a // 2])
            new_degrees.append(self.sensorium.degrees[a // 2])
            for member in np.flatnonzero(mutual[a]).tolist():
                mapping[member] = 2 * new_index
                mapping[member ^ 1] = 2 * new_index + 1
            reps.extend((a, a ^ 1))
        new_sensorium = Sensorium(tuple(new_names), tuple(new_degrees))
        m = new_sensorium.n_literals
        reach = np.zeros((m, m), dtype=bool)
        for x in range(m):
            for y in range(m):
                reach[x, y] = self._reach[reps[x], reps[y]]
        np.fill_diagonal(reach, True)
        return WeakPocSet(new_sensorium, reach), mapping

    def direct_sum(self, other: "WeakPocSet") -> "WeakPocSet":
        """Disjoint union of orders: every cross pair is transverse."""
        overlap = set(self.sensorium.names) & set(other.sensorium.names)
        if overlap:
            raise ValueError(f"sensoria not disjoint: {sorted(overlap)}")
        names = self.sensorium.names + other.sensorium.names
        degrees = self.sensorium.degrees + other.sensorium.degrees
        n1 = self.sensorium.n_literals
        n2 = other.sensorium.n_literals
        reach = np.zeros((n1 + n2, n1 + n2), dtype=bool)
        reach[:n1, :n1] = self._reach
        reach[n1:, n1:] = other._reach
        return WeakPocSet(Sensorium(names, degrees), reach)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        relations = [
            [self.sensorium.literal_name(a), self.sensorium.literal_name(b)]
            for a in self.sensorium.literals()
            for b in self.sensorium.literals()
            if a != b and self._reach[a, b]
        ]
        return json.dumps(
            {"sensors": list(self.sensorium.names), "relations": relations},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "WeakPocSet":
        data = json.loads(text)
        sensorium = Sensorium(tuple(data["sensors"]))
        relations = [
            (sensorium.parse_literal(a), sensorium.parse_literal(b))
            for a, b in data["relations"]
        ]
        return cls.from_generators(sensorium, relations)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeakPocSet):
            return NotImplemented
        return self.sensorium == other.sensorium and np.array_equal(
            self._reach, other._reach
        )

    def __repr__(self) -> str:
        n_rel = int(self._reach.sum()) - self.sensorium.n_literals
        return f"WeakPocSet({self.sensorium.n_sensors} sensors, {n_rel} relations)"
