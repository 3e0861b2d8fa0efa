"""Weak poc sets: order queries, coherence, projections, constructions."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snapmem.cubing import Cubing
from snapmem.pocset import ONE, ZERO, Sensorium, WeakPocSet, star, star_set

from conftest import warshall


def abc():
    return Sensorium(("a", "b", "c"))


# literal shorthands over a 3-sensor sensorium
A, As, B, Bs, C, Cs = 0, 1, 2, 3, 4, 5


class TestSensorium:
    def test_star_involution(self):
        for lit in (-2, -1, 0, 1, 5, 6):
            assert star(star(lit)) == lit
            assert star(lit) != lit

    def test_star_of_zero_is_one(self):
        assert star(ZERO) == ONE
        assert star(ONE) == ZERO

    def test_names_round_trip(self):
        s = abc()
        for lit in (A, As, C, Cs, ZERO, ONE):
            assert s.parse_literal(s.literal_name(lit)) == lit

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            Sensorium(("a", "a"))


class TestFromGenerators:
    def test_contraposition_added(self):
        p = WeakPocSet.from_generators(abc(), [(A, C), (B, C)])
        assert p.leq(Cs, As)
        assert p.leq(Cs, Bs)

    def test_empty_relations_free(self):
        p = WeakPocSet.free(abc())
        for a, b in itertools.permutations((A, B, C), 2):
            assert p.crosses(a, b)
        assert p.leq(ZERO, A)
        assert p.leq(A, ONE)

    def test_transitivity(self):
        p = WeakPocSet.from_generators(abc(), [(A, B), (B, C)])
        assert p.leq(A, C)

    def test_unknown_literal_rejected(self):
        with pytest.raises(ValueError):
            WeakPocSet.from_generators(abc(), [(A, 17)])

    def test_matches_warshall_oracle(self, rng):
        for _ in range(50):
            n = 8  # 4 sensors
            relations = []
            for a in range(n):
                for b in range(n):
                    if b not in (a, a ^ 1) and rng.random() < 0.2:
                        relations.append((a, b))
            p = WeakPocSet.from_generators(Sensorium(("w", "x", "y", "z")),
                                           relations)
            adjacency = np.zeros((n, n), dtype=bool)
            for a, b in relations:
                adjacency[a, b] = True
                adjacency[b ^ 1, a ^ 1] = True
            assert np.array_equal(p.reach, warshall(adjacency))


class TestLeq:
    def test_contraposition_example(self):
        p = WeakPocSet.from_generators(abc(), [(A, C), (B, C)])
        assert p.leq(Cs, As)

    def test_reflexive(self):
        p = WeakPocSet.free(abc())
        for lit in (A, Bs, ZERO, ONE):
            assert p.leq(lit, lit)

    def test_free_pair_crosses(self):
        p = WeakPocSet.free(Sensorium(("a", "b")))
        assert not p.leq(0, 2)

    def test_contraposition_closure_everywhere(self, rng):
        for _ in range(20):
            relations = [
                (int(rng.integers(8)), int(rng.integers(8)))
                for _ in range(6)
            ]
            relations = [r for r in relations if r[1] not in (r[0], r[0] ^ 1)]
            p = WeakPocSet.from_generators(Sensorium(("w", "x", "y", "z")),
                                           relations)
            for a in range(8):
                for b in range(8):
                    assert p.leq(a, b) == p.leq(b ^ 1, a ^ 1)


class TestClassifyPair:
    def test_nested(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "b")), [(0, 2)])
        assert p.classify_pair(0, 2) == "a<=b"

    def test_crossing(self):
        p = WeakPocSet.free(Sensorium(("a", "b")))
        assert p.classify_pair(0, 2) == "crossing"

    def test_six_cycle(self):
        # a_i < a_{i+3}* around a 6-cycle
        s = Sensorium(tuple(f"a{i}" for i in range(6)))
        relations = [(2 * i, 2 * ((i + 3) % 6) + 1) for i in range(6)]
        p = WeakPocSet.from_generators(s, relations)
        assert p.classify_pair(0, 2 * 3) == "a<=b*"

    def test_same_sensor_rejected(self):
        p = WeakPocSet.free(abc())
        with pytest.raises(ValueError):
            p.classify_pair(A, As)
        with pytest.raises(ValueError):
            p.classify_pair(A, ZERO)


class TestUpDownSets:
    def test_chain_up(self):
        p = WeakPocSet.from_generators(abc(), [(A, B), (B, C)])
        assert p.up_set({A}) == {A, B, C, ONE}

    def test_empty(self):
        p = WeakPocSet.free(abc())
        assert p.up_set(set()) == frozenset()
        assert p.down_set(set()) == frozenset()

    def test_chain_down(self):
        p = WeakPocSet.from_generators(abc(), [(A, B), (B, C)])
        assert p.down_set({Cs}) == {Cs, ZERO}

    def test_duality(self, rng):
        for _ in range(20):
            relations = [
                (int(rng.integers(6)), int(rng.integers(6))) for _ in range(4)
            ]
            relations = [r for r in relations if r[1] not in (r[0], r[0] ^ 1)]
            p = WeakPocSet.from_generators(abc(), relations)
            sample = frozenset(
                int(x) for x in rng.choice(6, size=2, replace=False)
            )
            assert p.up_set(star_set(sample)) == star_set(p.down_set(sample))


class TestCoherence:
    def test_incoherent_pair(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "c")), [(0, 2)])
        assert not p.is_coherent({0, 3})  # {a, c*} with a <= c

    def test_empty_coherent(self):
        assert WeakPocSet.free(abc()).is_coherent(set())

    def test_coherent_pair(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "c")), [(0, 2)])
        assert p.is_coherent({0, 2})


class TestCoherentProjection:
    def test_coherent_input_is_up_set(self):
        p = WeakPocSet.from_generators(abc(), [(A, C)])
        assert p.coherent_projection({A}) == {A, C, ONE}

    def test_incoherent_collapse(self):
        p = WeakPocSet.from_generators(abc(), [(A, C)])
        assert p.coherent_projection({A, Cs}) == {ONE}

    def test_fixes_dual_vertices(self):
        p = WeakPocSet.from_generators(abc(), [(A, Cs), (B, Cs)])
        c = Cubing(p)
        for v in c.vertices:
            assert p.coherent_projection(v) - {ONE} == v

    @given(st.integers(0, 2 ** 6 - 1), st.integers(0, 10 ** 6))
    @settings(max_examples=100, deadline=None)
    def test_idempotent_up_closed_coherent(self, bits, seed):
        rng = np.random.default_rng(seed)
        relations = [
            (int(rng.integers(6)), int(rng.integers(6))) for _ in range(4)
        ]
        relations = [r for r in relations if r[1] not in (r[0], r[0] ^ 1)]
        p = WeakPocSet.from_generators(abc(), relations)
        subset = frozenset(i for i in range(6) if bits >> i & 1)
        coh = p.coherent_projection(subset)
        assert p.coherent_projection(coh) == coh
        assert p.up_set(coh) == coh | ({ONE} if coh else set())
        assert p.is_coherent(coh - {ONE})


class TestClassification:
    def test_negligible(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "b")), [(0, 1)])
        assert p.is_negligible(0)
        assert p.is_ubiquitous(1)
        assert p.proper_literals() == [2, 3]

    def test_equivalence_classes(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "b")), [(0, 2), (2, 0)])
        classes = {frozenset(c) for c in p.equivalence_classes()}
        assert frozenset({0, 2}) in classes
        assert frozenset({1, 3}) in classes


class TestCanonicalQuotient:
    def test_negligible_to_zero(self):
        p = WeakPocSet.from_generators(abc(), [(A, As)])
        quotient, mapping = p.canonical_quotient()
        assert mapping[A] == ZERO
        assert mapping[As] == ONE
        assert quotient.sensorium.n_sensors == 2

    def test_identity_when_canonical(self):
        p = WeakPocSet.from_generators(abc(), [(A, C)])
        quotient, mapping = p.canonical_quotient()
        assert quotient == p
        assert all(mapping[a] == a for a in range(6))

    def test_merges_equivalent(self):
        p = WeakPocSet.from_generators(abc(), [(A, B), (B, A)])
        quotient, mapping = p.canonical_quotient()
        assert quotient.sensorium.n_sensors == 2
        assert mapping[A] == mapping[B]
        assert mapping[As] == mapping[Bs]
        assert quotient.is_canonical

    def test_degenerate_self_equivalence_rejected(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "b")),
                                       [(0, 1), (1, 0)])
        with pytest.raises(ValueError, match="no canonical quotient"):
            p.canonical_quotient()

    def test_morphism_property(self, rng):
        # the map preserves order and star on every pair
        for _ in range(20):
            relations = [
                (int(rng.integers(8)), int(rng.integers(8))) for _ in range(8)
            ]
            relations = [r for r in relations if r[1] != r[0]]
            p = WeakPocSet.from_generators(Sensorium(("w", "x", "y", "z")),
                                           relations)
            if any(
                p.leq(a, a ^ 1) and p.leq(a ^ 1, a) for a in range(8)
            ):
                continue
            quotient, mapping = p.canonical_quotient()
            for a in range(8):
                assert mapping[a ^ 1] == star(mapping[a])
                for b in range(8):
                    if p.leq(a, b):
                        assert quotient.leq(mapping[a], mapping[b])


class TestDirectSum:
    def test_grid_product(self):
        p = WeakPocSet.from_generators(Sensorium(("x1", "x2")), [(0, 2)])
        q = WeakPocSet.from_generators(Sensorium(("y1", "y2")), [(0, 2)])
        assert len(Cubing(p.direct_sum(q)).vertices) == 9

    def test_sum_with_empty(self):
        p = WeakPocSet.from_generators(abc(), [(A, C)])
        empty = WeakPocSet.free(Sensorium(()))
        total = p.direct_sum(empty)
        assert np.array_equal(total.reach, p.reach)

    def test_free_sum_is_cube(self):
        p = WeakPocSet.free(Sensorium(("a", "b")))
        q = WeakPocSet.free(Sensorium(("c",)))
        assert len(Cubing(p.direct_sum(q)).vertices) == 8

    def test_cross_pairs_transverse(self):
        p = WeakPocSet.from_generators(Sensorium(("a", "b")), [(0, 2)])
        q = WeakPocSet.from_generators(Sensorium(("c", "d")), [(0, 2)])
        total = p.direct_sum(q)
        for a in range(4):
            for b in range(4, 8):
                assert total.crosses(a, b)

    def test_vertex_count_multiplies(self, rng):
        for _ in range(10):
            names1 = ("a", "b")
            names2 = ("c", "d", "e")
            r1 = [(int(rng.integers(4)), int(rng.integers(4)))
                  for _ in range(2)]
            r2 = [(int(rng.integers(6)), int(rng.integers(6)))
                  for _ in range(3)]
            r1 = [r for r in r1 if r[1] not in (r[0], r[0] ^ 1)]
            r2 = [r for r in r2 if r[1] not in (r[0], r[0] ^ 1)]
            p = WeakPocSet.from_generators(Sensorium(names1), r1)
            q = WeakPocSet.from_generators(Sensorium(names2), r2)
            if not (p.is_canonical and q.is_canonical):
                continue
            assert len(Cubing(p.direct_sum(q)).vertices) == len(
                Cubing(p).vertices
            ) * len(Cubing(q).vertices)

    def test_overlapping_sensoria_rejected(self):
        p = WeakPocSet.free(abc())
        with pytest.raises(ValueError):
            p.direct_sum(WeakPocSet.free(Sensorium(("a",))))


class TestSerialization:
    def test_round_trip(self):
        p = WeakPocSet.from_generators(abc(), [(A, C), (B, Cs)])
        assert WeakPocSet.from_json(p.to_json()) == p

    def test_text_literal_syntax(self):
        p = WeakPocSet.from_json(
            '{"sensors": ["a", "b"], "relations": [["a", "b*"]]}'
        )
        assert p.leq(0, 3)
        assert p.leq(2, 1)
