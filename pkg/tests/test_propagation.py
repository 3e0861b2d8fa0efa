"""Signal propagation and the greedy reactive planner, checked against
reachability and convex-projection oracles."""

import numpy as np
import pytest

from snapmem.cubing import Cubing
from snapmem.oracles import (
    random_canonical_pocset,
    random_coherent_set,
    random_complete_selection,
)
from snapmem.pocset import Sensorium
from snapmem.propagation import (
    OpCounter,
    PlanDecision,
    action_signal,
    closure,
    grp_decide,
    lits_to_mask,
    mask_to_lits,
    predict_action,
    project_to_target,
    propagate,
    star_mask,
)
from snapmem.snapshot import PocGraph

from conftest import warshall


def reach_graph(pocset) -> PocGraph:
    """The full reachability relation as a propagation graph."""
    adj = pocset.reach.copy()
    np.fill_diagonal(adj, False)
    return PocGraph(pocset.sensorium.n_literals, adj)


def coh_mask(pocset, literals) -> np.ndarray:
    """coh(A) = up(A) \\ down(A*) over proper literals (oracle)."""
    n = pocset.sensorium.n_literals
    up = {b for a in literals for b in pocset.up_set({a}) if b >= 0}
    down = {
        b
        for a in literals
        for b in pocset.down_set({a ^ 1})
        if b >= 0
    }
    return lits_to_mask(n, up - down)


class TestMasks:
    def test_round_trip(self):
        mask = lits_to_mask(6, {0, 3, 4})
        assert mask_to_lits(mask) == frozenset({0, 3, 4})

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            lits_to_mask(4, {4})

    def test_star_is_an_involution(self, rng):
        mask = rng.random(8) < 0.5
        assert np.array_equal(star_mask(star_mask(mask)), mask)
        assert np.array_equal(star_mask(lits_to_mask(4, {0, 3})),
                              lits_to_mask(4, {1, 2}))


class TestClosure:
    def test_matches_warshall(self, rng):
        for _ in range(30):
            n = 8
            adj = rng.random((n, n)) < 0.2
            np.fill_diagonal(adj, False)
            g = PocGraph(n, adj)
            reach = warshall(adj)
            for _ in range(5):
                signal = rng.random(n) < 0.3
                expected = signal.copy()
                for a in np.flatnonzero(signal):
                    expected |= reach[a]
                assert np.array_equal(closure(g, signal), expected)

    def test_op_count_bounded(self, rng):
        for _ in range(10):
            p = random_canonical_pocset(rng, 5, 0.2)
            g = reach_graph(p)
            counter = OpCounter()
            signal = rng.random(p.sensorium.n_literals) < 0.4
            closure(g, signal, counter)
            assert counter.ops <= int(g.adj.sum()) + p.sensorium.n_literals


class TestPropagate:
    def test_empty_load_is_coherent_projection(self, rng):
        checked = 0
        while checked < 100:
            p = random_canonical_pocset(rng, 4, 0.25)
            n = p.sensorium.n_literals
            g = reach_graph(p)
            size = int(rng.integers(0, n + 1))
            observation = frozenset(
                int(x) for x in rng.choice(n, size=size, replace=False)
            )
            result = propagate(g, np.zeros(n, dtype=bool),
                               lits_to_mask(n, observation))
            assert np.array_equal(result, coh_mask(p, observation))
            checked += 1

    def test_result_coherent_and_up_closed(self, rng):
        checked = 0
        while checked < 60:
            p = random_canonical_pocset(rng, 4, 0.25)
            n = p.sensorium.n_literals
            g = reach_graph(p)
            s = random_coherent_set(p, rng)
            t = random_coherent_set(p, rng)
            if s is None or t is None:
                continue
            load = lits_to_mask(n, p.up_set(s) & set(range(n)))
            result = propagate(g, load, lits_to_mask(n, t))
            assert not (result & star_mask(result)).any()
            for a in np.flatnonzero(result):
                for b in np.flatnonzero(p.reach[a]):
                    assert result[b]
            checked += 1

    def test_matches_convex_projection(self, rng):
        checked = 0
        while checked < 100:
            p = random_canonical_pocset(rng, 4, 0.25)
            n = p.sensorium.n_literals
            c = Cubing(p)
            s = random_coherent_set(p, rng)
            t = random_coherent_set(p, rng)
            if s is None or t is None:
                continue
            if not c.halfspace(s) or not c.halfspace(t):
                continue
            load = lits_to_mask(n, p.up_set(s) & set(range(n)))
            result = project_to_target(reach_graph(p), load,
                                       lits_to_mask(n, t))
            assert c.halfspace(mask_to_lits(result)) == c.project_convex(s, t)
            checked += 1


PLAN = Sensorium(("a", "b", "alpha"))
A, As, B, Bs, ALPHA, ALPHAs = range(6)


def plan_graph() -> PocGraph:
    adj = np.zeros((6, 6), dtype=bool)
    adj[ALPHA, B] = adj[Bs, ALPHAs] = True  # invoking alpha forces b
    return PocGraph(6, adj)


class TestActionSignal:
    def test_plain(self):
        current = lits_to_mask(6, {A})
        signal = action_signal(6, {ALPHA}, current)
        assert mask_to_lits(signal) == frozenset({ALPHA})

    def test_context_requires_action_and_standing_sensor(self):
        sens = Sensorium(("a", "b", "alpha", "c"))
        context_of = {(4, 0): 6}  # c records "alpha while a"
        on = action_signal(8, {4}, lits_to_mask(8, {0}), context_of)
        assert mask_to_lits(on) == frozenset({4, 6})
        off_sensor = action_signal(8, {4}, lits_to_mask(8, {1}), context_of)
        assert mask_to_lits(off_sensor) == frozenset({4})
        off_action = action_signal(8, {5}, lits_to_mask(8, {0}), context_of)
        assert mask_to_lits(off_action) == frozenset({5})


class TestPredictAction:
    def test_hallucinated_post_state(self):
        current = lits_to_mask(6, {A})
        post = predict_action(plan_graph(), current, {ALPHA})
        assert mask_to_lits(post) == frozenset({A, ALPHA, B})

    def test_contradicted_load_is_dropped(self):
        current = lits_to_mask(6, {A, Bs})
        post = predict_action(plan_graph(), current, {ALPHA})
        # the prediction b overrides the standing b*
        assert mask_to_lits(post) == frozenset({A, ALPHA, B})


class TestGrpDecide:
    def test_progress_picks_forcing_action(self, rng):
        decision = grp_decide(
            plan_graph(), lits_to_mask(6, {A}), {B},
            [frozenset({ALPHA}), frozenset({ALPHAs})], rng,
        )
        assert decision.chosen == frozenset({ALPHA})
        assert decision.achieved_subgoals == 1
        assert not decision.fallback
        assert decision.scores == (1, 0)

    def test_progress_at_target_falls_back(self, rng):
        decision = grp_decide(
            plan_graph(), lits_to_mask(6, {A, B}), {B},
            [frozenset({ALPHA}), frozenset({ALPHAs})], rng,
        )
        assert decision.fallback and decision.achieved_subgoals == 0

    def test_guarantee_holds_position(self, rng):
        decision = grp_decide(
            plan_graph(), lits_to_mask(6, {A, B}), {B},
            [frozenset({ALPHA}), frozenset({ALPHAs})], rng,
            mode="guarantee",
        )
        assert decision.chosen == frozenset({ALPHA})
        assert not decision.fallback

    def test_tie_break_uses_rng(self):
        actions = [frozenset({ALPHA}), frozenset({ALPHAs})]
        g = PocGraph(6, np.zeros((6, 6), dtype=bool))
        picks = {
            grp_decide(
                g, lits_to_mask(6, {A}), {B}, actions,
                np.random.default_rng(seed),
            ).chosen
            for seed in range(40)
        }
        assert picks == set(actions)  # both fallbacks occur

    def test_deterministic_replay(self):
        args = (plan_graph(), lits_to_mask(6, {A}), {B},
                [frozenset({ALPHA}), frozenset({ALPHAs})])
        first = grp_decide(*args, np.random.default_rng(7))
        second = grp_decide(*args, np.random.default_rng(7))
        assert first == second

    def test_empty_actions_rejected(self, rng):
        with pytest.raises(ValueError):
            grp_decide(plan_graph(), lits_to_mask(6, {A}), {B}, [], rng)

    def test_unknown_mode_rejected(self, rng):
        with pytest.raises(ValueError):
            grp_decide(plan_graph(), lits_to_mask(6, {A}), {B},
                       [frozenset({ALPHA})], rng, mode="optimal")

    def test_trace_hook_sees_decision(self, rng):
        seen = []
        grp_decide(
            plan_graph(), lits_to_mask(6, {A}), {B},
            [frozenset({ALPHA}), frozenset({ALPHAs})], rng,
            trace_hook=lambda *record: seen.append(record),
        )
        subgoals, scores, decision = seen[0]
        assert subgoals == frozenset({B})
        assert scores == (1, 0)
        assert isinstance(decision, PlanDecision)
