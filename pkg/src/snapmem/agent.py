"""The agent runtime: sensorium assembly, the observe-update-decide
cycle, and controllers (random walker, excitation-driven navigator).

The agent's sensorium is built from an environment: one state sensor per
place field, one transition sensor per atomic action, contextualized
action sensors α∧s ("α was invoked while s was held in the state"), and
optionally the excitation pair better/worse (distance to target strictly
decreased / increased on the last transition).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from snapmem.envs import Environment
from snapmem.pocset import Sensorium
from snapmem.propagation import (
    OpCounter,
    PlanDecision,
    grp_decide,
    lits_to_mask,
    mask_to_lits,
    propagate,
)
from snapmem.snapshot import PocGraph, Snapshot, _pair_mask


@dataclass(frozen=True)
class SensorLayout:
    """Index map of an agent sensorium over an environment."""

    sensorium: Sensorium
    loc_literals: dict  # place-field sensor name -> positive literal
    action_literals: dict  # action name -> positive literal
    context_of: dict  # (action literal, loc literal either polarity) -> literal
    better: Optional[int] = None  # positive literal of the better sensor
    worse: Optional[int] = None

    @property
    def n_literals(self) -> int:
        return self.sensorium.n_literals

    def pure_action(self, name: str) -> frozenset[int]:
        """Generalized action invoking exactly one atomic action."""
        chosen = self.action_literals[name]
        return frozenset(
            literal if literal == chosen else literal ^ 1
            for literal in self.action_literals.values()
        )

    def no_action(self) -> frozenset[int]:
        return frozenset(
            literal ^ 1 for literal in self.action_literals.values()
        )

    def loc_literal_count(self) -> int:
        return 2 * len(self.loc_literals)


def build_sensorium(env: Environment, actions: Optional[Sequence[str]] = None,
                    with_context: bool = True,
                    with_excitation: bool = False) -> SensorLayout:
    """Assemble the agent sensorium for an environment.

    Sensor order: place fields, actions, contextualized actions
    (α∧loc and α∧loc* per action-field pair), then better/worse.
    """
    if actions is None:
        actions = env.actions
    names: list[str] = []
    degrees: list[int] = []
    loc_literals = {}
    for name in env.fields:
        loc_literals[name] = 2 * len(names)
        names.append(name)
        degrees.append(0)
    action_literals = {}
    for action in actions:
        action_literals[action] = 2 * len(names)
        names.append(action)
        degrees.append(1)
    context_of = {}
    if with_context:
        for action in actions:
            for loc_name in env.fields:
                for polarity, suffix in ((0, ""), (1, "*")):
                    context_literal = 2 * len(names)
                    names.append(f"{action}&{loc_name}{suffix}")
                    degrees.append(1)
                    key = (action_literals[action],
                           loc_literals[loc_name] + polarity)
                    context_of[key] = context_literal
    better = worse = None
    if with_excitation:
        better = 2 * len(names)
        names.append("better")
        degrees.append(1)
        worse = 2 * len(names)
        names.append("worse")
        degrees.append(1)
    sensorium = Sensorium(tuple(names), tuple(degrees))
    return SensorLayout(sensorium, loc_literals, action_literals,
                        context_of, better, worse)


def observe(env: Environment, layout: SensorLayout,
            prev_state: Optional[np.ndarray], action_name: Optional[str],
            prev_pos=None, target=None) -> np.ndarray:
    """Complete *-selection read off the environment after a transition.

    At t=0 (``action_name is None``) every transition literal takes its
    starred side.  Context literals read the snapshot state at t-1, not
    the raw previous observation.
    """
    mask = np.zeros(layout.n_literals, dtype=bool)
    for name, literal in layout.loc_literals.items():
        mask[literal if env.reads(name) else literal ^ 1] = True
    for name, literal in layout.action_literals.items():
        on = action_name == name
        mask[literal if on else literal ^ 1] = True
    for (action_literal, loc_literal), context_literal in layout.context_of.items():
        on = (
            action_name is not None
            and mask[action_literal]
            and prev_state is not None
            and bool(prev_state[loc_literal])
        )
        mask[context_literal if on else context_literal ^ 1] = True
    if layout.better is not None:
        moved = action_name is not None and target is not None
        if moved:
            before = env.distance(prev_pos, target)
            after = env.distance(env.position, target)
        else:
            before = after = 0
        mask[layout.better if after < before else layout.better ^ 1] = True
        mask[layout.worse if after > before else layout.worse ^ 1] = True
    return mask


def ground_truth_graph(layout: SensorLayout, env: Environment,
                       target=None) -> PocGraph:
    """Exact implication record over the full sensorium, from footprint
    containment on the space of (position, action) transition witnesses."""
    witnesses = [
        (pos, action) for pos in env.positions for action in env.actions
        if action in layout.action_literals
    ]
    n = layout.n_literals
    member = np.zeros((n, len(witnesses)), dtype=bool)

    for w_index, (pos, action) in enumerate(witnesses):
        nxt = env.transition(pos, action)
        for name, literal in layout.loc_literals.items():
            member[literal, w_index] = env.reads(name, nxt)
        for name, literal in layout.action_literals.items():
            member[literal, w_index] = action == name
        if layout.better is not None:
            before = env.distance(pos, target)
            after = env.distance(nxt, target)
            member[layout.better, w_index] = after < before
            member[layout.worse, w_index] = after > before
    # context sensors: α fired and the source position supported loc
    for (action_literal, loc_literal), ctx in layout.context_of.items():
        loc_name = next(
            name for name, lit in layout.loc_literals.items()
            if lit == (loc_literal & ~1)
        )
        for w_index, (pos, action) in enumerate(witnesses):
            source_on = env.reads(loc_name, pos)
            if loc_literal % 2:
                source_on = not source_on
            member[ctx, w_index] = member[action_literal, w_index] and source_on
    for literal in range(0, n, 2):
        member[literal + 1] = ~member[literal]
    adj = np.zeros((n, n), dtype=bool)
    pair = _pair_mask(n)
    for a in range(n):
        contained = ~member[a][None, :] | member  # rows b with rho(a)<=rho(b)
        adj[a] = contained.all(axis=1) & pair[a]
    return PocGraph(n, adj)


@dataclass
class CycleRecord:
    t: int
    observation: frozenset
    state: frozenset
    decision: Optional[str]
    clock: int


class Agent:
    """A discrete binary agent coupled to an environment.

    Each :meth:`step` runs one full cycle: decide (from the current
    state), transition the environment, observe, and update the snapshot
    (weights, derived graph with equivalences, state by propagation).
    With ``poc_override`` the implication record is pinned (no learning).
    """

    def __init__(self, env: Environment, layout: SensorLayout,
                 snapshot: Snapshot, rng: np.random.Generator,
                 controller: str = "random",
                 walk_actions: Optional[Sequence[str]] = None,
                 target=None, explore_period: Optional[int] = 5,
                 poc_override: Optional[PocGraph] = None):
        if controller not in ("random", "excitation"):
            raise ValueError(f"unknown controller {controller!r}")
        if controller == "excitation" and layout.better is None:
            raise ValueError("excitation controller needs better/worse sensors")
        self.env = env
        self.layout = layout
        self.snapshot = snapshot
        self.rng = rng
        self.controller = controller
        self.target = target if target is not None else env.target
        self.explore_period = explore_period
        self.poc_override = poc_override
        self.walk_actions = tuple(walk_actions or layout.action_literals)
        if controller == "excitation":
            self.pure_actions = [
                layout.pure_action(a) for a in self.walk_actions
            ]
            self._action_name = {
                layout.pure_action(a): a for a in self.walk_actions
            }
        self.t = 0
        self._fallback_streak = 0
        self.plan_counter = OpCounter()
        # initial observation: transition literals on their starred side
        first = observe(env, layout, None, None, target=self.target)
        self._absorb(first)

    # -- internals ---------------------------------------------------------

    def _absorb(self, observation_mask: np.ndarray) -> None:
        if self.poc_override is not None:
            self.graph = self.poc_override
            empty = np.zeros(self.layout.n_literals, dtype=bool)
            self.state = propagate(self.graph, empty, observation_mask,
                                   self.snapshot.op_counter)
            self.snapshot.clock += 1
        else:
            self.snapshot.ingest(observation_mask)
            self.graph = self.snapshot.graph
            self.state = self.snapshot.state
        self._last_observation = observation_mask

    def decide(self) -> tuple[str, Optional[PlanDecision]]:
        if self.controller == "random":
            name = self.walk_actions[int(self.rng.integers(len(self.walk_actions)))]
            return name, None
        decision = self.excitation_policy()
        return self._action_name[decision.chosen], decision

    def excitation_policy(self) -> PlanDecision:
        """Two-priority excitation-driven policy.

        Priority 1 targets {better}; if no action guarantees progress,
        priority 2 targets {worse*} (hold position).  Every k-th
        consecutive priority-1 fallback cycle a uniformly random pure
        action is taken instead, to keep exploring.
        """
        layout = self.layout
        first = grp_decide(
            self.graph, self.state, [layout.better], self.pure_actions,
            self.rng, layout.context_of, mode="guarantee",
            counter=self.plan_counter,
        )
        if not first.fallback:
            self._fallback_streak = 0
            return first
        self._fallback_streak += 1
        if (
            self.explore_period
            and self._fallback_streak % self.explore_period == 0
        ):
            pick = int(self.rng.integers(len(self.pure_actions)))
            return PlanDecision(self.pure_actions[pick], 0, True)
        return grp_decide(
            self.graph, self.state, [layout.worse ^ 1], self.pure_actions,
            self.rng, layout.context_of, mode="guarantee",
            counter=self.plan_counter,
        )

    # -- the cycle ---------------------------------------------------------

    def step(self) -> CycleRecord:
        action_name, _decision = self.decide()
        prev_state = self.state
        prev_pos = self.env.position
        self.env.step(action_name)
        observation = observe(
            self.env, self.layout, prev_state, action_name, prev_pos,
            self.target,
        )
        self._absorb(observation)
        self.t += 1
        return CycleRecord(
            self.t,
            mask_to_lits(observation),
            mask_to_lits(self.state),
            action_name,
            self.snapshot.clock,
        )

    # -- metrics -----------------------------------------------------------

    def learned_dir(self, loc_only: bool = True) -> np.ndarray:
        """The implication record Dir(S) (no equivalence edges), optionally
        restricted to the place-field literals."""
        if self.poc_override is not None:
            adj = self.poc_override.adj
        else:
            adj = self.snapshot.derive_graph(extend_equivalences=False).adj
        if loc_only:
            k = self.layout.loc_literal_count()
            return adj[:k, :k]
        return adj

    def deviation(self) -> float:
        return float(self.env.distance(self.env.position, self.target))

    def cycle_ops(self) -> int:
        """Instrumented operation count accumulated so far."""
        return self.snapshot.op_counter.ops + self.plan_counter.ops


def agent_spec_json(layout: SensorLayout, controller: str, kind: str,
                    tau, q: Optional[float], seed: int) -> str:
    """Serializable description of an agent configuration."""
    return json.dumps(
        {
            "sensors": list(layout.sensorium.names),
            "degrees": list(layout.sensorium.degrees),
            "controller": controller,
            "snapshot_kind": kind,
            "tau": tau if np.isscalar(tau) else np.asarray(tau).tolist(),
            "q": q,
            "seed": seed,
        }
    )


def cycle_trace_jsonl(records: Sequence[CycleRecord],
                      layout: SensorLayout) -> str:
    """Opt-in JSONL dump of cycle records."""
    name = layout.sensorium.literal_name
    lines = []
    for record in records:
        lines.append(json.dumps({
            "t": record.t,
            "observation": sorted(name(a) for a in record.observation),
            "state": sorted(name(a) for a in record.state),
            "decision": record.decision,
            "clock": record.clock,
        }))
    return "\n".join(lines) + "\n"
