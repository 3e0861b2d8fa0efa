"""Excitation-driven navigation on a path.

Two agents try to reach and hold position 5 on a 20-edge path, driven
only by the better/worse excitation pair (distance to target strictly
decreased / increased on the last move).

The preloaded agent starts with the exact implication record and walks
straight to the target, then holds it by choosing "wait" (the only
action that guarantees not-worse).  The empirical agent starts from a
blank snapshot and has to learn which contextualized actions force
"better" before its deviation collapses.

Run: python3 demos/navigate_to_target.py
"""

import numpy as np

from snapmem.agent import Agent, build_sensorium, ground_truth_graph
from snapmem.envs import make_path
from snapmem.snapshot import Snapshot

TARGET = 5
START = 15


def make_agent(preloaded: bool) -> Agent:
    env = make_path(20)
    env.reset(START)
    layout = build_sensorium(env, with_context=True, with_excitation=True)
    snapshot = Snapshot(layout.sensorium, tau=1 / 8000)
    override = ground_truth_graph(layout, env, TARGET) if preloaded else None
    return Agent(env, layout, snapshot, np.random.default_rng(4),
                 controller="excitation", target=TARGET,
                 explore_period=None if preloaded else 5,
                 poc_override=override)


print(f"start {START}, target {TARGET}\n")

print("preloaded agent (exact knowledge):")
agent = make_agent(preloaded=True)
trace = []
for _ in range(15):
    record = agent.step()
    trace.append(f"{record.decision}->{agent.env.position}")
print("  " + "  ".join(trace))
print(f"  deviation after 15 steps: {agent.deviation()}\n")

print("empirical agent (learning from scratch):")
agent = make_agent(preloaded=False)
for t in range(1, 2001):
    agent.step()
    if t % 250 == 0:
        print(f"  t={t:<5} position {agent.env.position:<3} "
              f"deviation {agent.deviation()}")
