"""A random walker learns the sensor order of a path.

The environment is a path with 20 edges and 20 threshold sensors
(a_k reads "position < k").  A random walker with an empirical snapshot
counts co-occurrences; implications a_j <= a_k surface as soon as the
falsifying region has stayed negligible relative to the learning
threshold.  The error against exact footprint containment drops to zero
in a few thousand steps.

Run: python3 demos/learn_a_path.py
"""

import numpy as np

from snapmem.agent import Agent, build_sensorium
from snapmem.envs import err, ground_truth, make_path
from snapmem.snapshot import Snapshot

env = make_path(20)
layout = build_sensorium(env, actions=(), with_context=False)
snapshot = Snapshot(layout.sensorium, tau=1 / 8000)
agent = Agent(env, layout, snapshot, np.random.default_rng(0),
              controller="random", walk_actions=("fwd", "back"))
truth = ground_truth(env)

print("t      Err(t)   relations on record")
for t in range(1, 4001):
    agent.step()
    if t % 500 == 0:
        learned = agent.learned_dir(loc_only=True)
        print(f"{t:<6} {err(learned, truth.dir):<8} {learned.sum() // 1}")

learned = agent.learned_dir(loc_only=True)
print(f"\nfinal error: {err(learned, truth.dir)} "
      f"(of {truth.dir.sum()} true relations)")

name = layout.sensorium.literal_name
sample = [(name(a), name(b)) for a, b in zip(*np.nonzero(learned))][:6]
print("sample of learned implications:",
      ", ".join(f"{a} <= {b}" for a, b in sample))
