"""Snapshot memory and median-graph planning for discrete binary agents.

The library implements:

* weak poc sets (partial orders of sensor literals with a complementation
  involution) and their coherent projections -- :mod:`snapmem.pocset`;
* the exact dual cubing / median graph oracle -- :mod:`snapmem.cubing`;
* snapshot structures learning implications from observation streams,
  with empirical and discounted dynamics -- :mod:`snapmem.snapshot`;
* signal propagation and the greedy reactive planner -- :mod:`snapmem.propagation`;
* the agent runtime -- :mod:`snapmem.agent`;
* simulated environments with exact ground truth -- :mod:`snapmem.envs`;
* the experiment harness and CLI -- :mod:`snapmem.harness`, :mod:`snapmem.cli`.
"""

from snapmem.pocset import ZERO, ONE, star, Sensorium, WeakPocSet

__all__ = ["ZERO", "ONE", "star", "Sensorium", "WeakPocSet"]
