"""Experiment orchestration: seeded learning and navigation sweeps with
CSV persistence, plus the oracle self-test.

Determinism contract: the output depends only on the spec (including
its seed); each (agent kind, parameter, run) derives an isolated rng
stream, so the number of worker processes never changes the rows.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from snapmem import envs as envs_module
from snapmem.agent import Agent, build_sensorium, ground_truth_graph
from snapmem.envs import err, ground_truth
from snapmem.propagation import lits_to_mask, mask_to_lits, propagate
from snapmem.snapshot import Snapshot, derive_poc_graph, truncate

CSV_HEADER = "setting,agent,param_index,param_value,run_id,t,metric,value"

#: default learning sweep: 10 thresholds linear in [1/8000, 1/4]
DEFAULT_TAU_SWEEP = tuple(np.linspace(1 / 8000, 1 / 4, 10).tolist())
#: default discount sweep: q = 1 - 2^-(k+2), k = 0..9
DEFAULT_Q_SWEEP = tuple((1 - 2.0 ** -(k + 2)) for k in range(10))

#: navigation targets per setting
NAV_TARGETS = {
    "path": 5,
    "grid": (3, 3),
    "rail": 10,
    "punctured-grid": (2, 2),
}


@dataclass(frozen=True)
class ExperimentSpec:
    setting: str = "path"
    agent: str = "empirical"  # empirical | discounted | preloaded
    sweep: tuple = DEFAULT_TAU_SWEEP
    runs: int = 50
    steps: int = 8000
    seed: Optional[int] = None
    sample_interval: int = 10
    err_reference: str = "true"  # true | thresholded
    tau: float = 1 / 8000  # fixed threshold where the sweep is over q
    q: float = 1 - 2 ** -6  # fixed decay for discounted navigation
    explore_period: Optional[int] = 5
    jobs: int = 1

    def __post_init__(self):
        if self.steps < 1 or self.runs < 1 or not self.sweep:
            raise ValueError("spec needs steps >= 1, runs >= 1, non-empty sweep")

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        data = json.loads(text)
        if "sweep" in data:
            data["sweep"] = tuple(data["sweep"])
        return cls(**data)


def make_environment(setting: str, rng: np.random.Generator):
    if setting == "path":
        return envs_module.make_path(20)
    if setting == "cycle":
        return envs_module.make_cycle(20)
    if setting == "grid":
        return envs_module.make_grid(10, 10)
    if setting == "random":
        return envs_module.make_random_fields(20, 20, rng)
    if setting == "punctured-grid":
        return envs_module.make_punctured_grid(5, (2, 3))
    if setting == "rail":
        return envs_module.make_circular_rail(20)
    raise ValueError(f"unknown setting {setting!r}")


def _sample_times(steps: int, interval: int) -> list[int]:
    times = list(range(interval, steps + 1, interval))
    if not times or times[-1] != steps:
        times.append(steps)
    return times


def _format_value(value) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _learning_run(spec: ExperimentSpec, param_index: int, param_value: float,
                  run_id: int) -> list[str]:
    rng = np.random.default_rng([spec.seed, 0, param_index, run_id])
    env = make_environment(spec.setting, rng)
    env.reset(env.positions[int(rng.integers(len(env.positions)))])
    layout = build_sensorium(env, actions=(), with_context=False)
    if spec.agent == "discounted":
        # sweep parameter is the decay q; threshold is fixed at spec.tau
        snapshot = Snapshot.uniform(layout.sensorium, spec.tau, q=param_value)
    else:
        snapshot = Snapshot(layout.sensorium, param_value, kind="empirical")
    walk = tuple(a for a in ("fwd", "back", "right", "left", "up", "down")
                 if a in env.actions)
    agent = Agent(env, layout, snapshot, rng, controller="random",
                  walk_actions=walk)
    if spec.err_reference == "thresholded":
        reference_tau = spec.tau if spec.agent == "discounted" else param_value
        truth = ground_truth(env, mode="thresholded", tau=reference_tau)
    else:
        truth = ground_truth(env, mode="true")
    sample_at = set(_sample_times(spec.steps, spec.sample_interval))
    rows = []
    for t in range(1, spec.steps + 1):
        agent.step()
        if t in sample_at:
            value = err(agent.learned_dir(loc_only=True), truth.dir)
            rows.append(
                f"{spec.setting},{spec.agent},{param_index},"
                f"{repr(float(param_value))},{run_id},{t},err,"
                f"{_format_value(value)}"
            )
    return rows


def _navigation_run(spec: ExperimentSpec, kind: str, kind_index: int,
                    param_index: int, param_value: float,
                    run_id: int) -> list[str]:
    rng = np.random.default_rng(
        [spec.seed, 1 + kind_index, param_index, run_id]
    )
    env = make_environment(spec.setting, rng)
    target = NAV_TARGETS.get(spec.setting)
    if target is None or env.distance is None:
        raise ValueError(f"setting {spec.setting!r} does not support navigation")
    env.reset(env.positions[int(rng.integers(len(env.positions)))])
    layout = build_sensorium(env, with_context=True, with_excitation=True)
    poc_override = None
    explore_period = spec.explore_period
    if kind == "empirical":
        snapshot = Snapshot(layout.sensorium, param_value, kind="empirical")
    elif kind == "discounted":
        snapshot = Snapshot.uniform(layout.sensorium, spec.tau, q=param_value)
    elif kind == "preloaded":
        snapshot = Snapshot(layout.sensorium, spec.tau, kind="empirical")
        poc_override = ground_truth_graph(layout, env, target)
        explore_period = None
    else:
        raise ValueError(f"unknown agent kind {kind!r}")
    agent = Agent(env, layout, snapshot, rng, controller="excitation",
                  target=target, explore_period=explore_period,
                  poc_override=poc_override)
    sample_at = set(_sample_times(spec.steps, spec.sample_interval))
    # the t=0 row records the start-of-run distance to target, giving
    # convergence curves a baseline before the agent has moved
    rows = [
        f"{spec.setting},{kind},{param_index},"
        f"{repr(float(param_value))},{run_id},0,deviation,"
        f"{_format_value(agent.deviation())}"
    ]
    for t in range(1, spec.steps + 1):
        agent.step()
        if t in sample_at:
            rows.append(
                f"{spec.setting},{kind},{param_index},"
                f"{repr(float(param_value))},{run_id},{t},deviation,"
                f"{_format_value(agent.deviation())}"
            )
    return rows


def _execute(tasks, worker, jobs: int) -> list[list[str]]:
    if jobs <= 1:
        return [worker(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, *task) for task in tasks]
        return [future.result() for future in futures]


def _write_csv(path: str, row_blocks: list[list[str]]) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as handle:
        handle.write(CSV_HEADER + "\n")
        for block in row_blocks:
            for row in block:
                handle.write(row + "\n")
    return path


def run_learning(spec: ExperimentSpec, out_dir: str = ".") -> str:
    """Random-walk learning sweep; returns the CSV path."""
    if spec.seed is None:
        raise ValueError("experiment spec requires an explicit seed")
    tasks = [
        (spec, param_index, param_value, run_id)
        for param_index, param_value in enumerate(spec.sweep)
        for run_id in range(spec.runs)
    ]
    blocks = _execute(tasks, _learning_run, spec.jobs)
    return _write_csv(os.path.join(out_dir, "learning.csv"), blocks)


def run_navigation(spec: ExperimentSpec, out_dir: str = ".") -> str:
    """Excitation-driven navigation; agent kinds comma-separated."""
    if spec.seed is None:
        raise ValueError("experiment spec requires an explicit seed")
    kinds = [kind.strip() for kind in spec.agent.split(",")]

    def kind_params(kind: str) -> tuple:
        if kind == "discounted":
            return (spec.q,)
        if kind == "preloaded":
            return (0.0,)
        return tuple(spec.sweep)

    tasks = [
        (spec, kind, kind_index, param_index, param_value, run_id)
        for kind_index, kind in enumerate(kinds)
        for param_index, param_value in enumerate(kind_params(kind))
        for run_id in range(spec.runs)
    ]
    blocks = _execute(tasks, _navigation_run, spec.jobs)
    return _write_csv(os.path.join(out_dir, "navigation.csv"), blocks)


# -- self-test --------------------------------------------------------------

def selftest(verbose: bool = True) -> int:
    """Run the oracle-equivalence suites; returns a process exit code."""
    from snapmem.cubing import Cubing
    from snapmem.oracles import (
        random_canonical_pocset,
        random_coherent_set,
        random_complete_selection,
        random_probabilistic_snapshot,
    )
    from snapmem.snapshot import derived_poc_set

    rng = np.random.default_rng(20240824)
    failures = []
    passes = 0

    # 1. propagation vs convex projection in the dual
    for _ in range(100):
        p = random_canonical_pocset(rng, int(rng.integers(2, 5)), 0.2)
        n = p.sensorium.n_literals
        graph_adj = p.reach.copy()
        np.fill_diagonal(graph_adj, False)
        from snapmem.snapshot import PocGraph
        g = PocGraph(n, graph_adj)
        c = Cubing(p)
        source = random_coherent_set(p, rng)
        target = random_coherent_set(p, rng)
        if source is None or target is None or not target:
            continue
        coh_t = p.coherent_projection(target) - {-1, -2}
        if not c.halfspace(coh_t):
            continue
        loaded = lits_to_mask(n, p.up_set(source) - {-1, -2})
        signal = lits_to_mask(n, target)
        result = propagate(g, loaded, signal)
        left = c.halfspace(mask_to_lits(result))
        right = c.project_convex(source, coh_t)
        if left == right:
            passes += 1
        else:
            failures.append("propagation vs project_convex")

    # 2. point projection formula vs BFS argmin
    for _ in range(100):
        p = random_canonical_pocset(rng, int(rng.integers(2, 5)), 0.2)
        c = Cubing(p)
        target = random_coherent_set(p, rng)
        if target is None or not c.halfspace(target or frozenset()):
            continue
        u = c.vertices[int(rng.integers(len(c.vertices)))]
        projected = c.project_point(u, target)
        best = min(
            (v for v in c.halfspace(target)),
            key=lambda v: c.bfs_distance(u, v),
        )
        if c.bfs_distance(u, projected) == c.bfs_distance(u, best):
            passes += 1
        else:
            failures.append("project_point vs BFS")

    # 3. acyclicity fuzz + truncation preserves the derived graph
    names = tuple(f"s{i}" for i in range(4))
    from snapmem.pocset import Sensorium
    sensorium = Sensorium(names)
    for _ in range(200):
        s = random_probabilistic_snapshot(sensorium, rng, n_mix=5, tau=0.2)
        g = derive_poc_graph(s)
        if not g.is_acyclic():
            failures.append("acyclicity")
            continue
        if np.array_equal(derive_poc_graph(truncate(s)).adj, g.adj):
            passes += 1
        else:
            failures.append("truncation changed Dir(S)")

    if verbose:
        print(f"selftest: {passes} checks passed, {len(failures)} failed")
        for failure in sorted(set(failures)):
            print(f"  FAIL {failure} x{failures.count(failure)}")
    return 1 if failures else 0
