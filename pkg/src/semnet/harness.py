"""Experiment driver: full-network solves, parameter sweeps, CSV emission.

The paired-sample design regenerates the exact same scenario for a given
(master seed, trial) at every swept value, applies the override uniformly,
and runs every requested solver on that identical instance. Trends can then
be asserted per trial instead of only in the mean. Trials and sweep values
run in parallel worker processes; rows are sorted before writing so the CSV
bytes never depend on completion order.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import assoc, kuer
from .errors import InvalidSweep, PairInfeasible, WriteFailed
from .scenario import generate_scenario, scenario_1_config, scenario_2_config

SWEEP_PARAMS = ("cpu_speed", "bandwidth", "eps_min", "t_max",
                "n_cloudlets", "d_knowledge")

DEFAULT_TRIALS = 100


@dataclass(frozen=True)
class SweepConfig:
    scenario: object          # ScenarioConfig
    param: str                # one of SWEEP_PARAMS
    values: tuple
    solvers: tuple            # tags understood by kuer.SOLVERS
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise InvalidSweep(
                f"unknown sweep parameter {self.param!r}; valid: {SWEEP_PARAMS}")
        if not self.values:
            raise InvalidSweep("sweep value list must be nonempty")
        if self.trials < 1:
            raise InvalidSweep("trials must be >= 1")
        for tag in self.solvers:
            if tag not in kuer.SOLVERS:
                raise InvalidSweep(f"unknown solver {tag!r}")


@dataclass(frozen=True)
class SweepRow:
    param: str
    value: float
    solver: str
    trial: int
    seed: int
    total_rate: float
    n_associated: int
    runtime_ms: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    def series(self, solver):
        """value -> list of total_rate over trials (trial-ordered)."""
        out = {}
        for r in self.rows:
            if r.solver == solver:
                out.setdefault(r.value, []).append((r.trial, r.total_rate))
        return {v: [tr for _, tr in sorted(pairs)] for v, pairs in out.items()}


def trial_seed(master_seed, trial):
    """Stable per-trial seed; the swept value never enters the derivation."""
    ss = np.random.SeedSequence([int(master_seed), int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def apply_override(scenario, param, value):
    """Replace one parameter uniformly across devices, stations or classes."""
    if param == "cpu_speed":
        stations = tuple(replace(s, cpu_speed=float(value)) for s in scenario.stations)
        return replace(scenario, stations=stations)
    if param == "n_cloudlets":
        stations = tuple(replace(s, n_cloudlets=int(value)) for s in scenario.stations)
        return replace(scenario, stations=stations)
    if param == "bandwidth":
        return replace(scenario, channel=replace(scenario.channel,
                                                 bandwidth=float(value)))
    if param == "eps_min":
        devices = tuple(replace(d, eps_min=float(value)) for d in scenario.devices)
        return replace(scenario, devices=devices)
    if param == "t_max":
        devices = tuple(replace(d, t_max=float(value)) for d in scenario.devices)
        return replace(scenario, devices=devices)
    if param == "d_knowledge":
        devices = tuple(
            replace(d, required_classes=tuple(
                replace(p, d_knowledge=float(value)) for p in d.required_classes))
            for d in scenario.devices)
        return replace(scenario, devices=devices)
    raise InvalidSweep(f"unknown sweep parameter {param!r}; valid: {SWEEP_PARAMS}")


def solve_all_pairs(scenario, solver_tag):
    """Run the per-pair solver on every (device, station) pair."""
    solver = kuer.SOLVERS[solver_tag]
    solutions = {}
    for m in range(len(scenario.devices)):
        for n in range(len(scenario.stations)):
            ctx = kuer.make_pair_context(scenario, m, n)
            try:
                solutions[(m, n)] = solver(ctx)
            except PairInfeasible:
                solutions[(m, n)] = None
    return solutions


def run_point(scenario, solver_tag):
    """Solve one full network instance: pair decisions, then association."""
    solutions = solve_all_pairs(scenario, solver_tag)
    instance = assoc.build_instance(
        solutions, [s.n_cloudlets for s in scenario.stations],
        n_devices=len(scenario.devices), n_stations=len(scenario.stations))
    assignment = assoc.solve_association(instance)
    return assignment.total_value, assignment


def _run_task(args):
    scenario_cfg, param, value_idx, value, solvers, trial, seed = args
    scenario = apply_override(generate_scenario(scenario_cfg, seed), param, value)
    rows = []
    for solver in solvers:
        t0 = time.perf_counter()
        total, assignment = run_point(scenario, solver)
        ms = (time.perf_counter() - t0) * 1e3
        rows.append(SweepRow(param=param, value=float(value), solver=solver,
                             trial=trial, seed=seed, total_rate=total,
                             n_associated=len(assignment.pairs), runtime_ms=ms))
    return value_idx, rows


def resolve_workers(n_workers=None):
    """Worker count: explicit argument, else SEMNET_THREADS, else all cores."""
    if n_workers is None:
        env = os.environ.get("SEMNET_THREADS", "0")
        try:
            n_workers = int(env)
        except ValueError:
            raise InvalidSweep(f"SEMNET_THREADS must be an integer, got {env!r}")
    if n_workers <= 0:
        n_workers = os.cpu_count() or 1
    return n_workers


def run_sweep(cfg, n_workers=None):
    """Run every (value, trial) point of the sweep with every solver.

    Deterministic given cfg.master_seed regardless of worker count; the
    runtime_ms column is the only field that varies between runs.
    """
    tasks = [(cfg.scenario, cfg.param, vi, value, cfg.solvers, trial,
              trial_seed(cfg.master_seed, trial))
             for vi, value in enumerate(cfg.values)
             for trial in range(cfg.trials)]
    n_workers = resolve_workers(n_workers)
    results = []
    if n_workers == 1 or len(tasks) == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))
    solver_order = {tag: i for i, tag in enumerate(cfg.solvers)}
    rows = [row for _, task_rows in results for row in task_rows]
    rows.sort(key=lambda r: (cfg.values.index(r.value), solver_order[r.solver],
                             r.trial))
    return SweepResult(rows=tuple(rows))


def _fmt(x):
    return format(float(x), ".17g")


def emit_csv(result, path):
    """Write rows under the fixed header; floats carry 17 significant digits."""
    lines = ["param,value,solver,trial,seed,total_rate,n_associated,runtime_ms"]
    for r in result.rows:
        lines.append(",".join([
            r.param, _fmt(r.value), r.solver, str(r.trial), str(r.seed),
            _fmt(r.total_rate), str(r.n_associated), f"{r.runtime_ms:.3f}"]))
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise WriteFailed(f"cannot write {path}: {exc}") from exc


def preset_sweep(name, trials=None, master_seed=0):
    """Named sweep configurations mirroring the reference experiments.

    fig4-fig6 sweep the small network with all three solvers; fig7-fig9
    sweep the larger network, where exhaustive enumeration is out of reach,
    with the heuristic and the no-sharing baseline.
    """
    small = ("optimum", "efficient", "no_sharing")
    large = ("efficient", "no_sharing")
    presets = {
        "fig4": (scenario_1_config(), "cpu_speed",
                 (0.5e9, 1e9, 2e9, 4e9, 8e9), small),
        "fig5": (scenario_1_config(), "bandwidth",
                 (5e6, 10e6, 20e6, 40e6), small),
        "fig6": (scenario_1_config(), "eps_min",
                 (0.6, 0.7, 0.8, 0.9, 0.95), small),
        "fig7": (scenario_2_config(), "t_max",
                 (2.0, 3.0, 4.0, 6.0, 8.0, 10.0), large),
        "fig8": (scenario_2_config(), "n_cloudlets",
                 (1, 2, 4, 8, 10), large),
        "fig9": (scenario_2_config(), "d_knowledge",
                 (1e7, 2e7, 4e7, 8e7, 1.6e8), large),
    }
    if name not in presets:
        raise InvalidSweep(
            f"unknown preset {name!r}; valid presets: {', '.join(sorted(presets))}")
    scenario_cfg, param, values, solvers = presets[name]
    return SweepConfig(scenario=scenario_cfg, param=param, values=values,
                       solvers=solvers,
                       trials=DEFAULT_TRIALS if trials is None else trials,
                       master_seed=master_seed)


PRESET_NAMES = ("fig4", "fig5", "fig6", "fig7", "fig8", "fig9")
