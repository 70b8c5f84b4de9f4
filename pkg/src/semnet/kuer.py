"""Per-pair joint knowledge-updating and extraction-ratio solvers.

Three solvers share one candidate evaluator: `optimum` enumerates every
subset of the mismatched classes, `efficient` walks prefixes of a two-tier
ordering, and `no_sharing` fixes the upload set empty. Each candidate class
split collapses to a one-variable problem handled by the polyblock module.
Pair solves are pure functions of their context and can run concurrently.
"""

import itertools
import math
from dataclasses import dataclass, replace

from .errors import AccuracyUnreachable, Infeasible, InfeasibleBudget, PairInfeasible
from .monoopt import feasible_xi_interval, maximize_reduced, transform_reduced
from .ratetime import (PairContext, Partition, check_delay, semantic_rate,
                       shannon_rate, time_breakdown)

# Above this many mismatched classes the optimum solver refuses to enumerate.
ENUMERATION_CAP = 16


@dataclass(frozen=True)
class PairSolution:
    partition: Partition
    xi: float
    gamma: float          # suts/s
    breakdown: object     # TimeBreakdown
    feasible: bool
    solver_tag: str


def make_pair_context(scenario, m_idx, n_idx):
    """Precompute rate, matched classes and solver knobs for one pair."""
    device = scenario.devices[m_idx]
    station = scenario.stations[n_idx]
    rate = shannon_rate(scenario.channel.bandwidth, device.tx_power,
                        scenario.gain(m_idx, n_idx), scenario.channel.noise_power)
    try:
        xi_th = scenario.accuracy.min_extraction_ratio(device.eps_min)
    except AccuracyUnreachable:
        xi_th = None
    return PairContext(
        profiles=device.profiles,
        k_in=frozenset(device.required_ids & station.stored_classes),
        rate=rate,
        cpu_speed=station.cpu_speed,
        rho=scenario.params.rho,
        eps_min=device.eps_min,
        t_max=device.t_max,
        accuracy=scenario.accuracy,
        xi_th=xi_th,
        o1=scenario.params.o1,
        o2=scenario.params.o2,
        grid_step=scenario.params.grid_step,
    )


def evaluate_partition(ctx, partition, xi, solver_tag="evaluate"):
    """Recompute times, accuracy and rate for a decision; never raises.

    feasible means the delay holds and, when any class goes the semantic
    route, the accuracy envelope at xi reaches the device requirement.
    """
    breakdown = time_breakdown(ctx.profiles, partition, xi, ctx.rate,
                               ctx.cpu_speed, ctx.rho)
    if partition.k_cu:
        eps = ctx.accuracy.accuracy(xi)
        acc_ok = eps >= ctx.eps_min
    else:
        eps = 1.0  # unused: no semantic decoding happens
        acc_ok = True
    gamma = semantic_rate(ctx.profiles, partition, xi, eps, ctx.rate)
    feasible = check_delay(breakdown, ctx.t_max) and acc_ok
    return PairSolution(partition=partition, xi=xi, gamma=gamma,
                        breakdown=breakdown, feasible=feasible,
                        solver_tag=solver_tag)


def _solve_candidate(ctx, partition, best_gamma=None):
    """Best feasible solution for one class split, or None.

    When best_gamma is given, splits whose objective upper bound cannot beat
    it are skipped without solving (the skipped split could not change the
    caller's running maximum).
    """
    if not partition.k_cu:
        sol = evaluate_partition(ctx, partition, 1.0)
        return sol if sol.feasible else None
    if ctx.xi_th is None:
        return None  # accuracy requirement unreachable in semantic mode
    try:
        rp = transform_reduced(ctx, partition)
    except InfeasibleBudget:
        return None
    interval = feasible_xi_interval(rp)
    if interval is None:
        return None
    lo, hi = interval
    if best_gamma is not None:
        bound = rp.rate * (rp.info_semantic * ctx.accuracy.accuracy(hi)
                           + rp.info_bit) / (rp.a * lo + rp.b)
        if bound <= best_gamma:
            return None
    try:
        xi_star, _, _ = maximize_reduced(rp, o1=ctx.o1, o2=ctx.o2)
    except Infeasible:
        return None
    # Boundary xi can fail the exact delay recheck by a few ulps of rounding;
    # nudge toward the interval interior before giving up on the split.
    mid = 0.5 * (lo + hi)
    for step in (0.0, 1e-9, 1e-6):
        xi_try = xi_star + math.copysign(step, mid - xi_star) if step else xi_star
        xi_try = min(max(xi_try, lo), hi)
        sol = evaluate_partition(ctx, partition, xi_try)
        if sol.feasible:
            return sol
    return None


def _best_of(ctx, partitions, solver_tag, stats=None):
    best = None
    count = 0
    for partition in partitions:
        count += 1
        sol = _solve_candidate(ctx, partition,
                               best.gamma if best is not None else None)
        if sol is not None and (best is None or sol.gamma > best.gamma):
            best = sol
    if stats is not None:
        stats["subsets_enumerated"] = count
    if best is None:
        raise PairInfeasible(f"no feasible decision for this pair ({solver_tag})")
    return replace(best, solver_tag=solver_tag)


def solve_pair_optimum(ctx, stats=None):
    """Exhaustive optimum: every subset of the mismatched classes."""
    required = ctx.required_ids
    mismatched = sorted(required - ctx.k_in)
    if len(mismatched) > ENUMERATION_CAP:
        raise ValueError(
            f"{len(mismatched)} mismatched classes exceed the enumeration "
            f"cap of {ENUMERATION_CAP}")
    # Descending subset size: full sharing is usually strong, and an early
    # incumbent lets the bound check skip most of the remaining subsets.
    partitions = (Partition.make(required, ctx.k_in, combo)
                  for r in range(len(mismatched), -1, -1)
                  for combo in itertools.combinations(mismatched, r))
    return _best_of(ctx, partitions, "optimum", stats=stats)


def two_tier_sort(ctx):
    """Mismatched class ids ordered for the prefix heuristic.

    Primary key: raw-task bits over knowledge bits, descending (share classes
    whose semantic benefit is cheap to unlock). Exact ties are broken by the
    ratio of estimated semantic-route to bit-route completion time at the
    minimum extraction ratio, ascending; remaining ties by class id. When the
    accuracy requirement is unreachable the time estimate falls back to
    xi = 1 (the key only orders candidates, it never gates feasibility).
    """
    xi_est = ctx.xi_th if ctx.xi_th is not None else 1.0
    xi_est = max(xi_est, ctx.grid_step)  # keep the compute-ratio estimate finite
    omega = xi_est ** (-ctx.rho)

    def keys(cid):
        p = ctx.profiles[cid]
        phi_b = p.d_task / p.d_knowledge
        t_semantic = (p.d_knowledge + xi_est * p.d_task) / ctx.rate \
            + omega * p.cycles / ctx.cpu_speed
        t_bit = p.d_task / ctx.rate + p.cycles / ctx.cpu_speed
        return (-phi_b, t_semantic / t_bit, cid)

    return sorted(ctx.required_ids - ctx.k_in, key=keys)


def solve_pair_efficient(ctx, stats=None):
    """Two-tier heuristic: best prefix of the sorted mismatched classes.

    The candidate family is the prefix chain of the two-tier ordering; the
    returned maximum does not depend on evaluation order, so prefixes are
    tried longest first (full sharing is usually strong) to let the bound
    check skip dominated prefixes cheaply.
    """
    order = two_tier_sort(ctx)
    required = ctx.required_ids
    partitions = (Partition.make(required, ctx.k_in, order[:k])
                  for k in range(len(order), -1, -1))
    return _best_of(ctx, partitions, "efficient", stats=stats)


def solve_pair_no_sharing(ctx, stats=None):
    """Baseline: semantic transmission over initially matched classes only."""
    partition = Partition.make(ctx.required_ids, ctx.k_in)
    return _best_of(ctx, [partition], "no_sharing", stats=stats)


SOLVERS = {
    "optimum": solve_pair_optimum,
    "efficient": solve_pair_efficient,
    "no_sharing": solve_pair_no_sharing,
}
