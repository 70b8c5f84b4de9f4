"""Station association as maximum-weight bipartite matching with capacities.

Each station is expanded into one column per cloudlet and the matrix is
padded with zero-weight dummy partners, so a standard square assignment core
(Kuhn-Munkres as implemented by scipy's linear_sum_assignment) yields the
optimal association; devices matched to dummies stay unassociated. Ties are
broken toward the lexicographically smallest matched pair set by greedily
fixing pairs in (device, station) order whenever fixing preserves the
optimal total. A subset-enumeration oracle provides the independent check.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import OracleTooLarge

_ORACLE_MAX_DEVICES = 8
_ORACLE_MAX_CAPACITY = 12


@dataclass(frozen=True)
class AssociationInstance:
    weights: dict      # (device_idx, station_idx) -> gamma, feasible pairs only
    capacities: tuple  # per-station cloudlet counts
    n_devices: int
    n_stations: int

    def __post_init__(self):
        if len(self.capacities) != self.n_stations:
            raise ValueError("capacities must list one entry per station")
        if any(c < 1 for c in self.capacities):
            raise ValueError("capacities must be >= 1")
        for (m, n), w in self.weights.items():
            if not (0 <= m < self.n_devices and 0 <= n < self.n_stations):
                raise ValueError(f"edge ({m},{n}) outside the instance")
            if w < 0:
                raise ValueError(f"edge ({m},{n}) has negative weight {w}")


@dataclass(frozen=True)
class Assignment:
    pairs: tuple        # sorted (device_idx, station_idx)
    total_value: float

    def station_load(self, n_idx):
        return sum(1 for _, n in self.pairs if n == n_idx)


def build_instance(pair_solutions, capacities, n_devices, n_stations):
    """Edge weights from per-pair solutions; infeasible pairs get no edge."""
    weights = {}
    for (m, n), sol in pair_solutions.items():
        if sol is not None and sol.feasible:
            weights[(m, n)] = sol.gamma
    return AssociationInstance(weights=weights, capacities=tuple(capacities),
                               n_devices=n_devices, n_stations=n_stations)


def _expanded_columns(capacities):
    cols = []
    for n, cap in enumerate(capacities):
        cols.extend([n] * cap)
    return cols


def _max_total(weights, capacities, devices):
    """Optimal total over the given devices with the remaining capacities."""
    if not devices:
        return 0.0
    cols = _expanded_columns(capacities)
    n_real = len(cols)
    big = 1.0 + sum(weights.values())
    mat = np.zeros((len(devices), n_real + len(devices)))
    for i, m in enumerate(devices):
        for j, n in enumerate(cols):
            mat[i, j] = weights.get((m, n), -big)
    row_ind, col_ind = linear_sum_assignment(mat, maximize=True)
    return float(mat[row_ind, col_ind].sum())


def solve_association(instance):
    """Maximum-total association honoring per-station capacities.

    Every device is matched at most once; station n hosts at most
    capacities[n] devices. The empty assignment is valid output.
    """
    weights = instance.weights
    caps = list(instance.capacities)
    remaining = list(range(instance.n_devices))
    target = _max_total(weights, caps, remaining)
    tol = 1e-9 * max(1.0, abs(target))

    pairs = []
    fixed = 0.0
    for m in range(instance.n_devices):
        rest = [d for d in remaining if d != m]
        chosen = None
        for n in range(instance.n_stations):
            if caps[n] <= 0 or (m, n) not in weights:
                continue
            caps[n] -= 1
            total = fixed + weights[(m, n)] + _max_total(weights, caps, rest)
            if total >= target - tol:
                chosen = n
                break
            caps[n] += 1
        if chosen is not None:
            pairs.append((m, chosen))
            fixed += weights[(m, chosen)]
        remaining = rest

    return Assignment(pairs=tuple(sorted(pairs)),
                      total_value=math.fsum(weights[p] for p in pairs))


def _lex_key(pairs, n_devices, n_stations):
    # Padded comparison: among equal totals prefer assigning low-index pairs,
    # and prefer assignment over leaving a device out.
    key = sorted(pairs)
    key += [(n_devices, n_stations)] * (n_devices - len(key))
    return tuple(key)


def brute_force_association(instance):
    """Exhaustive oracle over all feasible assignment matrices.

    Limited to small instances; ties on total value are broken by the same
    lexicographic preference as solve_association.
    """
    if instance.n_devices > _ORACLE_MAX_DEVICES:
        raise OracleTooLarge(f"{instance.n_devices} devices > {_ORACLE_MAX_DEVICES}")
    if sum(instance.capacities) > _ORACLE_MAX_CAPACITY:
        raise OracleTooLarge(
            f"total capacity {sum(instance.capacities)} > {_ORACLE_MAX_CAPACITY}")

    weights = instance.weights
    best_max = [max((w for (m2, _), w in weights.items() if m2 == m), default=0.0)
                for m in range(instance.n_devices)]
    suffix_bound = [0.0] * (instance.n_devices + 1)
    for m in range(instance.n_devices - 1, -1, -1):
        suffix_bound[m] = suffix_bound[m + 1] + best_max[m]

    best = {"total": -1.0, "pairs": ()}
    caps = list(instance.capacities)
    chosen = []

    def consider():
        total = math.fsum(weights[p] for p in chosen)
        if total > best["total"] + 1e-9:
            best["total"], best["pairs"] = total, tuple(sorted(chosen))
        elif abs(total - best["total"]) <= 1e-9:
            key = _lex_key(chosen, instance.n_devices, instance.n_stations)
            if key < _lex_key(best["pairs"], instance.n_devices, instance.n_stations):
                best["total"], best["pairs"] = total, tuple(sorted(chosen))

    def dfs(m, running):
        if running + suffix_bound[m] < best["total"] - 1e-9:
            return
        if m == instance.n_devices:
            consider()
            return
        for n in range(instance.n_stations):
            if caps[n] > 0 and (m, n) in weights:
                caps[n] -= 1
                chosen.append((m, n))
                dfs(m + 1, running + weights[(m, n)])
                chosen.pop()
                caps[n] += 1
        dfs(m + 1, running)  # device m left unassigned

    dfs(0, 0.0)
    return Assignment(pairs=best["pairs"],
                      total_value=math.fsum(weights[p] for p in best["pairs"]))
