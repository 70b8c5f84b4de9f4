"""Association matching vs the exhaustive oracle."""

import numpy as np
import pytest

from semnet.assoc import (AssociationInstance, brute_force_association,
                          build_instance, solve_association)
from semnet.errors import OracleTooLarge
from semnet.kuer import PairSolution


def instance(weight_rows, capacities):
    weights = {}
    for m, row in enumerate(weight_rows):
        for n, w in enumerate(row):
            if w is not None:
                weights[(m, n)] = float(w)
    return AssociationInstance(weights=weights, capacities=tuple(capacities),
                               n_devices=len(weight_rows),
                               n_stations=len(capacities))


def assert_feasible(inst, assignment):
    devices = [m for m, _ in assignment.pairs]
    assert len(devices) == len(set(devices))
    for n in range(inst.n_stations):
        assert assignment.station_load(n) <= inst.capacities[n]
    for pair in assignment.pairs:
        assert pair in inst.weights
    assert assignment.total_value == pytest.approx(
        sum(inst.weights[p] for p in assignment.pairs), abs=1e-9)


def test_two_by_two_example():
    inst = instance([[5, 3], [4, 1]], (1, 1))
    out = solve_association(inst)
    assert out.pairs == ((0, 1), (1, 0))
    assert out.total_value == pytest.approx(7.0)


def test_single_station_capacity_two():
    inst = instance([[5], [4]], (2,))
    out = solve_association(inst)
    assert out.pairs == ((0, 0), (1, 0))
    assert out.total_value == pytest.approx(9.0)


def test_device_without_edges_left_unassigned():
    inst = instance([[5, None], [None, None]], (1, 1))
    out = solve_association(inst)
    assert out.pairs == ((0, 0),)
    assert out.total_value == pytest.approx(5.0)


def test_zero_edge_instance():
    inst = instance([[None, None]], (1, 1))
    out = solve_association(inst)
    assert out.pairs == ()
    assert out.total_value == 0.0
    oracle = brute_force_association(inst)
    assert oracle.pairs == () and oracle.total_value == 0.0


def test_capacity_forces_second_choice():
    inst = instance([[9, 1], [8, 2]], (1, 2))
    out = solve_association(inst)
    assert_feasible(inst, out)
    assert out.total_value == pytest.approx(max(9 + 2, 8 + 1))
    assert out.pairs == ((0, 0), (1, 1))


def test_matches_oracle_on_random_instances():
    rng = np.random.default_rng(0)
    for trial in range(100):
        m, n = int(rng.integers(1, 6)), int(rng.integers(1, 4))
        caps = [int(c) for c in rng.integers(1, 3, size=n)]
        rows = [[float(rng.uniform(0, 10)) if rng.random() < 0.8 else None
                 for _ in range(n)] for _ in range(m)]
        inst = instance(rows, caps)
        fast = solve_association(inst)
        slow = brute_force_association(inst)
        assert fast.total_value == pytest.approx(slow.total_value, abs=1e-9)
        assert_feasible(inst, fast)
        assert_feasible(inst, slow)
        assert fast.pairs == slow.pairs


def test_tie_breaking_lexicographic():
    # both assignments reach total 6; the (0,0),(1,1) set is lexicographically
    # smaller than (0,1),(1,0)
    inst = instance([[3, 3], [3, 3]], (1, 1))
    out = solve_association(inst)
    oracle = brute_force_association(inst)
    assert out.pairs == ((0, 0), (1, 1))
    assert oracle.pairs == out.pairs


def test_monotone_in_edge_weight():
    rng = np.random.default_rng(1)
    for _ in range(30):
        rows = [[float(rng.uniform(0, 10)) for _ in range(3)] for _ in range(4)]
        inst = instance(rows, (1, 2, 1))
        base = solve_association(inst).total_value
        m, n = int(rng.integers(0, 4)), int(rng.integers(0, 3))
        rows2 = [list(r) for r in rows]
        rows2[m][n] += float(rng.uniform(0, 5))
        bumped = solve_association(instance(rows2, (1, 2, 1))).total_value
        assert bumped >= base - 1e-9


def test_positive_weights_fill_capacity_when_possible():
    rng = np.random.default_rng(2)
    for _ in range(20):
        m, n = 4, 3
        rows = [[float(rng.uniform(0.1, 10)) for _ in range(n)] for _ in range(m)]
        inst = instance(rows, (2, 2, 2))
        out = brute_force_association(inst)
        # capacity 6 >= 4 devices, every device has edges: all matched
        assert len(out.pairs) == m
        assert solve_association(inst).pairs == out.pairs


def test_oracle_caps():
    big = instance([[1.0] * 2] * 9, (2, 2))
    with pytest.raises(OracleTooLarge):
        brute_force_association(big)
    wide = instance([[1.0] * 7] * 2, (2,) * 7)
    with pytest.raises(OracleTooLarge):
        brute_force_association(wide)


def test_build_instance_passes_gammas_bit_for_bit():
    sol = lambda g, feasible=True: PairSolution(
        partition=None, xi=1.0, gamma=g, breakdown=None, feasible=feasible,
        solver_tag="t")
    sols = {(0, 0): sol(1.23456789e8), (0, 1): sol(7.5, feasible=False),
            (1, 0): None, (1, 1): sol(9.87e7)}
    inst = build_instance(sols, (2, 2), n_devices=2, n_stations=2)
    assert set(inst.weights) == {(0, 0), (1, 1)}
    assert inst.weights[(0, 0)] == 1.23456789e8
    assert inst.weights[(1, 1)] == 9.87e7


def test_instance_validation():
    with pytest.raises(ValueError):
        AssociationInstance(weights={(0, 0): -1.0}, capacities=(1,),
                            n_devices=1, n_stations=1)
    with pytest.raises(ValueError):
        AssociationInstance(weights={}, capacities=(0,), n_devices=1, n_stations=1)
    with pytest.raises(ValueError):
        AssociationInstance(weights={(5, 0): 1.0}, capacities=(1,),
                            n_devices=1, n_stations=1)
