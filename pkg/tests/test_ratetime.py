"""Rate, timing components, delay check, and the effective semantic rate."""

import math

import pytest

from semnet.errors import SingularExtraction
from semnet.ratetime import (Partition, check_delay, compute_ratio,
                             semantic_rate, shannon_rate, time_breakdown)
from semnet.scenario import KnowledgeClassProfile


def profile(cid, d_task, d_knowledge=1e6, info=1e6, cycles=1e6):
    return KnowledgeClassProfile(class_id=cid, d_task=d_task,
                                 d_knowledge=d_knowledge, info=info, cycles=cycles)


# one device's class inventory for the worked timing example:
# upload set {0} carries 8e7 knowledge bits; semantic set {0,1} carries
# 1e8 task bits and 1e8 cycles; bit set {2} carries 5e7 bits and 1e8 cycles
EX_PROFILES = {
    0: KnowledgeClassProfile(0, d_task=4e7, d_knowledge=8e7, info=5e6, cycles=6e7),
    1: KnowledgeClassProfile(1, d_task=6e7, d_knowledge=9e9, info=5e6, cycles=4e7),
    2: KnowledgeClassProfile(2, d_task=5e7, d_knowledge=1e6, info=4e6, cycles=1e8),
}


def test_shannon_rate_unit_snr():
    assert shannon_rate(10e6, 1.0, 1.0, 1.0) == pytest.approx(1e7, rel=1e-12)


def test_shannon_rate_frozen_example():
    # SNR = 0.1 * 1e-7 / 1e-15 = 1e7; mpmath oracle value
    assert shannon_rate(10e6, 0.1, 1e-7, 1e-15) == pytest.approx(232534968.085,
                                                                 rel=1e-9)


def test_shannon_rate_zero_gain():
    assert shannon_rate(10e6, 0.1, 0.0, 1e-15) == 0.0


def test_compute_ratio_values():
    assert compute_ratio(1.0, 1.0) == 1.0
    assert compute_ratio(0.5, 1.0) == pytest.approx(2.0, rel=1e-12)
    assert compute_ratio(0.25, 2.0) == pytest.approx(16.0, rel=1e-12)


def test_compute_ratio_singular_at_zero():
    with pytest.raises(SingularExtraction):
        compute_ratio(0.0, 1.0)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(k_in=frozenset({1}), k_up=frozenset({1}),
                  k_cu=frozenset({1}), k_bit=frozenset())
    with pytest.raises(ValueError):
        Partition.make({0, 1}, k_in={0}, k_up={5})
    p = Partition.make({0, 1, 2}, k_in={0}, k_up={1})
    assert p.k_cu == {0, 1} and p.k_bit == {2}


def test_time_breakdown_worked_example():
    part = Partition.make({0, 1, 2}, k_in={1}, k_up={0})
    bd = time_breakdown(EX_PROFILES, part, xi=0.5, rate=1e8, cpu_speed=2e9, rho=1.0)
    assert bd.t_upload == pytest.approx(0.8, rel=1e-12)
    assert bd.t_semantic == pytest.approx(0.5, rel=1e-12)
    assert bd.t_bit == pytest.approx(0.5, rel=1e-12)
    assert bd.t_sem_compute == pytest.approx(0.1, rel=1e-12)
    assert bd.t_raw_compute == pytest.approx(0.05, rel=1e-12)
    assert bd.t_total == pytest.approx(1.95, rel=1e-12)


def test_time_breakdown_empty_upload():
    part = Partition.make({0, 1, 2}, k_in={0, 1})
    bd = time_breakdown(EX_PROFILES, part, 0.5, 1e8, 2e9, 1.0)
    assert bd.t_upload == 0.0


def test_time_breakdown_full_semantic():
    part = Partition.make({0, 1, 2}, k_in={0, 1}, k_up={2})
    bd = time_breakdown(EX_PROFILES, part, 0.5, 1e8, 2e9, 1.0)
    assert bd.t_bit == 0.0 and bd.t_raw_compute == 0.0


def test_time_breakdown_pure_bit_ignores_xi():
    part = Partition.make({0, 1, 2}, k_in=set())
    bd1 = time_breakdown(EX_PROFILES, part, 0.1, 1e8, 2e9, 1.0)
    bd2 = time_breakdown(EX_PROFILES, part, 0.9, 1e8, 2e9, 1.0)
    assert bd1 == bd2
    assert bd1.t_semantic == 0.0 and bd1.t_sem_compute == 0.0 and bd1.t_upload == 0.0


def test_time_additivity():
    part = Partition.make({0, 1, 2}, k_in={1}, k_up={0})
    bd = time_breakdown(EX_PROFILES, part, 0.37, 1e8, 2e9, 1.0)
    total = (bd.t_upload + bd.t_semantic + bd.t_bit
             + bd.t_sem_compute + bd.t_raw_compute)
    assert bd.t_total == total


def test_check_delay_boundary_inclusive():
    part = Partition.make({0, 1, 2}, k_in={1}, k_up={0})
    bd = time_breakdown(EX_PROFILES, part, 0.5, 1e8, 2e9, 1.0)
    assert check_delay(bd, 2.0)
    assert check_delay(bd, bd.t_total)
    assert not check_delay(bd, bd.t_total * (1 - 1e-9))


def test_semantic_rate_pure_bit():
    profiles = {0: profile(0, d_task=2e7, info=4e6), 1: profile(1, d_task=3e7, info=6e6)}
    part = Partition.make({0, 1}, k_in=set())
    gamma = semantic_rate(profiles, part, xi=1.0, eps=1.0, rate=1e8)
    assert gamma == pytest.approx(1e8 * 1e7 / 5e7, rel=1e-12)
    # independent of xi and eps
    assert semantic_rate(profiles, part, 0.2, 0.1, 1e8) == gamma


def test_semantic_rate_full_semantic():
    profiles = {0: profile(0, d_task=1e8, info=1e7)}
    part = Partition.make({0}, k_in={0})
    gamma = semantic_rate(profiles, part, xi=0.5, eps=0.9, rate=1e8)
    assert gamma == pytest.approx(1.8e7, rel=1e-12)


def test_semantic_rate_mixed_frozen():
    profiles = {0: profile(0, d_task=6e7, info=6e6), 1: profile(1, d_task=4e7, info=4e6)}
    part = Partition.make({0, 1}, k_in={0})
    gamma = semantic_rate(profiles, part, xi=0.5, eps=0.9, rate=1e8)
    assert gamma == pytest.approx(1e8 * 9.4e6 / 7e7, rel=1e-12)  # ~1.3429e7


def test_semantic_rate_monotone_in_rate():
    profiles = {0: profile(0, d_task=6e7, info=6e6), 1: profile(1, d_task=4e7, info=4e6)}
    part = Partition.make({0, 1}, k_in={0})
    g1 = semantic_rate(profiles, part, 0.5, 0.9, 1e8)
    g2 = semantic_rate(profiles, part, 0.5, 0.9, 1.5e8)
    assert g2 > g1
    assert g2 == pytest.approx(1.5 * g1, rel=1e-12)


def test_semantic_rate_nonincreasing_in_xi():
    profiles = {0: profile(0, d_task=6e7, info=6e6), 1: profile(1, d_task=4e7, info=4e6)}
    part = Partition.make({0, 1}, k_in={0})
    gammas = [semantic_rate(profiles, part, xi, 0.9, 1e8)
              for xi in (0.1, 0.3, 0.5, 0.7, 1.0)]
    assert all(a >= b for a, b in zip(gammas, gammas[1:]))


def test_semantic_rate_reciprocal_in_xi_when_lossless_full():
    profiles = {0: profile(0, d_task=1e8, info=1e7)}
    part = Partition.make({0}, k_in={0})
    g_half = semantic_rate(profiles, part, 0.5, 1.0, 1e8)
    g_one = semantic_rate(profiles, part, 1.0, 1.0, 1e8)
    assert g_half == pytest.approx(2 * g_one, rel=1e-12)


def test_case_consistency_matched_and_empty():
    profiles = EX_PROFILES
    matched = Partition.make({0, 1, 2}, k_in={0, 1, 2})
    bd = time_breakdown(profiles, matched, 0.5, 1e8, 2e9, 1.0)
    assert bd.t_upload == 0.0 and bd.t_bit == 0.0 and bd.t_raw_compute == 0.0
    empty = Partition.make({0, 1, 2}, k_in=set())
    bd = time_breakdown(profiles, empty, 1.0, 1e8, 2e9, 1.0)
    assert bd.t_upload == 0.0 and bd.t_semantic == 0.0 and bd.t_sem_compute == 0.0
