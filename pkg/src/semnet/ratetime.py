"""Channel rate, four-case timing model, and the effective semantic rate.

All quantities stay in base units end to end: bits, suts, seconds, cycles,
Hz, W. Empty sums are zero, which makes the four transmission cases (full
sharing, partial sharing, already matched, pure bit) fall out of one set of
formulas.
"""

import math
from dataclasses import dataclass

from .errors import SingularExtraction


@dataclass(frozen=True)
class Partition:
    """Split of a device's required classes for one candidate decision.

    k_in: already stored at the station; k_up: selected for upload;
    k_cu = k_in | k_up is transmitted semantically; k_bit is the rest,
    transmitted as plain bits.
    """
    k_in: frozenset
    k_up: frozenset
    k_cu: frozenset
    k_bit: frozenset

    def __post_init__(self):
        if self.k_up & self.k_in:
            raise ValueError("k_up must be disjoint from k_in")
        if self.k_cu != self.k_in | self.k_up:
            raise ValueError("k_cu must equal k_in | k_up")
        if self.k_bit & self.k_cu:
            raise ValueError("k_bit must be disjoint from k_cu")

    @classmethod
    def make(cls, required_ids, k_in, k_up=frozenset()):
        required_ids = frozenset(required_ids)
        k_in = frozenset(k_in)
        k_up = frozenset(k_up)
        if not k_in <= required_ids:
            raise ValueError("k_in must be a subset of the required classes")
        if not k_up <= required_ids - k_in:
            raise ValueError("k_up must be drawn from the mismatched classes")
        k_cu = k_in | k_up
        return cls(k_in=k_in, k_up=k_up, k_cu=k_cu, k_bit=required_ids - k_cu)


@dataclass(frozen=True)
class TimeBreakdown:
    t_upload: float       # knowledge sharing transmission
    t_semantic: float     # semantic data transmission
    t_bit: float          # plain bit transmission
    t_sem_compute: float  # semantic decode + execution
    t_raw_compute: float  # raw data execution
    t_total: float

    def __post_init__(self):
        parts = (self.t_upload, self.t_semantic, self.t_bit,
                 self.t_sem_compute, self.t_raw_compute)
        if any(t < 0 for t in parts):
            raise ValueError("time components must be nonnegative")


@dataclass(frozen=True)
class PairContext:
    """Everything one (device, station) pair solve needs, precomputed."""
    profiles: dict        # class_id -> KnowledgeClassProfile
    k_in: frozenset
    rate: float           # bits/s
    cpu_speed: float      # cycles/s
    rho: float
    eps_min: float
    t_max: float
    accuracy: object      # AccuracyModel
    xi_th: float          # None when eps_min is unreachable
    o1: float = 1e-3
    o2: float = 1e-6
    grid_step: float = 1e-4

    @property
    def required_ids(self):
        return frozenset(self.profiles)


def shannon_rate(bandwidth, power, gain, noise):
    """W * log2(1 + p*g/sigma^2), bits/s."""
    if bandwidth <= 0 or noise <= 0:
        raise ValueError("bandwidth and noise must be positive")
    if power < 0 or gain < 0:
        raise ValueError("power and gain must be nonnegative")
    return bandwidth * math.log2(1.0 + power * gain / noise)


def compute_ratio(xi, rho):
    """Semantic-to-raw compute load ratio xi^(-rho); 1 when xi = 1."""
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if xi == 0:
        raise SingularExtraction("compute ratio unbounded at xi = 0")
    if not 0 < xi <= 1:
        raise ValueError(f"xi must be in (0,1], got {xi}")
    return xi ** (-rho)


def sum_attr(profiles, ids, attr):
    """Sum one profile attribute over a set of class ids (0 for the empty set)."""
    return math.fsum(getattr(profiles[k], attr) for k in ids)


def time_breakdown(profiles, partition, xi, rate, cpu_speed, rho):
    """All five time components of a candidate decision, plus their sum.

    xi only matters when k_cu is nonempty; the pure-bit case ignores it.
    """
    if rate <= 0 or cpu_speed <= 0:
        raise ValueError("rate and cpu_speed must be positive")
    t_upload = sum_attr(profiles, partition.k_up, "d_knowledge") / rate
    t_bit = sum_attr(profiles, partition.k_bit, "d_task") / rate
    t_raw_compute = sum_attr(profiles, partition.k_bit, "cycles") / cpu_speed
    if partition.k_cu:
        t_semantic = xi * sum_attr(profiles, partition.k_cu, "d_task") / rate
        t_sem_compute = (compute_ratio(xi, rho)
                         * sum_attr(profiles, partition.k_cu, "cycles") / cpu_speed)
    else:
        t_semantic = 0.0
        t_sem_compute = 0.0
    t_total = t_upload + t_semantic + t_bit + t_sem_compute + t_raw_compute
    return TimeBreakdown(t_upload=t_upload, t_semantic=t_semantic, t_bit=t_bit,
                         t_sem_compute=t_sem_compute, t_raw_compute=t_raw_compute,
                         t_total=t_total)


def check_delay(breakdown, t_max):
    """True iff the task finishes within the tolerance (boundary inclusive)."""
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    return breakdown.t_total <= t_max


def semantic_rate(profiles, partition, xi, eps, rate):
    """Generalized effective semantic transmission rate, suts/s.

    rate * (sum_cu I*eps + sum_bit I) / (xi * sum_cu dT + sum_bit dT).
    With k_cu empty both semantic terms vanish and the value is independent
    of xi and eps; with k_bit empty both bit terms vanish.
    """
    info_cu = sum_attr(profiles, partition.k_cu, "info")
    info_bit = sum_attr(profiles, partition.k_bit, "info")
    d_cu = sum_attr(profiles, partition.k_cu, "d_task")
    d_bit = sum_attr(profiles, partition.k_bit, "d_task")
    denom = (xi * d_cu if partition.k_cu else 0.0) + d_bit
    if denom <= 0:
        raise ValueError("semantic rate denominator must be positive")
    num = (info_cu * eps if partition.k_cu else 0.0) + info_bit
    return rate * num / denom
