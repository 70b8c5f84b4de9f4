"""Domain types and seeded random scenario generation.

A Scenario bundles devices, stations, per-link power gains, the channel and
system parameters, and the accuracy model. Generation is a pure function of
(config, seed): the same pair always yields a bit-identical scenario, and
distinct draws use one numpy Generator consumed in a fixed order.
"""

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .accuracy import DEFAULT_THETA, AccuracyModel
from .errors import DegenerateGeometry, InvalidConfig

DEFAULT_REF_ATTENUATION = 1e-3  # 30 dB average power attenuation at 1 m
DEFAULT_PATH_LOSS_EXPONENT = 2.0


@dataclass(frozen=True)
class KnowledgeClassProfile:
    """Per-device data sizes, semantic content and compute load of one class."""
    class_id: int
    d_task: float       # requested raw task data, bits
    d_knowledge: float  # knowledge data to upload, bits
    info: float         # semantic information content, suts
    cycles: float       # compute load, CPU cycles

    def __post_init__(self):
        for name in ("d_task", "d_knowledge", "info", "cycles"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class MobileDevice:
    id: int
    position: tuple
    tx_power: float          # W
    eps_min: float           # minimum semantic accuracy, fraction
    t_max: float             # delay tolerance, s
    required_classes: tuple  # KnowledgeClassProfile, ordered by class_id

    def __post_init__(self):
        if not 0.0 <= self.eps_min <= 1.0:
            raise ValueError(f"eps_min must be in [0,1], got {self.eps_min}")
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if not self.required_classes:
            raise ValueError("required_classes must be nonempty")
        ids = [p.class_id for p in self.required_classes]
        if len(set(ids)) != len(ids):
            raise ValueError("required class_ids must be distinct")

    @property
    def required_ids(self):
        return frozenset(p.class_id for p in self.required_classes)

    @property
    def profiles(self):
        return {p.class_id: p for p in self.required_classes}


@dataclass(frozen=True)
class BaseStation:
    id: int
    position: tuple
    cpu_speed: float        # cycles/s per cloudlet
    n_cloudlets: int
    stored_classes: frozenset

    def __post_init__(self):
        if self.cpu_speed <= 0:
            raise ValueError(f"cpu_speed must be positive, got {self.cpu_speed}")
        if self.n_cloudlets < 1:
            raise ValueError(f"n_cloudlets must be >= 1, got {self.n_cloudlets}")


@dataclass(frozen=True)
class ChannelModel:
    bandwidth: float    # Hz, pre-allocated subchannel
    noise_power: float  # W at the receiver input
    ref_attenuation: float = DEFAULT_REF_ATTENUATION
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT

    def __post_init__(self):
        if self.bandwidth <= 0 or self.noise_power <= 0 or self.ref_attenuation <= 0:
            raise ValueError("bandwidth, noise_power and ref_attenuation must be positive")


@dataclass(frozen=True)
class SystemParams:
    rho: float = 1.0          # compute-ratio exponent
    o1: float = 1e-3          # outer-approximation relative tolerance
    o2: float = 1e-6          # projection bisection tolerance
    grid_step: float = 1e-4   # envelope / oracle grid resolution

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not 0 < self.o1 < 1 or not 0 < self.o2 < 1:
            raise ValueError("tolerances o1, o2 must be in (0,1)")


def link_gain(distance, fading_sq, ref_attenuation=DEFAULT_REF_ATTENUATION,
              path_loss_exponent=DEFAULT_PATH_LOSS_EXPONENT):
    """Power gain ref_attenuation * fading_sq * distance^(-exponent)."""
    if distance <= 0:
        raise DegenerateGeometry(f"distance must be positive, got {distance}")
    if fading_sq < 0:
        raise ValueError(f"fading_sq must be nonnegative, got {fading_sq}")
    return ref_attenuation * fading_sq * distance ** (-path_loss_exponent)


@dataclass(frozen=True)
class Scenario:
    devices: tuple
    stations: tuple
    gains: tuple          # gains[m][n], device-major
    channel: ChannelModel
    params: SystemParams
    accuracy: AccuracyModel

    def __post_init__(self):
        if len(self.gains) != len(self.devices) or any(
                len(row) != len(self.stations) for row in self.gains):
            raise ValueError("gains must cover every (device, station) pair")
        if any(g <= 0 for row in self.gains for g in row):
            raise ValueError("all gains must be positive")

    def gain(self, m_idx, n_idx):
        return self.gains[m_idx][n_idx]

    def initial_matched(self, m_idx, n_idx):
        """Class ids stored at station n among those required by device m."""
        return self.devices[m_idx].required_ids & self.stations[n_idx].stored_classes


def _range_tuple(name, value):
    try:
        lo, hi = float(value["min"]), float(value["max"])
    except (TypeError, KeyError) as exc:
        raise InvalidConfig(f"{name} must be a {{min,max}} object") from exc
    if not lo <= hi:
        raise InvalidConfig(f"{name} range is empty: [{lo}, {hi}]")
    return lo, hi


@dataclass(frozen=True)
class ScenarioConfig:
    """Generation recipe: geometry, knowledge inventory sizes, parameter ranges."""
    n_stations: int
    station_positions: tuple
    n_devices: int
    area_radius_m: float
    n_global_classes: int
    stored_per_station: int
    required_range: tuple           # (min, max) classes per device
    info_suts: tuple                # per-class ranges below
    d_knowledge_bits: tuple
    d_task_bits: tuple
    cycles: tuple
    eps_min: tuple                  # per-device ranges
    t_max_s: tuple
    cpu_speed_hz: float = 2e9
    n_cloudlets: int = 2
    tx_power_w: float = 0.1
    bandwidth_hz: float = 10e6
    noise_power_w: float = 1e-15    # -120 dBm
    ref_attenuation: float = DEFAULT_REF_ATTENUATION
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT
    rho: float = 1.0
    o1: float = 1e-3
    o2: float = 1e-6
    grid_step: float = 1e-4
    theta: tuple = DEFAULT_THETA

    def __post_init__(self):
        if self.stored_per_station > self.n_global_classes:
            raise InvalidConfig(
                f"stored_per_station ({self.stored_per_station}) exceeds "
                f"n_global_classes ({self.n_global_classes})")
        if len(self.station_positions) != self.n_stations:
            raise InvalidConfig("station_positions must list one position per station")
        lo, hi = self.required_range
        if not 1 <= lo <= hi <= self.n_global_classes:
            raise InvalidConfig(f"required_range {self.required_range} out of bounds")
        if self.n_devices < 1 or self.area_radius_m <= 0:
            raise InvalidConfig("need n_devices >= 1 and a positive area radius")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        try:
            kwargs = dict(
                n_stations=int(d.pop("n_stations")),
                station_positions=tuple(tuple(map(float, p))
                                        for p in d.pop("station_positions")),
                n_devices=int(d.pop("n_devices")),
                area_radius_m=float(d.pop("area_radius_m")),
                n_global_classes=int(d.pop("n_global_classes")),
                stored_per_station=int(d.pop("stored_per_station")),
                required_range=_range_tuple("required_range", d.pop("required_range")),
            )
        except KeyError as exc:
            raise InvalidConfig(f"missing config field: {exc}") from exc
        for name in ("info_suts", "d_knowledge_bits", "d_task_bits",
                     "cycles", "eps_min", "t_max_s"):
            if name not in d:
                raise InvalidConfig(f"missing config field: {name!r}")
            kwargs[name] = _range_tuple(name, d.pop(name))
        for name in ("cpu_speed_hz", "tx_power_w", "bandwidth_hz", "noise_power_w",
                     "ref_attenuation", "path_loss_exponent", "rho",
                     "o1", "o2", "grid_step"):
            if name in d:
                kwargs[name] = float(d.pop(name))
        if "n_cloudlets" in d:
            kwargs["n_cloudlets"] = int(d.pop("n_cloudlets"))
        if "theta" in d:
            kwargs["theta"] = tuple(float(t) for t in d.pop("theta"))
        if d:
            raise InvalidConfig(f"unknown config fields: {sorted(d)}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidConfig(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)


def scenario_1_config(**overrides):
    """Small network: 3 stations, 5 devices, 10 classes (6 stored, 3-6 required)."""
    cfg = ScenarioConfig(
        n_stations=3,
        station_positions=((0.0, 75.0), (-75.0, -75.0), (75.0, -75.0)),
        n_devices=5,
        area_radius_m=150.0,
        n_global_classes=10,
        stored_per_station=6,
        required_range=(3, 6),
        info_suts=(2e6, 20e6),
        d_knowledge_bits=(5e6, 80e6),
        d_task_bits=(20e6, 100e6),
        cycles=(1e6, 100e6),
        eps_min=(0.7, 0.85),
        t_max_s=(4.5, 5.5),
    )
    return replace(cfg, **overrides) if overrides else cfg


def scenario_2_config(**overrides):
    """Larger network: 5 stations, 10 devices, 20 classes (8 stored, 11-15 required)."""
    cfg = ScenarioConfig(
        n_stations=5,
        station_positions=((0.0, 0.0), (150.0, 0.0), (0.0, 150.0),
                           (-150.0, 0.0), (0.0, -150.0)),
        n_devices=10,
        area_radius_m=300.0,
        n_global_classes=20,
        stored_per_station=8,
        required_range=(11, 15),
        info_suts=(2e6, 20e6),
        d_knowledge_bits=(5e6, 80e6),
        d_task_bits=(20e6, 100e6),
        cycles=(1e6, 100e6),
        eps_min=(0.7, 0.85),
        t_max_s=(4.5, 5.5),
    )
    return replace(cfg, **overrides) if overrides else cfg


def generate_scenario(config, seed):
    """Draw a full Scenario from the config. Deterministic given (config, seed).

    Draw order is fixed: device positions, fading, stored class sets, then
    per-device requirements and parameters. Changing one config field never
    silently reorders the stream for unrelated fields of the same entity.
    """
    rng = np.random.default_rng(seed)

    # Device positions, uniform over the disk.
    u = rng.random((config.n_devices, 2))
    radii = config.area_radius_m * np.sqrt(u[:, 0])
    angles = 2.0 * math.pi * u[:, 1]
    positions = [(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles)]

    # Unit-mean exponential fading power per link; redraw the (measure-zero)
    # exact zeros so every gain is strictly positive.
    fading_sq = rng.exponential(1.0, size=(config.n_devices, config.n_stations))
    while np.any(fading_sq == 0.0):
        mask = fading_sq == 0.0
        fading_sq[mask] = rng.exponential(1.0, size=int(mask.sum()))

    stations = []
    for n in range(config.n_stations):
        stored = rng.choice(config.n_global_classes, size=config.stored_per_station,
                            replace=False)
        stations.append(BaseStation(
            id=n,
            position=tuple(config.station_positions[n]),
            cpu_speed=config.cpu_speed_hz,
            n_cloudlets=config.n_cloudlets,
            stored_classes=frozenset(int(c) for c in stored),
        ))

    devices = []
    lo_req, hi_req = config.required_range
    for m in range(config.n_devices):
        k_req = int(rng.integers(lo_req, hi_req + 1))
        ids = sorted(int(c) for c in rng.choice(config.n_global_classes,
                                                size=k_req, replace=False))
        d_task = rng.uniform(*config.d_task_bits, size=k_req)
        d_know = rng.uniform(*config.d_knowledge_bits, size=k_req)
        info = rng.uniform(*config.info_suts, size=k_req)
        cycles = rng.uniform(*config.cycles, size=k_req)
        profiles = tuple(
            KnowledgeClassProfile(class_id=cid, d_task=float(dt), d_knowledge=float(dk),
                                  info=float(iv), cycles=float(cy))
            for cid, dt, dk, iv, cy in zip(ids, d_task, d_know, info, cycles))
        devices.append(MobileDevice(
            id=m,
            position=positions[m],
            tx_power=config.tx_power_w,
            eps_min=float(rng.uniform(*config.eps_min)),
            t_max=float(rng.uniform(*config.t_max_s)),
            required_classes=profiles,
        ))

    gains = tuple(
        tuple(link_gain(
            max(math.dist(devices[m].position, stations[n].position), 1e-9),
            float(fading_sq[m, n]),
            config.ref_attenuation, config.path_loss_exponent)
            for n in range(config.n_stations))
        for m in range(config.n_devices))

    return Scenario(
        devices=tuple(devices),
        stations=tuple(stations),
        gains=gains,
        channel=ChannelModel(bandwidth=config.bandwidth_hz,
                             noise_power=config.noise_power_w,
                             ref_attenuation=config.ref_attenuation,
                             path_loss_exponent=config.path_loss_exponent),
        params=SystemParams(rho=config.rho, o1=config.o1, o2=config.o2,
                            grid_step=config.grid_step),
        accuracy=AccuracyModel(config.theta, config.grid_step),
    )
