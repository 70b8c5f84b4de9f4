"""Shared builders: random pair contexts drawn from the default parameter table."""

import pytest

from semnet.accuracy import AccuracyModel
from semnet.errors import AccuracyUnreachable
from semnet.ratetime import PairContext, shannon_rate
from semnet.scenario import KnowledgeClassProfile, link_gain

TABLE = {
    "info": (2e6, 20e6),
    "d_knowledge": (5e6, 80e6),
    "d_task": (20e6, 100e6),
    "cycles": (1e6, 100e6),
    "eps_min": (0.7, 0.85),
    "t_max": (4.5, 5.5),
}


@pytest.fixture(scope="session")
def default_model():
    return AccuracyModel.default()


def draw_profiles(rng, ids):
    out = {}
    for cid in ids:
        out[cid] = KnowledgeClassProfile(
            class_id=cid,
            d_task=float(rng.uniform(*TABLE["d_task"])),
            d_knowledge=float(rng.uniform(*TABLE["d_knowledge"])),
            info=float(rng.uniform(*TABLE["info"])),
            cycles=float(rng.uniform(*TABLE["cycles"])),
        )
    return out


def draw_rate(rng, bandwidth=10e6, tx_power=0.1, noise=1e-15,
              d_min=10.0, d_max=300.0):
    distance = float(rng.uniform(d_min, d_max))
    fading = float(rng.exponential(1.0)) or 1.0
    return shannon_rate(bandwidth, tx_power, link_gain(distance, fading), noise)


def draw_pair_context(rng, model, n_required=None, n_matched=None, **overrides):
    """Random pair context with Table-default parameter draws."""
    if n_required is None:
        n_required = int(rng.integers(1, 8))
    if n_matched is None:
        n_matched = int(rng.integers(0, n_required + 1))
    ids = list(range(n_required))
    k_in = frozenset(int(c) for c in rng.choice(ids, size=n_matched, replace=False))
    eps_min = overrides.pop("eps_min", float(rng.uniform(*TABLE["eps_min"])))
    if "xi_th" in overrides:
        xi_th = overrides.pop("xi_th")
    else:
        try:
            xi_th = model.min_extraction_ratio(eps_min)
        except AccuracyUnreachable:
            xi_th = None
    kwargs = dict(
        profiles=draw_profiles(rng, ids),
        k_in=k_in,
        rate=draw_rate(rng),
        cpu_speed=2e9,
        rho=1.0,
        eps_min=eps_min,
        t_max=float(rng.uniform(*TABLE["t_max"])),
        accuracy=model,
        xi_th=xi_th,
    )
    kwargs.update(overrides)
    return PairContext(**kwargs)
