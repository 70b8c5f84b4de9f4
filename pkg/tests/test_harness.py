"""Experiment driver: overrides, sweeps, determinism, CSV emission."""

import pytest

from semnet.errors import InvalidSweep
from semnet.harness import (SweepConfig, apply_override, emit_csv, preset_sweep,
                            run_point, run_sweep, trial_seed)
from semnet.kuer import make_pair_context, solve_pair_efficient
from semnet.scenario import generate_scenario, scenario_1_config


def small_config(**kw):
    # single-station two-device network keeps harness tests fast
    base = scenario_1_config(n_stations=1, station_positions=((0.0, 0.0),),
                            n_devices=2, n_global_classes=6,
                            stored_per_station=4, required_range=(2, 3))
    return base if not kw else scenario_1_config(
        n_stations=1, station_positions=((0.0, 0.0),), n_devices=2,
        n_global_classes=6, stored_per_station=4, required_range=(2, 3), **kw)


def sweep_cfg(**kw):
    args = dict(scenario=small_config(), param="bandwidth",
                values=(5e6, 10e6, 20e6), solvers=("efficient", "no_sharing"),
                trials=2, master_seed=11)
    args.update(kw)
    return SweepConfig(**args)


def test_run_point_single_pair_equals_pair_gamma():
    cfg = scenario_1_config(n_stations=1, station_positions=((10.0, 0.0),),
                            n_devices=1, required_range=(2, 3))
    s = generate_scenario(cfg, 3)
    total, assignment = run_point(s, "efficient")
    pair = solve_pair_efficient(make_pair_context(s, 0, 0))
    assert total == pytest.approx(pair.gamma, rel=1e-12)
    assert assignment.pairs == ((0, 0),)


def test_run_point_all_infeasible_yields_zero():
    cfg = small_config(t_max_s=(1e-6, 1e-6))
    s = generate_scenario(cfg, 3)
    total, assignment = run_point(s, "efficient")
    assert total == 0.0
    assert assignment.pairs == ()


def test_run_point_sharing_dominates_baseline():
    s = generate_scenario(small_config(), 5)
    total_eff, _ = run_point(s, "efficient")
    total_ns, _ = run_point(s, "no_sharing")
    assert total_eff >= total_ns * (1 - 1e-9)


def test_apply_override_fields():
    s = generate_scenario(scenario_1_config(), 1)
    assert all(st.cpu_speed == 4e9
               for st in apply_override(s, "cpu_speed", 4e9).stations)
    assert all(st.n_cloudlets == 5
               for st in apply_override(s, "n_cloudlets", 5).stations)
    assert apply_override(s, "bandwidth", 2e7).channel.bandwidth == 2e7
    assert all(d.eps_min == 0.8
               for d in apply_override(s, "eps_min", 0.8).devices)
    assert all(d.t_max == 3.0 for d in apply_override(s, "t_max", 3.0).devices)
    d_k = apply_override(s, "d_knowledge", 4.2e7)
    assert all(p.d_knowledge == 4.2e7
               for dev in d_k.devices for p in dev.required_classes)
    with pytest.raises(InvalidSweep):
        apply_override(s, "magic", 1.0)


def test_override_preserves_other_draws():
    s = generate_scenario(scenario_1_config(), 1)
    s2 = apply_override(s, "cpu_speed", 4e9)
    assert s2.devices == s.devices
    assert s2.gains == s.gains


def test_sweep_row_cardinality_and_order():
    result = run_sweep(sweep_cfg(), n_workers=1)
    assert len(result.rows) == 3 * 2 * 2
    key = [(r.value, r.solver, r.trial) for r in result.rows]
    solver_rank = {"efficient": 0, "no_sharing": 1}
    expected = sorted(key, key=lambda t: ((5e6, 10e6, 20e6).index(t[0]),
                                          solver_rank[t[1]], t[2]))
    assert key == expected


def test_sweep_deterministic_across_workers():
    r1 = run_sweep(sweep_cfg(), n_workers=1)
    r2 = run_sweep(sweep_cfg(), n_workers=2)
    strip = lambda rows: [(r.param, r.value, r.solver, r.trial, r.seed,
                           r.total_rate, r.n_associated) for r in rows]
    assert strip(r1.rows) == strip(r2.rows)


def test_sweep_rejects_unknown_parameter():
    with pytest.raises(InvalidSweep):
        sweep_cfg(param="jitter")
    with pytest.raises(InvalidSweep):
        sweep_cfg(values=())
    with pytest.raises(InvalidSweep):
        sweep_cfg(solvers=("optimum", "psychic"))


def test_trial_seed_stable_and_value_independent():
    assert trial_seed(7, 0) == trial_seed(7, 0)
    assert trial_seed(7, 0) != trial_seed(7, 1)
    assert trial_seed(8, 0) != trial_seed(7, 0)


def test_no_sharing_constant_across_d_knowledge(tmp_path):
    cfg = sweep_cfg(param="d_knowledge", values=(1e7, 8e7, 1.6e8),
                    solvers=("no_sharing",), trials=2)
    result = run_sweep(cfg, n_workers=1)
    per_trial = {}
    for r in result.rows:
        per_trial.setdefault(r.trial, set()).add(r.total_rate)
    for trial, totals in per_trial.items():
        assert len(totals) == 1, f"trial {trial} varied: {totals}"


def test_emit_csv_round_trip(tmp_path):
    result = run_sweep(sweep_cfg(trials=1), n_workers=1)
    path = tmp_path / "out.csv"
    emit_csv(result, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "param,value,solver,trial,seed,total_rate,n_associated,runtime_ms"
    assert len(lines) == 1 + len(result.rows)
    for line, row in zip(lines[1:], result.rows):
        cells = line.split(",")
        assert cells[0] == row.param
        assert float(cells[1]) == row.value
        assert cells[2] == row.solver
        assert int(cells[3]) == row.trial
        assert int(cells[4]) == row.seed
        assert float(cells[5]) == row.total_rate  # 17 digits round-trip exactly
        assert int(cells[6]) == row.n_associated


def test_emit_csv_empty_result(tmp_path):
    result = run_sweep(sweep_cfg(trials=1), n_workers=1)
    empty = type(result)(rows=())
    path = tmp_path / "empty.csv"
    emit_csv(empty, path)
    assert path.read_text() == \
        "param,value,solver,trial,seed,total_rate,n_associated,runtime_ms\n"


def test_presets_cover_figures():
    for name, param, scen_devices in (("fig4", "cpu_speed", 5),
                                      ("fig5", "bandwidth", 5),
                                      ("fig6", "eps_min", 5),
                                      ("fig7", "t_max", 10),
                                      ("fig8", "n_cloudlets", 10),
                                      ("fig9", "d_knowledge", 10)):
        cfg = preset_sweep(name, trials=3, master_seed=1)
        assert cfg.param == param
        assert cfg.scenario.n_devices == scen_devices
        assert cfg.trials == 3
    assert preset_sweep("fig4").solvers == ("optimum", "efficient", "no_sharing")
    assert preset_sweep("fig9").solvers == ("efficient", "no_sharing")
    assert 20e6 in preset_sweep("fig5").values and 40e6 in preset_sweep("fig5").values
    assert preset_sweep("fig4").values == (0.5e9, 1e9, 2e9, 4e9, 8e9)
    with pytest.raises(InvalidSweep):
        preset_sweep("fig99")
