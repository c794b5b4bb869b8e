import json

import pytest

from trustgossip.config import ConfigError, SimConfig
from trustgossip.sweep import (default_grid, derive_seed, expand_grid,
                               load_grid, run_sweep, validate_grid)

FAST = SimConfig(n_agents=6, total_steps=20, tg_rounds=2, burnin_rounds=1,
                 regime="well_mixed", gossip_mechanism="parallel")


def test_expand_grid_orders_last_axis_fastest():
    grid = {"action_rule": [1, 2], "cooperation_threshold": [0.0, 0.1]}
    assert expand_grid(grid) == [
        {"action_rule": 1, "cooperation_threshold": 0.0},
        {"action_rule": 1, "cooperation_threshold": 0.1},
        {"action_rule": 2, "cooperation_threshold": 0.0},
        {"action_rule": 2, "cooperation_threshold": 0.1},
    ]


@pytest.mark.parametrize("grid, bad_field", [
    ({"colour": ["red"]}, "colour"),
    ({"seed": [1, 2]}, "seed"),
    ({"action_rule": []}, "action_rule"),
    ({"action_rule": 1}, "action_rule"),
    ({}, "<grid>"),
    ([1, 2], "<grid>"),
])
def test_validate_grid_rejects_malformed_grids(grid, bad_field):
    with pytest.raises(ConfigError) as err:
        validate_grid(grid)
    assert err.value.field == bad_field


def test_derive_seed_is_stable_content_hash():
    cond = {"action_rule": 2, "omega": 0.5}
    assert derive_seed(7, cond, 3) == 14274567368692192573
    # key order in the condition dict must not matter
    assert derive_seed(7, {"omega": 0.5, "action_rule": 2}, 3) == derive_seed(7, cond, 3)
    # any coordinate change moves the seed
    assert derive_seed(8, cond, 3) != derive_seed(7, cond, 3)
    assert derive_seed(7, cond, 4) != derive_seed(7, cond, 3)
    assert derive_seed(7, {"action_rule": 1, "omega": 0.5}, 3) != derive_seed(7, cond, 3)


def test_run_sweep_collects_all_runs_in_condition_order():
    grid = {"action_rule": [1, 2]}
    result = run_sweep(grid, base=FAST, replicates=2, master_seed=11)
    assert result.conditions == [{"action_rule": 1}, {"action_rule": 2}]
    assert result.group_by == ["action_rule"]
    assert result.failures == []
    assert [r.config["action_rule"] for r in result.records] == [1, 1, 2, 2]
    assert [r.config["seed"] for r in result.records] == [
        derive_seed(11, {"action_rule": 1}, 0),
        derive_seed(11, {"action_rule": 1}, 1),
        derive_seed(11, {"action_rule": 2}, 0),
        derive_seed(11, {"action_rule": 2}, 1),
    ]
    assert all(r.config["n_agents"] == 6 for r in result.records)


def test_run_sweep_worker_count_does_not_change_output():
    grid = {"cooperation_threshold": [0.0, 0.1]}
    serial = run_sweep(grid, base=FAST, replicates=2, master_seed=3, workers=1)
    pooled = run_sweep(grid, base=FAST, replicates=2, master_seed=3, workers=2)
    assert [r.to_json() for r in serial.records] == [r.to_json() for r in pooled.records]


def test_run_sweep_records_failures_and_continues():
    grid = {"multiplier": [3.0, 0.5]}    # 0.5 creates no resources: invalid
    result = run_sweep(grid, base=FAST, replicates=2, master_seed=0)
    assert len(result.records) == 2
    assert all(r.config["multiplier"] == 3.0 for r in result.records)
    assert len(result.failures) == 2
    failure = result.failures[0]
    assert failure["condition"] == {"multiplier": 0.5}
    assert failure["condition_index"] == 1
    assert failure["replicate"] == 0
    assert failure["seed"] == derive_seed(0, {"multiplier": 0.5}, 0)
    assert "multiplier" in failure["error"]


def test_run_sweep_rejects_bad_execution_parameters():
    with pytest.raises(ConfigError) as err:
        run_sweep({"action_rule": [1]}, replicates=0)
    assert err.value.field == "replicates"
    with pytest.raises(ConfigError) as err:
        run_sweep({"action_rule": [1]}, workers=0)
    assert err.value.field == "workers"


def test_run_sweep_repeats_exactly():
    grid = {"action_rule": [1]}
    a = run_sweep(grid, base=FAST, replicates=2, master_seed=5)
    b = run_sweep(grid, base=FAST, replicates=2, master_seed=5)
    assert [r.to_json() for r in a.records] == [r.to_json() for r in b.records]
    c = run_sweep(grid, base=FAST, replicates=2, master_seed=6)
    assert [r.to_json() for r in a.records] != [r.to_json() for r in c.records]


def test_load_grid(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"action_rule": [1, 3]}))
    assert load_grid(path) == {"action_rule": [1, 3]}
    with pytest.raises(ConfigError) as err:
        load_grid(tmp_path / "other.json")
    assert err.value.field == "<grid>"
    path.write_text("{not json")
    with pytest.raises(ConfigError) as err:
        load_grid(path)
    assert err.value.field == "<grid>"


def test_default_grid_axes():
    grid = default_grid()
    assert list(grid) == ["gossip_mechanism", "regime", "action_rule",
                          "cooperation_threshold", "defector_fraction"]
    assert len(expand_grid(grid)) == 3 * 3 * 3 * 4 * 4
    assert grid["gossip_mechanism"] == ["parallel", "triadic", "simple"]
    # every condition must be valid against the default base config
    base = SimConfig()
    for condition in expand_grid(grid):
        base.with_overrides(**condition).validate()
