import json

import pytest

from trustgossip.config import ConfigError, SimConfig


def test_defaults_validate():
    cfg = SimConfig()
    assert cfg.validate() is cfg


def test_defector_count_rounds_half_up():
    assert SimConfig(n_agents=16, defector_fraction=0.25).defector_count == 4
    assert SimConfig(n_agents=6, defector_fraction=0.25).defector_count == 2  # 1.5 -> 2
    assert SimConfig(n_agents=10, defector_fraction=0.33).defector_count == 3
    assert SimConfig(n_agents=16, defector_fraction=0.0).defector_count == 0
    assert SimConfig(n_agents=16, defector_fraction=1.0).defector_count == 16


def test_derived_schedule_quantities():
    cfg = SimConfig(total_steps=1000, tg_rounds=10, gossip_budget=10)
    assert cfg.steps_per_round == 100
    assert cfg.resolved_piece_lifespan == 10
    assert SimConfig(piece_lifespan=4).resolved_piece_lifespan == 4
    assert SimConfig(gossip_budget=0).resolved_piece_lifespan == 0


def test_network_usage_flags():
    assert not SimConfig(gossip_mechanism="parallel").uses_signed_network()
    assert SimConfig(gossip_mechanism="simple").uses_signed_network()
    assert SimConfig(gossip_mechanism="triadic").uses_signed_network()
    assert not SimConfig(regime="well_mixed").uses_game_network()
    assert SimConfig(regime="static").uses_game_network()
    assert SimConfig(regime="dynamic").uses_game_network()


@pytest.mark.parametrize("overrides,bad_field", [
    ({"n_agents": 2}, "n_agents"),
    ({"n_agents": 10001}, "n_agents"),
    ({"endowment": 0.0}, "endowment"),
    ({"defector_fraction": 1.5}, "defector_fraction"),
    ({"cooperation_threshold": 1.5}, "cooperation_threshold"),
    ({"action_rule": 4}, "action_rule"),
    ({"regime": "lattice"}, "regime"),
    ({"gossip_mechanism": "broadcast"}, "gossip_mechanism"),
    ({"omega": -0.1}, "omega"),
    ({"image_weight": 1.1}, "image_weight"),
    ({"multiplier": 1.0}, "multiplier"),
    ({"stake": 0.0}, "stake"),
    ({"return_fraction": -0.2}, "return_fraction"),
    ({"image_step": 0.0}, "image_step"),
    ({"total_steps": 0}, "total_steps"),
    ({"total_steps": 999}, "total_steps"),          # not divisible by tg_rounds
    ({"tg_rounds": 0}, "tg_rounds"),
    ({"burnin_rounds": -1}, "burnin_rounds"),
    ({"gossip_budget": -1}, "gossip_budget"),
    ({"gossip_mechanism": "simple", "total_steps": 50, "tg_rounds": 10,
      "gossip_budget": 10}, "total_steps"),         # pieces would get zero life
    ({"gossip_mechanism": "simple", "piece_lifespan": 0}, "piece_lifespan"),
    ({"gossip_mechanism": "simple", "piece_lifespan": 11}, "piece_lifespan"),
    ({"regime": "static", "min_degree": 0}, "min_degree"),
    ({"regime": "static", "min_degree": 16}, "min_degree"),
    ({"neighbor_play_prob": 1.5}, "neighbor_play_prob"),
    ({"leniency_length": -1}, "leniency_length"),
    ({"positive_density": -0.1}, "positive_density"),
    ({"negative_density": -0.1}, "negative_density"),
    ({"positive_density": 0.7, "negative_density": 0.4}, "positive_density"),
])
def test_validate_rejects_and_names_field(overrides, bad_field):
    cfg = SimConfig(**overrides)
    with pytest.raises(ConfigError) as err:
        cfg.validate()
    assert err.value.field == bad_field


def test_single_type_population_needs_explicit_consent():
    cfg = SimConfig(defector_fraction=0.0)
    with pytest.raises(ConfigError) as err:
        cfg.validate()
    assert err.value.field == "defector_fraction"
    assert cfg.validate(allow_degenerate=True) is cfg
    # tiny fractions that round down to zero defectors are caught too
    with pytest.raises(ConfigError):
        SimConfig(n_agents=16, defector_fraction=0.01).validate()


def test_min_degree_unchecked_for_well_mixed():
    # the game network is never built, so its knob may hold any value
    SimConfig(regime="well_mixed", min_degree=99).validate()


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigError) as err:
        SimConfig.from_dict({"n_agents": 16, "defectorfraction": 0.25})
    assert err.value.field == "defectorfraction"


@pytest.mark.parametrize("key,value", [
    ("n_agents", 16.0),
    ("n_agents", True),
    ("seed", "7"),
    ("defector_fraction", "0.25"),
    ("omega", True),
    ("regime", 3),
    ("triadic_table_path", 7),
])
def test_from_dict_rejects_wrong_types(key, value):
    with pytest.raises(ConfigError) as err:
        SimConfig.from_dict({key: value})
    assert err.value.field == key


def test_from_dict_coercions_and_optionals():
    cfg = SimConfig.from_dict({
        "endowment": 25,                 # int promoted to float
        "piece_lifespan": None,
        "signed_network_path": None,
        "triadic_table_path": "tables/custom.csv",
    })
    assert cfg.endowment == 25.0 and isinstance(cfg.endowment, float)
    assert cfg.piece_lifespan is None
    assert cfg.triadic_table_path == "tables/custom.csv"


def test_json_round_trip(tmp_path):
    cfg = SimConfig(n_agents=8, gossip_mechanism="triadic", seed=99)
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    assert SimConfig.from_json(path) == cfg
    # canonical serialization: keys sorted, no whitespace
    assert cfg.to_json() == json.dumps(cfg.to_dict(), sort_keys=True,
                                       separators=(",", ":"))


def test_from_json_errors(tmp_path):
    with pytest.raises(ConfigError):
        SimConfig.from_json(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        SimConfig.from_json(bad)


def test_with_overrides():
    base = SimConfig()
    changed = base.with_overrides(seed=5, regime="dynamic")
    assert changed.seed == 5 and changed.regime == "dynamic"
    assert base.seed == 1  # frozen original untouched
    with pytest.raises(ConfigError):
        base.with_overrides(regim="dynamic")
