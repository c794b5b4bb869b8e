import json

import pytest

from trustgossip.config import ConfigError, SimConfig
from trustgossip.core import AgentState, AgentType, GameNetwork, RngStream, SignedNetwork
from trustgossip.io_data import (NetworkFormatError, describe_formats,
                                 generate_signed_network, load_signed_network,
                                 read_run_records, write_aggregate_csv,
                                 write_failures, write_game_network,
                                 write_results, write_run_records,
                                 write_signed_network)
from trustgossip.metrics import summarize


def edge_file(tmp_path, body, name="net.csv"):
    path = tmp_path / name
    path.write_text("a,b,sign\n" + body)
    return path


# -- signed network loading -----------------------------------------------------


def test_load_maps_labels_in_first_appearance_order(tmp_path):
    path = edge_file(tmp_path, "beta,alpha,+1\ngamma,alpha,-1\n")
    net = load_signed_network(path)
    assert net.labels == ["beta", "alpha", "gamma"]
    assert list(net.edges()) == [(0, 1, 1), (1, 2, -1)]


def test_load_skips_comments_and_blank_lines(tmp_path):
    path = tmp_path / "net.csv"
    path.write_text("# friendship survey\n\na,b,sign\nx,y,+1\n\n# note\nz,x,-1\n")
    assert list(load_signed_network(path).edges()) == [(0, 1, 1), (0, 2, -1)]


def test_load_collapses_same_sign_duplicates(tmp_path):
    path = edge_file(tmp_path, "x,y,+1\ny,x,+1\ny,z,-1\n")
    assert list(load_signed_network(path).edges()) == [(0, 1, 1), (1, 2, -1)]


@pytest.mark.parametrize("body, fragment", [
    ("x,x,+1\n", ":2: self-loop"),
    ("x,y,2\n", ":2: sign must be +1 or -1"),
    ("x,y\n", ":2: expected 3 columns"),
    (",y,+1\n", ":2: empty node label"),
    ("x,y,+1\nz,x,+1\ny,x,-1\n", ":4: "),   # conflicting duplicate
])
def test_load_rejects_bad_edges(tmp_path, body, fragment):
    path = edge_file(tmp_path, body)
    with pytest.raises(NetworkFormatError) as err:
        load_signed_network(path)
    assert fragment in str(err.value)


def test_load_rejects_bad_header(tmp_path):
    path = tmp_path / "net.csv"
    path.write_text("source,target,weight\nx,y,+1\n")
    with pytest.raises(NetworkFormatError, match="header must be a,b,sign"):
        load_signed_network(path)


def test_load_missing_and_empty_files(tmp_path):
    with pytest.raises(NetworkFormatError, match="not found"):
        load_signed_network(tmp_path / "absent.csv")
    empty = tmp_path / "net.csv"
    empty.write_text("# nothing here\n")
    with pytest.raises(NetworkFormatError, match="empty file"):
        load_signed_network(empty)


def test_load_warns_on_isolates(tmp_path):
    path = edge_file(tmp_path, "x,y,+1\n")
    mapping = tmp_path / "net.nodes.csv"
    mapping.write_text("id,label\n0,x\n1,y\n2,z\n")
    with pytest.warns(UserWarning, match="isolated nodes: z"):
        net = load_signed_network(path)
    assert net.n == 3
    assert net.isolates() == [2]


@pytest.mark.parametrize("mapping_body, fragment", [
    ("id,name\n0,x\n", "header must be id,label"),
    ("id,label\n0,x\n2,y\n", "dense and ordered"),
    ("id,label\nzero,x\n", "id must be an integer"),
    ("id,label\n0,x\n1,x\n", "duplicate label"),
    ("id,label\n0,x\n1,y,extra\n", "expected 2 columns"),
])
def test_load_rejects_bad_mapping(tmp_path, mapping_body, fragment):
    edge_file(tmp_path, "x,y,+1\n")
    (tmp_path / "net.nodes.csv").write_text(mapping_body)
    with pytest.raises(NetworkFormatError) as err:
        load_signed_network(tmp_path / "net.csv")
    assert fragment in str(err.value)


def test_load_rejects_label_missing_from_mapping(tmp_path):
    edge_file(tmp_path, "x,q,+1\n")
    (tmp_path / "net.nodes.csv").write_text("id,label\n0,x\n1,y\n2,w\n")
    with pytest.raises(NetworkFormatError, match="'q' not in the mapping file"):
        load_signed_network(tmp_path / "net.csv")


def test_signed_round_trip_preserves_isolates(tmp_path):
    net = SignedNetwork(4, labels=["w", "x", "y", "z"])
    net.add_edge(0, 2, 1)
    net.add_edge(2, 3, -1)
    path = tmp_path / "saved.csv"
    write_signed_network(net, path)
    assert (tmp_path / "saved.nodes.csv").exists()
    with pytest.warns(UserWarning, match="isolated nodes: x"):
        loaded = load_signed_network(path)
    assert loaded.labels == net.labels
    assert list(loaded.edges()) == list(net.edges())
    assert loaded.isolates() == [1]


# -- synthetic generation ---------------------------------------------------------


def test_generate_signed_network_is_seed_deterministic():
    a = generate_signed_network(12, 0.3, 0.1, RngStream(5))
    b = generate_signed_network(12, 0.3, 0.1, RngStream(5))
    c = generate_signed_network(12, 0.3, 0.1, RngStream(6))
    assert list(a.edges()) == list(b.edges())
    assert list(a.edges()) != list(c.edges())


def test_generate_signed_network_hits_requested_densities():
    n = 120
    pairs = n * (n - 1) / 2
    net = generate_signed_network(n, 0.25, 0.25, RngStream(9))
    pos = sum(1 for _, _, s in net.edges() if s > 0)
    neg = sum(1 for _, _, s in net.edges() if s < 0)
    # 4 sigma of a Binomial(7140, 0.25)
    assert abs(pos - pairs * 0.25) < 150
    assert abs(neg - pairs * 0.25) < 150


def test_generate_signed_network_rejects_bad_densities():
    with pytest.raises(ConfigError) as err:
        generate_signed_network(8, -0.1, 0.1, RngStream(1))
    assert err.value.field == "positive_density"
    with pytest.raises(ConfigError) as err:
        generate_signed_network(8, 0.7, 0.4, RngStream(1))
    assert err.value.field == "positive_density"
    with pytest.raises(ConfigError) as err:
        generate_signed_network(8, 0.1, -0.1, RngStream(1))
    assert err.value.field == "negative_density"


# -- result writers ---------------------------------------------------------------


def sample_record(seed=1):
    agents = [AgentState(0, AgentType.COOPERATOR, 30.0),
              AgentState(1, AgentType.DEFECTOR, 10.0),
              AgentState(2, AgentType.COOPERATOR, 20.0)]
    return summarize(agents, SimConfig(seed=seed), [])


def test_run_records_round_trip(tmp_path):
    records = [sample_record(1), sample_record(2)]
    path = tmp_path / "runs.jsonl"
    write_run_records(records, path)
    assert read_run_records(path) == records
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert all(json.loads(line)["config"]["n_agents"] == 16 for line in lines)


def test_aggregate_csv_blanks_none_and_survives_empty(tmp_path):
    path = tmp_path / "agg.csv"
    write_aggregate_csv(["regime", "runs", "mean_relative_difference"],
                        [["static", 2, None]], path)
    assert path.read_text() == ("regime,runs,mean_relative_difference\n"
                                "static,2,\n")
    write_aggregate_csv(["regime"], [], path)
    assert path.read_text() == "regime\n"


def test_write_results_bundle(tmp_path):
    paths = write_results([sample_record()], tmp_path / "out",
                          group_by=["gossip_mechanism"])
    assert paths["runs"].name == "runs.jsonl"
    header = paths["aggregate"].read_text().splitlines()[0]
    assert header.startswith("gossip_mechanism,runs,c_win_rate")
    assert read_run_records(paths["runs"]) == [sample_record()]


def test_write_failures(tmp_path):
    path = tmp_path / "failures.jsonl"
    write_failures([{"condition": {"multiplier": 0.5}, "error": "boom"}], path)
    assert json.loads(path.read_text()) == {
        "condition": {"multiplier": 0.5}, "error": "boom"}


def test_write_game_network(tmp_path):
    net = GameNetwork(4)
    net.add_edge(2, 0)
    net.add_edge(1, 3)
    path = tmp_path / "game.csv"
    write_game_network(net, path)
    assert path.read_text() == "a,b\n0,2\n1,3\n"


def test_writers_leave_no_temp_files(tmp_path):
    net = SignedNetwork(3, labels=["x", "y", "z"])
    net.add_edge(0, 1, 1)
    write_signed_network(net, tmp_path / "net.csv")
    write_run_records([sample_record()], tmp_path / "runs.jsonl")
    write_aggregate_csv(["a"], [], tmp_path / "agg.csv")
    assert list(tmp_path.glob("*.tmp")) == []


def test_describe_formats_covers_every_artifact():
    text = describe_formats()
    for fragment in ["a,b,sign", "sr_sign,st_rel,rt_rel,valence,transmit",
                     "grid JSON", "runs JSONL", "aggregate CSV", "id,label"]:
        assert fragment in text
