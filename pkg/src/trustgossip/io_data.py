"""File formats and writers.

Signed networks travel as CSV edge lists (columns ``a,b,sign`` with
sign +1 or -1).  Node labels are arbitrary strings; they map to dense
integer ids in order of first appearance, and that mapping is persisted
to an adjacent ``<name>.nodes.csv`` file so results can be joined back
to the original labels.  When the mapping file is present the loader
uses it as the authoritative node universe, which round-trips networks
containing isolated nodes.

All writers are atomic (temp file + rename) and timestamp-free, so a
rerun with identical inputs produces byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import os
import warnings
from pathlib import Path
from typing import Any, Iterable, Sequence

from .config import ConfigError
from .core import GameNetwork, RngStream, SignedNetwork
from .metrics import RunRecord

_SIGN_TOKENS = {"+1": 1, "-1": -1}


class NetworkFormatError(ValueError):
    pass


def _mapping_path(path: Path) -> Path:
    return path.with_name(path.stem + ".nodes" + (path.suffix or ".csv"))


def load_signed_network(path: str | Path) -> SignedNetwork:
    """Parse a signed edge-list CSV.

    Errors carry line numbers.  Conflicting duplicate pairs are
    rejected; repeated rows with the same sign collapse silently.
    """
    p = Path(path)
    if not p.exists():
        raise NetworkFormatError(f"network file not found: {p}")
    labels: list[str] = []
    index: dict[str, int] = {}
    mapping = _mapping_path(p)
    if mapping.exists():
        for lineno, row in _read_csv_rows(mapping):
            if lineno == 1:
                if [c.strip() for c in row] != ["id", "label"]:
                    raise NetworkFormatError(f"{mapping}:1: header must be id,label")
                continue
            if len(row) != 2:
                raise NetworkFormatError(f"{mapping}:{lineno}: expected 2 columns")
            try:
                node_id = int(row[0])
            except ValueError:
                raise NetworkFormatError(f"{mapping}:{lineno}: id must be an integer")
            if node_id != len(labels):
                raise NetworkFormatError(
                    f"{mapping}:{lineno}: ids must be dense and ordered from 0"
                )
            label = row[1]
            if label in index:
                raise NetworkFormatError(f"{mapping}:{lineno}: duplicate label {label!r}")
            index[label] = node_id
            labels.append(label)

    edges: list[tuple[str, str, int, int]] = []
    saw_header = False
    for lineno, row in _read_csv_rows(p):
        if not saw_header:
            if [c.strip() for c in row] != ["a", "b", "sign"]:
                raise NetworkFormatError(f"{p}:{lineno}: header must be a,b,sign")
            saw_header = True
            continue
        if len(row) != 3:
            raise NetworkFormatError(f"{p}:{lineno}: expected 3 columns")
        a, b, sign_tok = (c.strip() for c in row)
        if not a or not b:
            raise NetworkFormatError(f"{p}:{lineno}: empty node label")
        if a == b:
            raise NetworkFormatError(f"{p}:{lineno}: self-loop on {a!r}")
        if sign_tok not in _SIGN_TOKENS:
            raise NetworkFormatError(f"{p}:{lineno}: sign must be +1 or -1, got {sign_tok!r}")
        edges.append((a, b, _SIGN_TOKENS[sign_tok], lineno))
    if not saw_header:
        raise NetworkFormatError(f"{p}: empty file")

    if not mapping.exists():
        for a, b, _sign, _lineno in edges:
            for label in (a, b):
                if label not in index:
                    index[label] = len(labels)
                    labels.append(label)
    try:
        net = SignedNetwork(len(labels), labels=labels)
    except ValueError as exc:
        raise NetworkFormatError(f"{p}: {exc}")
    for a, b, sign, lineno in edges:
        if a not in index or b not in index:
            missing = a if a not in index else b
            raise NetworkFormatError(
                f"{p}:{lineno}: node {missing!r} not in the mapping file"
            )
        try:
            net.add_edge(index[a], index[b], sign)
        except ValueError as exc:
            raise NetworkFormatError(f"{p}:{lineno}: {exc}")
    isolates = net.isolates()
    if isolates:
        names = ", ".join(net.labels[i] for i in isolates[:8])
        warnings.warn(f"signed network has isolated nodes: {names}", stacklevel=2)
    return net


def write_signed_network(net: SignedNetwork, path: str | Path) -> None:
    """Write edges plus the adjacent node-mapping file."""
    p = Path(path)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["a", "b", "sign"])
    for a, b, sign in net.edges():
        writer.writerow([net.labels[a], net.labels[b], "+1" if sign > 0 else "-1"])
    _atomic_write(p, out.getvalue())
    mapping = io.StringIO()
    writer = csv.writer(mapping, lineterminator="\n")
    writer.writerow(["id", "label"])
    for i, label in enumerate(net.labels):
        writer.writerow([i, label])
    _atomic_write(_mapping_path(p), mapping.getvalue())


def generate_signed_network(n: int, positive_density: float, negative_density: float,
                            rng: RngStream) -> SignedNetwork:
    """Independent-pair random signed network.

    Each unordered pair gets a positive tie with probability
    positive_density, a negative tie with probability negative_density,
    and no tie otherwise.  Connectivity is not guaranteed; isolates are
    reported through SignedNetwork.isolates().
    """
    if positive_density < 0:
        raise ConfigError("positive_density", "must be nonnegative")
    if negative_density < 0:
        raise ConfigError("negative_density", "must be nonnegative")
    if positive_density + negative_density > 1.0:
        raise ConfigError("positive_density",
                          "positive_density + negative_density must not exceed 1")
    net = SignedNetwork(n)
    n_pairs = n * (n - 1) // 2
    draws = rng.uniforms(n_pairs)
    idx = 0
    for a in range(n):
        for b in range(a + 1, n):
            u = draws[idx]
            idx += 1
            if u < positive_density:
                net.add_edge(a, b, 1)
            elif u < positive_density + negative_density:
                net.add_edge(a, b, -1)
    return net


def write_game_network(net: GameNetwork, path: str | Path) -> None:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["a", "b"])
    for a, b in net.edges():
        writer.writerow([a, b])
    _atomic_write(Path(path), out.getvalue())


# -- result writers ------------------------------------------------------------


def write_run_records(records: Iterable[RunRecord], path: str | Path) -> None:
    """One canonical-JSON record per line."""
    lines = [rec.to_json() for rec in records]
    _atomic_write(Path(path), "".join(line + "\n" for line in lines))


def read_run_records(path: str | Path) -> list[RunRecord]:
    text = Path(path).read_text()
    return [RunRecord.from_json(line) for line in text.splitlines() if line.strip()]


def write_aggregate_csv(header: Sequence[str], rows: Iterable[Sequence[Any]],
                        path: str | Path) -> None:
    """Write aggregate rows; an empty input still produces the header."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    _atomic_write(Path(path), out.getvalue())


def write_results(records: Sequence[RunRecord], out_dir: str | Path,
                  group_by: Sequence[str] = ()) -> dict[str, Path]:
    """Write runs.jsonl plus aggregate.csv under out_dir."""
    from .metrics import aggregate

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs_path = out / "runs.jsonl"
    agg_path = out / "aggregate.csv"
    write_run_records(records, runs_path)
    header, rows = aggregate(records, group_by)
    write_aggregate_csv(header, rows, agg_path)
    return {"runs": runs_path, "aggregate": agg_path}


def write_failures(failures: Sequence[dict[str, Any]], path: str | Path) -> None:
    lines = [json.dumps(f, sort_keys=True, separators=(",", ":")) for f in failures]
    _atomic_write(Path(path), "".join(line + "\n" for line in lines))


# -- plumbing -------------------------------------------------------------------


def _read_csv_rows(path: Path):
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            yield lineno, row


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def describe_formats() -> str:
    return """\
File formats
============

signed network CSV (gen-network output, signed_network_path input)
    Header ``a,b,sign``.  One undirected edge per row; a and b are
    arbitrary string labels, sign is +1 (friendly) or -1 (hostile).
    Self-loops and conflicting duplicate pairs are errors.  Labels map
    to dense integer ids in first-appearance order.  An adjacent
    ``<name>.nodes.csv`` file (header ``id,label``) persists that
    mapping; when present it defines the node universe, which preserves
    isolated nodes across a write/load round trip.

triadic table CSV (triadic_table_path input, validate-table input)
    Header ``sr_sign,st_rel,rt_rel,valence,transmit``.  Exactly 36 rows
    covering sender-receiver sign (+1/-1), sender-target and
    receiver-target relations (+1/-1/0 for none), valence
    (positive/negative), and transmit (yes/no).  Lines starting with
    ``#`` are comments.

config JSON (run --config input)
    One flat object of SimConfig fields.  Unknown keys are errors.

grid JSON (sweep --grid input)
    Object mapping config field names to lists of values.  The sweep
    runs the Cartesian product in file order, each condition with the
    requested number of replicates.

runs JSONL (sweep output, run stdout)
    One RunRecord per line: config echo, per-agent types and final
    resources, comparison indicators (mean_c, mean_d, sd_all,
    relative_difference, absolute_difference, c_win, degenerate),
    cooperation and gossip totals, and a per-round trace.

aggregate CSV (sweep output)
    One row per grid condition: the grouping fields, then runs,
    c_win_rate, mean_relative_difference, sd_relative_difference,
    mean_total_resources, mean_absolute_difference.

game network CSV (run --snapshot-networks output)
    Header ``a,b``; one undirected game-network edge per row, one file
    per round.
"""
