"""Command-line interface.

Subcommands: run (one simulation, RunRecord JSON on stdout), sweep
(grid execution into runs.jsonl/aggregate.csv), gen-network (synthetic
signed network CSV), validate-table (triadic table check).  Exit codes:
0 success, 1 sweep with failed runs, 2 configuration/input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, SimConfig
from .core import RngStream
from .gossip import (TriadicTableError, default_table_text, load_triadic_table,
                     table_configurations)
from .io_data import (NetworkFormatError, describe_formats, generate_signed_network,
                      write_failures, write_game_network, write_results,
                      write_signed_network)
from .metrics import aggregate
from .scheduler import run_simulation
from .sweep import default_grid, load_grid, print_progress, run_sweep


def _default_table_checksum() -> str:
    return hashlib.sha256(default_table_text().encode("utf-8")).hexdigest()


def _version_string() -> str:
    return f"trustgossip {__version__} (default triadic table sha256 {_default_table_checksum()[:16]})"


def _parse_set(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(pair, "overrides must look like key=value")
        key, raw = pair.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        overrides[key.strip()] = value
    return overrides


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustgossip",
        description="Reputation-mediated Trust Games with gossip on signed networks",
    )
    parser.add_argument("--version", action="version", version=_version_string())
    parser.add_argument("--describe-formats", action="store_true",
                        help="print the file format reference and exit")
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="execute one simulation")
    p_run.add_argument("--config", type=Path, help="SimConfig JSON file")
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field (repeatable)")
    p_run.add_argument("--seed", type=int, help="override the seed")
    p_run.add_argument("--allow-degenerate", action="store_true",
                       help="permit single-type populations (control runs)")
    p_run.add_argument("--snapshots", type=Path,
                       help="write a per-round JSONL trace to this path")
    p_run.add_argument("--snapshot-networks", type=Path, metavar="DIR",
                       help="write per-round game-network CSVs into DIR")

    p_sweep = sub.add_parser("sweep", help="run a parameter grid")
    p_sweep.add_argument("--grid", type=Path, required=True,
                         help="grid JSON file ('default' for the built-in grid)")
    p_sweep.add_argument("--config", type=Path, help="base SimConfig JSON file")
    p_sweep.add_argument("--replicates", type=int, default=1)
    p_sweep.add_argument("--master-seed", type=int, default=0)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--out", type=Path, required=True, metavar="DIR")

    p_gen = sub.add_parser("gen-network", help="generate a synthetic signed network")
    p_gen.add_argument("-n", "--nodes", type=int, required=True)
    p_gen.add_argument("--pos", type=float, default=0.3, help="positive tie density")
    p_gen.add_argument("--neg", type=float, default=0.1, help="negative tie density")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--out", type=Path, required=True)

    p_val = sub.add_parser("validate-table", help="check a triadic table CSV")
    p_val.add_argument("table", type=Path)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.describe_formats:
        print(describe_formats())
        return 0
    if args.command is None:
        parser.print_help()
        return 2
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "gen-network":
            return _cmd_gen_network(args)
        if args.command == "validate-table":
            return _cmd_validate_table(args)
    except (ConfigError, NetworkFormatError, TriadicTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError(f"unhandled command {args.command}")


def _load_config(args) -> SimConfig:
    config = SimConfig.from_json(args.config) if args.config else SimConfig()
    overrides = _parse_set(args.set)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        config = SimConfig.from_dict({**config.to_dict(), **overrides})
    return config


def _cmd_run(args) -> int:
    config = _load_config(args)
    config.validate(allow_degenerate=args.allow_degenerate)

    probe = None
    net_dir: Path | None = args.snapshot_networks
    if net_dir is not None:
        net_dir.mkdir(parents=True, exist_ok=True)

        def probe(event, state):  # noqa: ANN001 - local callback
            if event == "round_end" and state.game_net is not None:
                write_game_network(
                    state.game_net,
                    net_dir / f"game_network_round_{state.clock.round - 1:04d}.csv",
                )

    record = run_simulation(config, probe=probe)
    if args.snapshots:
        lines = []
        for r in record.rounds:
            lines.append(json.dumps({
                "round": r.round,
                "phase": r.phase,
                "cooperations": r.cooperations,
                "total_resources": r.total_resources,
                "tie_changes": r.tie_changes,
                "gossip_transmissions": r.gossip_transmissions,
            }, sort_keys=True, separators=(",", ":")))
        args.snapshots.parent.mkdir(parents=True, exist_ok=True)
        tmp = args.snapshots.with_name(args.snapshots.name + ".tmp")
        tmp.write_text("".join(line + "\n" for line in lines))
        tmp.replace(args.snapshots)
    print(record.to_json())
    return 0


def _cmd_sweep(args) -> int:
    grid = default_grid() if str(args.grid) == "default" else load_grid(args.grid)
    base = SimConfig.from_json(args.config) if args.config else SimConfig()
    result = run_sweep(grid, base=base, replicates=args.replicates,
                       master_seed=args.master_seed, workers=args.workers,
                       progress=print_progress)
    paths = write_results(result.records, args.out, group_by=result.group_by)
    write_failures(result.failures, Path(args.out) / "failures.jsonl")
    print(f"{len(result.records)} runs -> {paths['runs']}")
    print(f"aggregate -> {paths['aggregate']}")
    if result.failures:
        print(f"{len(result.failures)} runs FAILED (see failures.jsonl)", file=sys.stderr)
        return 1
    return 0


def _cmd_gen_network(args) -> int:
    rng = RngStream(args.seed, "gen-network")
    net = generate_signed_network(args.nodes, args.pos, args.neg, rng)
    write_signed_network(net, args.out)
    signs = [s for _, _, s in net.edges()]
    isolates = net.isolates()
    print(f"wrote {net.edge_count()} edges ({sum(1 for s in signs if s > 0)} positive, "
          f"{sum(1 for s in signs if s < 0)} negative) over {net.n} nodes to {args.out}")
    if isolates:
        print(f"warning: {len(isolates)} isolated node(s): "
              f"{', '.join(net.labels[i] for i in isolates[:8])}", file=sys.stderr)
    return 0


def _cmd_validate_table(args) -> int:
    table = load_triadic_table(args.table)
    n = len(table_configurations())
    print(f"{n}/{n} configurations covered")
    digest = hashlib.sha256(Path(args.table).read_bytes()).hexdigest()
    print(f"sha256 {digest[:16]}")
    warnings = _lint_table(table)
    for line in warnings:
        print(f"warning: {line}")
    return 0


def _lint_table(table) -> list[str]:
    out = []
    for (sr, st, rt, valence), transmit in sorted(table.rules.items(), reverse=True):
        if not transmit:
            continue
        if valence == "negative" and rt == 1:
            out.append(
                f"negative gossip sent to a friend of the target "
                f"(sr={sr:+d}, st={st:+d}, rt={rt:+d}); most accounts expect "
                "that friendship to inhibit transmission"
            )
        if sr == -1 and not (st == -1 and rt == -1):
            out.append(
                f"transmission across a hostile sender-receiver tie outside the "
                f"common-enemy case (st={st:+d}, rt={rt:+d}, valence={valence})"
            )
    return out


if __name__ == "__main__":
    raise SystemExit(main())
