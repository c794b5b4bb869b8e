"""Deterministic parameter sweeps.

A grid file maps config fields to value lists; the sweep runs the
Cartesian product (in file order) with R replicates per condition.
Every run's seed is a 64-bit hash of (master seed, condition content,
replicate index), so extending a grid with new values later leaves the
seeds of already-covered conditions untouched.

Execution may fan out over worker processes; records are collected and
written in condition order, so the output is byte-identical whatever
the worker count.  A failing run is recorded and skipped rather than
aborting the sweep.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .config import ConfigError, SimConfig
from .metrics import RunRecord
from .scheduler import run_simulation


def default_grid() -> dict[str, list[Any]]:
    """The packaged comparison grid: mechanisms x regimes x rules x
    thresholds x defector fractions at the default society size."""
    text = resources.files("trustgossip").joinpath("data/default_grid.json").read_text()
    return json.loads(text)


def load_grid(path: str | Path) -> dict[str, list[Any]]:
    try:
        payload = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError("<grid>", f"grid file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("<grid>", f"invalid JSON: {exc}")
    return validate_grid(payload)


def validate_grid(grid: Any) -> dict[str, list[Any]]:
    if not isinstance(grid, dict) or not grid:
        raise ConfigError("<grid>", "grid must be a non-empty JSON object")
    field_names = set(SimConfig.__dataclass_fields__)
    for key, values in grid.items():
        if key not in field_names:
            raise ConfigError(key, "unknown configuration key in grid")
        if key == "seed":
            raise ConfigError("seed", "seeds are derived per run; do not sweep them")
        if not isinstance(values, list) or not values:
            raise ConfigError(key, "grid values must be a non-empty list")
    return grid


def expand_grid(grid: dict[str, list[Any]]) -> list[dict[str, Any]]:
    """Conditions in deterministic (file-order) Cartesian-product order."""
    validate_grid(grid)
    names = list(grid)
    out = []
    for combo in itertools.product(*(grid[name] for name in names)):
        out.append(dict(zip(names, combo)))
    return out


def derive_seed(master_seed: int, condition: dict[str, Any], replicate: int) -> int:
    """Stable 64-bit seed from run coordinates.

    Hashing the condition content (canonical JSON) rather than its index
    keeps existing runs reproducible when a grid grows.
    """
    payload = json.dumps([master_seed, condition, replicate],
                         sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass
class SweepResult:
    records: list[RunRecord] = field(default_factory=list)
    failures: list[dict[str, Any]] = field(default_factory=list)
    conditions: list[dict[str, Any]] = field(default_factory=list)
    group_by: list[str] = field(default_factory=list)


def _run_spec(spec: tuple[int, int, dict[str, Any]]) -> tuple[int, int, bool, Any]:
    cond_idx, replicate, cfg_dict = spec
    try:
        record = run_simulation(SimConfig.from_dict(cfg_dict))
        return cond_idx, replicate, True, record.to_dict()
    except Exception as exc:  # recorded, not raised: one bad cell must not kill a sweep
        return cond_idx, replicate, False, f"{type(exc).__name__}: {exc}"


def run_sweep(grid: dict[str, list[Any]], base: SimConfig | None = None,
              replicates: int = 1, master_seed: int = 0, workers: int = 1,
              progress: Callable[[int, int], None] | None = None) -> SweepResult:
    """Execute the full grid; deterministic for fixed inputs."""
    if replicates < 1:
        raise ConfigError("replicates", "must be at least 1")
    if workers < 1:
        raise ConfigError("workers", "must be at least 1")
    base = base if base is not None else SimConfig()
    conditions = expand_grid(grid)
    specs: list[tuple[int, int, dict[str, Any]]] = []
    for cond_idx, condition in enumerate(conditions):
        for rep in range(replicates):
            seed = derive_seed(master_seed, condition, rep)
            cfg = base.with_overrides(**condition, seed=seed)
            specs.append((cond_idx, rep, cfg.to_dict()))

    results: dict[tuple[int, int], tuple[bool, Any]] = {}
    done = 0
    if workers == 1:
        for spec in specs:
            cond_idx, rep, ok, payload = _run_spec(spec)
            results[(cond_idx, rep)] = (ok, payload)
            done += 1
            if progress:
                progress(done, len(specs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for cond_idx, rep, ok, payload in pool.map(_run_spec, specs, chunksize=8):
                results[(cond_idx, rep)] = (ok, payload)
                done += 1
                if progress:
                    progress(done, len(specs))

    out = SweepResult(conditions=conditions, group_by=list(grid))
    for cond_idx, condition in enumerate(conditions):
        for rep in range(replicates):
            ok, payload = results[(cond_idx, rep)]
            if ok:
                out.records.append(RunRecord.from_dict(payload))
            else:
                out.failures.append({
                    "condition_index": cond_idx,
                    "replicate": rep,
                    "condition": condition,
                    "seed": derive_seed(master_seed, condition, rep),
                    "error": payload,
                })
    return out


def print_progress(done: int, total: int, stream=sys.stderr) -> None:
    tick = max(1, total // 20)
    if done % tick == 0 or done == total:
        print(f"  {done}/{total} runs finished", file=stream)
