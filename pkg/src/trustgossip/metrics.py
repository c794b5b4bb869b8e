"""Outcome indicators.

The headline indicator of a run is the relative difference: the gap
between mean cooperator and mean defector resources scaled by the
population standard deviation of all final resources.  Cooperators
"win" a run when their mean strictly exceeds the defectors'.  Runs in
which everyone ends with identical resources are flagged degenerate and
score a relative difference of zero.

Aggregation pools many runs into per-condition rows (win rates, means)
with a stable column order so repeated sweeps emit identical files.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .config import SimConfig
from .core import AgentState, AgentType

AGGREGATE_STAT_COLUMNS = [
    "runs",
    "c_win_rate",
    "mean_relative_difference",
    "sd_relative_difference",
    "mean_total_resources",
    "mean_absolute_difference",
]


@dataclass(frozen=True)
class RoundStats:
    """Per-round trace entry."""

    round: int
    phase: str  # "burnin" or "main"
    cooperations: int
    total_resources: float
    mean_cooperator_resources: float | None
    mean_defector_resources: float | None
    gossip_pieces: int
    gossip_transmissions: int
    gossip_declines: int
    tie_changes: int
    isolate_repairs: int


@dataclass(frozen=True)
class RunRecord:
    """Complete, JSON-stable summary of one simulation run."""

    config: dict[str, Any]
    agent_types: list[str]
    final_resources: list[float]
    mean_c: float | None
    mean_d: float | None
    mean_all: float
    sd_all: float
    relative_difference: float | None
    absolute_difference: float | None
    c_win: bool | None
    degenerate: bool
    total_resources: float
    trustor_cooperations: int
    burnin_cooperations: int
    gossip_transmissions: int
    gossip_declines: int
    tie_changes_total: int
    rounds: list[RoundStats] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["rounds"] = [asdict(r) for r in self.rounds]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        payload = dict(data)
        payload["rounds"] = [RoundStats(**r) for r in data.get("rounds", [])]
        return cls(**payload)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        return cls.from_dict(json.loads(line))


def summarize(agents: Sequence[AgentState], config: SimConfig,
              rounds: Sequence[RoundStats]) -> RunRecord:
    """Reduce final agent state plus the round trace to a RunRecord.

    Group comparison fields are None for single-type populations.  The
    standard deviation is the population (not sample) deviation.
    """
    res = np.array([a.resources for a in agents], dtype=np.float64)
    types = [a.agent_type.value for a in agents]
    c_mask = np.array([a.agent_type is AgentType.COOPERATOR for a in agents])
    d_mask = ~c_mask
    mean_all = float(res.mean())
    sd_all = float(res.std())
    total = float(res.sum())
    degenerate = sd_all == 0.0
    if c_mask.any() and d_mask.any():
        mean_c = float(res[c_mask].mean())
        mean_d = float(res[d_mask].mean())
        absolute = abs(mean_c - mean_d)
        relative = 0.0 if degenerate else (mean_c - mean_d) / sd_all
        c_win: bool | None = bool(mean_c > mean_d)
    else:
        mean_c = float(res[c_mask].mean()) if c_mask.any() else None
        mean_d = float(res[d_mask].mean()) if d_mask.any() else None
        absolute = None
        relative = None
        c_win = None
    return RunRecord(
        config=config.to_dict(),
        agent_types=types,
        final_resources=[float(r) for r in res],
        mean_c=mean_c,
        mean_d=mean_d,
        mean_all=mean_all,
        sd_all=sd_all,
        relative_difference=relative,
        absolute_difference=absolute,
        c_win=c_win,
        degenerate=degenerate,
        total_resources=total,
        trustor_cooperations=sum(r.cooperations for r in rounds if r.phase == "main"),
        burnin_cooperations=sum(r.cooperations for r in rounds if r.phase == "burnin"),
        gossip_transmissions=sum(r.gossip_transmissions for r in rounds),
        gossip_declines=sum(r.gossip_declines for r in rounds),
        tie_changes_total=sum(r.tie_changes for r in rounds),
        rounds=list(rounds),
    )


def aggregate(records: Iterable[RunRecord], group_by: Sequence[str]
              ) -> tuple[list[str], list[list[Any]]]:
    """Pool records into per-condition summary rows.

    Rows are keyed by the requested config fields and sorted by key, so
    output order does not depend on input order.  The C-win rate counts
    wins over all runs of the group; relative/absolute difference means
    skip runs where the comparison is undefined (single-type
    populations).
    """
    group_by = list(group_by)
    groups: dict[tuple, list[RunRecord]] = {}
    sizes = set()
    for rec in records:
        key = tuple(rec.config.get(fname) for fname in group_by)
        groups.setdefault(key, []).append(rec)
        sizes.add(rec.config.get("n_agents"))
    if len(sizes) > 1:
        warnings.warn(
            f"aggregating runs with mixed population sizes: {sorted(sizes)}",
            stacklevel=2,
        )
    header = group_by + AGGREGATE_STAT_COLUMNS
    rows: list[list[Any]] = []
    for key in sorted(groups, key=lambda k: tuple(repr(v) for v in k)):
        recs = groups[key]
        rel = [r.relative_difference for r in recs if r.relative_difference is not None]
        absd = [r.absolute_difference for r in recs if r.absolute_difference is not None]
        wins = sum(1 for r in recs if r.c_win is True)
        rel_arr = np.array(rel, dtype=np.float64)
        row = list(key) + [
            len(recs),
            wins / len(recs),
            float(rel_arr.mean()) if rel else None,
            float(rel_arr.std()) if rel else None,
            float(np.mean([r.total_resources for r in recs])),
            float(np.mean(absd)) if absd else None,
        ]
        rows.append(row)
    return header, rows
