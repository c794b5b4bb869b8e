#!/usr/bin/env python3
"""Summarize a runs.jsonl file into the headline comparison indicators.

Prints, per gossip mechanism and per interaction regime: run counts,
cooperator win rate, and the mean relative difference (cooperator mean
minus defector mean, scaled by the population SD of final resources),
plus the threshold response curve.  Reads the file one line at a time,
so arbitrarily large sweeps are fine.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from collections import defaultdict
from pathlib import Path


class Cell:
    __slots__ = ("n", "wins", "s", "ss", "total")

    def __init__(self) -> None:
        self.n = 0
        self.wins = 0
        self.s = 0.0
        self.ss = 0.0
        self.total = 0.0

    def add(self, rel: float, win: bool, total: float) -> None:
        self.n += 1
        self.wins += bool(win)
        self.s += rel
        self.ss += rel * rel
        self.total += total

    @property
    def mean(self) -> float:
        return self.s / self.n

    @property
    def se(self) -> float:
        var = self.ss / self.n - self.mean ** 2
        return math.sqrt(max(var, 0.0) / self.n)


def print_block(title: str, cells: dict[str, Cell]) -> None:
    print(f"\n{title}")
    print(f"  {'group':<12} {'runs':>7} {'c-win':>7} {'rel diff':>10} {'+/- se':>8} {'mean total':>11}")
    try:
        ordered = sorted(cells.items())
    except TypeError:
        ordered = sorted(cells.items(), key=lambda kv: str(kv[0]))
    for key, cell in ordered:
        print(f"  {key!s:<12} {cell.n:>7} {cell.wins / cell.n:>7.3f} "
              f"{cell.mean:>+10.4f} {cell.se:>8.4f} {cell.total / cell.n:>11.2f}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("runs", type=Path, help="runs.jsonl from a sweep")
    args = parser.parse_args()
    if not args.runs.exists():
        print(f"error: {args.runs} not found", file=sys.stderr)
        return 2

    by_mechanism: dict[str, Cell] = defaultdict(Cell)
    by_regime: dict[str, Cell] = defaultdict(Cell)
    by_threshold: dict[float, Cell] = defaultdict(Cell)
    skipped = 0
    with args.runs.open() as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            rel = rec["relative_difference"]
            if rel is None:
                skipped += 1
                continue
            row = (rel, rec["c_win"] is True, rec["total_resources"])
            cfg = rec["config"]
            by_mechanism[cfg["gossip_mechanism"]].add(*row)
            by_regime[cfg["regime"]].add(*row)
            by_threshold[cfg["cooperation_threshold"]].add(*row)

    if not by_mechanism:
        print("error: no comparable runs in the file", file=sys.stderr)
        return 2
    print_block("by gossip mechanism", by_mechanism)
    print_block("by interaction regime", by_regime)
    print_block("by cooperation threshold", by_threshold)
    if skipped:
        print(f"\n({skipped} single-type runs skipped: no group comparison defined)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
