"""Partner selection regimes and dynamic-network rewiring.

A round plan assigns every agent exactly one outing as trustor.  In the
well-mixed regime trustees are drawn uniformly from everyone else; in
the networked regimes the trustor plays a uniformly chosen neighbor
with high probability and ventures to a uniformly chosen non-neighbor
otherwise.

The dynamic regime rewires the game network after each round: agents
drop the neighbor they privately think worst of (when a worst one is
distinguishable) and reach out to the agent with the best gossip-derived
standing they are not yet connected to (when a best one is
distinguishable).  Anyone left isolated gets one random link back so
the next round plan stays well-defined.
"""
from __future__ import annotations

import numpy as np

from .config import ConfigError
from .core import GameNetwork, RngStream

RoundPlan = list[tuple[int, int]]


def plan_round_wellmixed(n: int, rng: RngStream) -> RoundPlan:
    """Every agent trusts once; trustees drawn uniformly among the others."""
    if n < 2:
        raise ValueError("need at least 2 agents to plan a round")
    draws = rng.integer_vector(n - 1, n)
    ids = np.arange(n)
    trustees = draws + (draws >= ids)  # skip self while staying uniform
    return [(int(i), int(t)) for i, t in zip(ids, trustees)]


def generate_game_network(n: int, min_degree: int, rng: RngStream) -> GameNetwork:
    """Random game network in which every agent drew min_degree distinct
    partners; coincident draws merge, so degrees can exceed min_degree."""
    if not 1 <= min_degree <= n - 1:
        raise ConfigError("min_degree", f"must lie in [1, {n - 1}]")
    net = GameNetwork(n)
    for i in range(n):
        picks = rng.sample_without_replacement(n - 1, min_degree)
        for p in picks:
            j = int(p)
            if j >= i:
                j += 1
            net.add_edge(i, j)
    return net


def plan_round_network(net: GameNetwork, neighbor_play_prob: float,
                       rng: RngStream) -> RoundPlan:
    """Networked round plan.

    With probability neighbor_play_prob the trustee is a uniform
    neighbor, otherwise a uniform non-neighbor; agents connected to
    everyone always play a neighbor.  Requires degree >= 1 everywhere.
    """
    n = net.n
    branch = rng.uniforms(n)
    pick = rng.uniforms(n)
    plan: RoundPlan = []
    for i in range(n):
        nbrs = net.neighbors[i]
        if not nbrs:
            raise ValueError(f"agent {i} is isolated in the game network")
        outside = n - 1 - len(nbrs)
        if outside == 0 or branch[i] < neighbor_play_prob:
            j = nbrs[int(pick[i] * len(nbrs))]
        else:
            mask = np.ones(n, dtype=bool)
            mask[nbrs] = False
            mask[i] = False
            outsiders = np.flatnonzero(mask)
            j = int(outsiders[int(pick[i] * outside)])
        plan.append((i, j))
    return plan


def rewire_dynamic(net: GameNetwork, image: np.ndarray, reputation: np.ndarray,
                   rng: RngStream) -> tuple[int, int]:
    """One rewiring pass over all agents in seeded random order.

    Each agent may drop one tie (its lowest-image neighbor, skipped
    when all neighbor images are equal and no worst one stands out)
    and add one tie to the best-reputed agent it has heard of but is
    not yet connected to (candidates are non-neighbors with a nonzero
    reputation entry; no news, no new ties).  Arg ties break toward
    the lowest id.  Returns (tie_changes, isolate_repairs) where
    tie_changes counts drops plus adds, bounded by 2n, and repairs
    counts the random links given to agents left with no neighbors.
    """
    n = net.n
    changes = 0
    for raw in rng.permutation(n):
        i = int(raw)
        nbrs = net.neighbors[i]
        if nbrs:
            vals = image[i, nbrs]
            lo = float(vals.min())
            if float(vals.max()) > lo:
                worst = nbrs[int(np.argmin(vals))]
                net.remove_edge(i, worst)
                changes += 1
        mask = np.ones(n, dtype=bool)
        mask[i] = False
        if net.neighbors[i]:
            mask[net.neighbors[i]] = False
        mask &= reputation[i] != 0.0
        if mask.any():
            candidates = np.flatnonzero(mask)
            best = int(candidates[int(np.argmax(reputation[i, candidates]))])
            net.add_edge(i, best)
            changes += 1
    repairs = 0
    for i in range(n):
        if net.degree(i) == 0:
            j = rng.integers(n - 1)
            if j >= i:
                j += 1
            net.add_edge(i, j)
            repairs += 1
    return changes, repairs
