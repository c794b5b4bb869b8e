"""Core domain state.

Agents hold resources and a fixed behavioral type.  Two square matrices
carry social knowledge: the image matrix stores direct experience
(``image[i, j]`` is what i has personally learned about j) and the
reputation matrix stores gossip-derived standing (``reputation[i, j]``
is what i has heard about j).  Both are bounded to [-1, 1] and keep a
fixed zero diagonal that is never read.

Two graph types connect agents: an undirected signed network over which
gossip travels, and an unsigned game network restricting partner choice
in the networked interaction regimes.
"""
from __future__ import annotations

import hashlib
from bisect import insort
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from .config import SimConfig


class AgentType(str, Enum):
    COOPERATOR = "C"
    DEFECTOR = "D"


@dataclass
class AgentState:
    """Mutable per-agent state.

    forgiveness_remaining and kindness_remaining are the rule-3 leniency
    counters: cooperators hold a per-partner forgiveness allowance,
    defectors a single global kindness budget.  Both only ever decrease.
    """

    id: int
    agent_type: AgentType
    resources: float
    forgiveness_remaining: dict[int, int] = field(default_factory=dict)
    kindness_remaining: int = 0

    @property
    def is_defector(self) -> bool:
        return self.agent_type is AgentType.DEFECTOR


class RngStream:
    """Deterministic random stream identified by (seed, label).

    Two streams built from the same pair produce identical draw
    sequences; distinct labels decorrelate streams sharing a seed.
    """

    def __init__(self, seed: int, label: str = "run"):
        self.seed = int(seed)
        self.label = label
        digest = hashlib.sha256(label.encode("utf-8")).digest()
        label_key = int.from_bytes(digest[:8], "little")
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF, label_key]
        self.gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def integers(self, high: int) -> int:
        """Uniform integer in [0, high)."""
        return int(self.gen.integers(high))

    def integer_vector(self, high: int, size: int) -> np.ndarray:
        return self.gen.integers(high, size=size)

    def random(self) -> float:
        return float(self.gen.random())

    def uniforms(self, size: int) -> np.ndarray:
        return self.gen.random(size)

    def permutation(self, n: int) -> np.ndarray:
        return self.gen.permutation(n)

    def sample_without_replacement(self, n: int, k: int) -> np.ndarray:
        return self.gen.choice(n, size=k, replace=False)


# -- bounded matrices ---------------------------------------------------------


def new_matrix(n: int) -> np.ndarray:
    return np.zeros((n, n), dtype=np.float64)


def clamp_unit(x: float) -> float:
    if x < -1.0:
        return -1.0
    if x > 1.0:
        return 1.0
    return x


def perception(i: int, j: int, image: np.ndarray, reputation: np.ndarray,
               image_weight: float) -> float:
    """Agent i's overall opinion of j: a convex mix of direct experience
    and gossip-derived reputation.  image_weight = 1 ignores gossip."""
    if i == j:
        raise ValueError("perception is undefined toward oneself")
    p = image_weight * image[i, j] + (1.0 - image_weight) * reputation[i, j]
    return clamp_unit(p)


# -- networks -----------------------------------------------------------------


class SignedNetwork:
    """Undirected signed graph: +1 ties are friendly, -1 hostile.

    The structure is immutable during a run; gossip reads signs but never
    rewires.  Neighbor lists are kept sorted so iteration order is stable.
    """

    def __init__(self, n: int, labels: list[str] | None = None):
        if not 3 <= n <= 10000:
            raise ValueError(f"signed network size {n} outside supported range [3, 10000]")
        if labels is not None and len(labels) != n:
            raise ValueError("label list length must match n")
        self.n = n
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self._sign: dict[tuple[int, int], int] = {}
        self.neighbors: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, a: int, b: int, sign: int) -> None:
        if a == b:
            raise ValueError(f"self-loop on node {a}")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ValueError(f"edge ({a}, {b}) outside node range")
        if sign not in (-1, 1):
            raise ValueError(f"edge sign must be +1 or -1, got {sign}")
        key = (a, b) if a < b else (b, a)
        existing = self._sign.get(key)
        if existing is not None:
            if existing != sign:
                raise ValueError(f"conflicting signs for pair ({key[0]}, {key[1]})")
            return
        self._sign[key] = sign
        insort(self.neighbors[a], b)
        insort(self.neighbors[b], a)

    def edge_sign(self, a: int, b: int) -> int:
        """+1, -1, or 0 when no tie exists."""
        key = (a, b) if a < b else (b, a)
        return self._sign.get(key, 0)

    def degree(self, a: int) -> int:
        return len(self.neighbors[a])

    def edge_count(self) -> int:
        return len(self._sign)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for (a, b) in sorted(self._sign):
            yield a, b, self._sign[(a, b)]

    def isolates(self) -> list[int]:
        return [i for i in range(self.n) if not self.neighbors[i]]


class GameNetwork:
    """Undirected unsigned graph restricting Trust Game partner choice."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("game network needs at least 2 nodes")
        self.n = n
        self._edges: set[tuple[int, int]] = set()
        self.neighbors: list[list[int]] = [[] for _ in range(n)]

    def _key(self, a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def has_edge(self, a: int, b: int) -> bool:
        return self._key(a, b) in self._edges

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            raise ValueError(f"self-loop on node {a}")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ValueError(f"edge ({a}, {b}) outside node range")
        key = self._key(a, b)
        if key in self._edges:
            return
        self._edges.add(key)
        insort(self.neighbors[a], b)
        insort(self.neighbors[b], a)

    def remove_edge(self, a: int, b: int) -> None:
        key = self._key(a, b)
        if key not in self._edges:
            raise ValueError(f"edge ({a}, {b}) not present")
        self._edges.remove(key)
        self.neighbors[a].remove(b)
        self.neighbors[b].remove(a)

    def degree(self, a: int) -> int:
        return len(self.neighbors[a])

    def edge_count(self) -> int:
        return len(self._edges)

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def isolates(self) -> list[int]:
        return [i for i in range(self.n) if not self.neighbors[i]]


# -- population ---------------------------------------------------------------


def init_population(config: SimConfig, rng: RngStream
                    ) -> tuple[list[AgentState], np.ndarray, np.ndarray]:
    """Create agents plus blank image/reputation matrices.

    Types are assigned by a seeded shuffle so identical (config, seed)
    pairs yield identical populations.  Single-type populations are
    permitted here; they serve as control runs.
    """
    config.validate(allow_degenerate=True)
    n = config.n_agents
    k = config.defector_count
    order = rng.permutation(n)
    defectors = {int(i) for i in order[:k]}
    rule3 = config.action_rule == 3
    agents = []
    for i in range(n):
        if i in defectors:
            agent = AgentState(
                id=i,
                agent_type=AgentType.DEFECTOR,
                resources=config.endowment,
                kindness_remaining=config.leniency_length if rule3 else 0,
            )
        else:
            agent = AgentState(
                id=i,
                agent_type=AgentType.COOPERATOR,
                resources=config.endowment,
                forgiveness_remaining=(
                    {j: config.leniency_length for j in range(n) if j != i}
                    if rule3 else {}
                ),
            )
        agents.append(agent)
    return agents, new_matrix(n), new_matrix(n)
