"""The simulation loop.

A run interleaves Trust Game rounds with information flow.  Each round:

1. plan pairs (every agent trusts once, partner choice per regime);
2. play all pairs against start-of-round information, then apply the
   resulting image updates in plan order;
3. move information: the parallel mechanism rebuilds all reputations
   from pooled images, the diffusion mechanisms emit a batch of gossip
   pieces and run them one dyadic conversation per step, each piece
   living at most piece_lifespan steps inside a fixed block of
   total_steps / tg_rounds steps;
4. in the dynamic regime, rewire the game network.

The first burnin_rounds rounds run the full pipeline but do not count
toward the main accounting: when burn-in ends, resources reset to the
endowment while images, reputations, leniency counters, and networks
persist.  A run is a pure function of its config, including the seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import ConfigError, SimConfig
from .core import AgentState, AgentType, GameNetwork, RngStream, SignedNetwork, init_population
from .gossip import (GossipPiece, TriadicTable, all_yes_table, emit_pieces,
                     load_triadic_table, parallel_update, triadic_step)
from .io_data import generate_signed_network, load_signed_network
from .metrics import RoundStats, RunRecord, summarize
from .regimes import plan_round_network, plan_round_wellmixed, generate_game_network, rewire_dynamic
from .trustgame import play_pair, update_images

Probe = Callable[[str, "SimState"], None]


@dataclass
class Clock:
    step: int = 0          # gossip steps ticked so far (all phases)
    main_steps: int = 0    # gossip steps ticked in the main phase
    round: int = 0         # rounds completed
    phase: str = "burnin"


@dataclass
class SimState:
    """Live state handed to probes; everything is the real object."""

    config: SimConfig
    agents: list[AgentState]
    image: np.ndarray
    reputation: np.ndarray
    signed_net: SignedNetwork | None
    game_net: GameNetwork | None
    clock: Clock
    pieces: list[GossipPiece] = field(default_factory=list)


def run_simulation(config: SimConfig, probe: Probe | None = None) -> RunRecord:
    """Execute one run and summarize it.

    Identical configs produce identical records, byte for byte once
    serialized.  The optional probe receives (event, state) at
    "round_played", "parallel_update", "gossip_step", "rewire",
    "round_end", "burnin_reset", and "end"; it must not mutate state.
    """
    config.validate(allow_degenerate=True)
    rng = RngStream(config.seed, "run")
    agents, image, reputation = init_population(config, rng)
    n = config.n_agents

    signed_net: SignedNetwork | None = None
    table: TriadicTable | None = None
    if config.uses_signed_network():
        if config.signed_network_path is not None:
            signed_net = load_signed_network(config.signed_network_path)
            if signed_net.n != n:
                raise ConfigError(
                    "signed_network_path",
                    f"network has {signed_net.n} nodes but n_agents is {n}",
                )
        else:
            signed_net = generate_signed_network(
                n, config.positive_density, config.negative_density, rng)
        if config.gossip_mechanism == "triadic":
            table = load_triadic_table(config.triadic_table_path)
        else:
            table = all_yes_table()

    game_net: GameNetwork | None = None
    if config.uses_game_network():
        game_net = generate_game_network(n, config.min_degree, rng)

    clock = Clock()
    state = SimState(config, agents, image, reputation, signed_net, game_net, clock)
    steps_per_round = config.steps_per_round
    lifespan = config.resolved_piece_lifespan
    rounds: list[RoundStats] = []
    total_rounds = config.burnin_rounds + config.tg_rounds

    for round_idx in range(total_rounds):
        in_burnin = round_idx < config.burnin_rounds
        clock.phase = "burnin" if in_burnin else "main"

        # 1-2. plan and play; images update after every pair has resolved
        if game_net is None:
            plan = plan_round_wellmixed(n, rng)
        else:
            plan = plan_round_network(game_net, config.neighbor_play_prob, rng)
        outcomes = [
            play_pair(agents[t], agents[e], image, reputation, config, rng)
            for t, e in plan
        ]
        for outcome in outcomes:
            update_images(image, outcome, config.image_step)
        cooperations = sum(1 for o in outcomes if o.trustor_cooperated)
        if probe:
            probe("round_played", state)

        # 3. information flow
        transmissions = declines = emitted = 0
        if config.gossip_mechanism == "parallel":
            reputation = parallel_update(image)
            state.reputation = reputation
            clock.step += steps_per_round
            if not in_burnin:
                clock.main_steps += steps_per_round
            if probe:
                probe("parallel_update", state)
        else:
            assert signed_net is not None and table is not None
            pieces = emit_pieces(image, signed_net, config.gossip_budget, lifespan, rng)
            state.pieces = pieces
            emitted = len(pieces)
            ticked = 0
            for piece in pieces:
                for _ in range(lifespan):
                    if piece.steps_remaining > 0:
                        result = triadic_step(piece, signed_net, table, reputation,
                                              config.omega, rng)
                        if result is True:
                            transmissions += 1
                        elif result is False:
                            declines += 1
                    ticked += 1
                    clock.step += 1
                    if not in_burnin:
                        clock.main_steps += 1
                    if probe:
                        probe("gossip_step", state)
            # idle remainder keeps rounds aligned to the step grid
            for _ in range(steps_per_round - ticked):
                clock.step += 1
                if not in_burnin:
                    clock.main_steps += 1
                if probe:
                    probe("gossip_step", state)

        # 4. partner-network adaptation
        tie_changes = repairs = 0
        if config.regime == "dynamic":
            assert game_net is not None
            tie_changes, repairs = rewire_dynamic(game_net, image, reputation, rng)
            if probe:
                probe("rewire", state)

        rounds.append(_round_stats(round_idx, clock.phase, cooperations, agents,
                                   emitted, transmissions, declines,
                                   tie_changes, repairs))
        clock.round += 1
        if probe:
            probe("round_end", state)

        if round_idx == config.burnin_rounds - 1:
            for agent in agents:
                agent.resources = config.endowment
            if probe:
                probe("burnin_reset", state)

    record = summarize(agents, config, rounds)
    if probe:
        probe("end", state)
    return record


def _round_stats(round_idx: int, phase: str, cooperations: int,
                 agents: list[AgentState], emitted: int, transmissions: int,
                 declines: int, tie_changes: int, repairs: int) -> RoundStats:
    res = np.array([a.resources for a in agents])
    c_mask = np.array([a.agent_type is AgentType.COOPERATOR for a in agents])
    mean_c = float(res[c_mask].mean()) if c_mask.any() else None
    mean_d = float(res[~c_mask].mean()) if (~c_mask).any() else None
    return RoundStats(
        round=round_idx,
        phase=phase,
        cooperations=cooperations,
        total_resources=float(res.sum()),
        mean_cooperator_resources=mean_c,
        mean_defector_resources=mean_d,
        gossip_pieces=emitted,
        gossip_transmissions=transmissions,
        gossip_declines=declines,
        tie_changes=tie_changes,
        isolate_repairs=repairs,
    )
