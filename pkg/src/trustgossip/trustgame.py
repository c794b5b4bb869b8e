"""One Trust Game interaction.

The trustor may transfer a stake to the trustee; the transfer is
multiplied in transit.  The trustee then either returns a fixed share
of the multiplied amount or keeps everything.  Every cooperative
transfer creates (multiplier - 1) * stake new resources in the dyad,
which is the conservation identity the scheduler accounts against.

Afterwards both parties update their direct images of each other:
the trustee judges whether the trustor trusted, and the trustor judges
the return decision, but only if there was a transfer to judge.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .core import AgentState, RngStream, clamp_unit, perception


@dataclass(frozen=True)
class TgOutcome:
    """Result of a single trustor/trustee encounter."""

    trustor: int
    trustee: int
    trustor_cooperated: bool
    trustee_returned: bool
    trustor_delta: float
    trustee_delta: float


def decide_trustor(agent: AgentState, partner: int, p: float, threshold: float,
                   rule: int, rng: RngStream | None = None) -> bool:
    """Trustor's choice to transfer the stake.

    Defectors never trust, except that under rule 3 they spend their
    kindness budget first.  Cooperators trust when their perception of
    the partner reaches the threshold (inclusive); under rule 3 a
    sub-threshold partner can still be forgiven a limited number of
    times.  The rng argument is unused by the built-in rules and exists
    so stochastic policies can share the call signature.
    """
    if agent.is_defector:
        if rule == 3 and agent.kindness_remaining > 0:
            agent.kindness_remaining -= 1
            return True
        return False
    if p >= threshold:
        return True
    if rule == 3:
        left = agent.forgiveness_remaining.get(partner, 0)
        if left > 0:
            agent.forgiveness_remaining[partner] = left - 1
            return True
    return False


def decide_trustee(agent: AgentState, partner: int, trustor_cooperated: bool,
                   p: float, threshold: float, rule: int) -> bool:
    """Trustee's choice to honor a received transfer.

    Only meaningful when the trustor actually transferred.  Rule 1
    trustees apply the same perception threshold as trustors; rules 2
    and 3 reciprocate received trust unconditionally (cooperators), and
    rule-3 defectors spend kindness before reverting to keeping all.
    """
    if not trustor_cooperated:
        raise ValueError("trustee decision requires a cooperating trustor")
    if agent.is_defector:
        if rule == 3 and agent.kindness_remaining > 0:
            agent.kindness_remaining -= 1
            return True
        return False
    if rule == 1:
        return p >= threshold
    return True


def apply_payoffs(trustor: AgentState, trustee: AgentState,
                  trustor_cooperated: bool, trustee_returned: bool,
                  stake: float, multiplier: float,
                  return_fraction: float) -> TgOutcome:
    """Move resources according to the decisions.

    A trustor who cannot cover the stake is forced to defect, whatever
    it decided.  Mutual-defection encounters move nothing.
    """
    if trustor_cooperated and trustor.resources < stake:
        trustor_cooperated = False
    if not trustor_cooperated:
        return TgOutcome(trustor.id, trustee.id, False, False, 0.0, 0.0)
    transfer = multiplier * stake
    if trustee_returned:
        returned = return_fraction * transfer
        trustor_delta = -stake + returned
        trustee_delta = transfer - returned
    else:
        trustor_delta = -stake
        trustee_delta = transfer
    trustor.resources += trustor_delta
    trustee.resources += trustee_delta
    return TgOutcome(trustor.id, trustee.id, True, bool(trustee_returned),
                     trustor_delta, trustee_delta)


def update_images(image: np.ndarray, outcome: TgOutcome, step: float) -> np.ndarray:
    """Apply direct-experience updates for one outcome, clamped to [-1, 1].

    The trustee moves its image of the trustor up or down by one step
    depending on whether trust was extended.  The trustor moves its
    image of the trustee only when it transferred: up on a return,
    down on a betrayal.  A defecting trustor learns nothing new.
    """
    i, j = outcome.trustor, outcome.trustee
    if outcome.trustor_cooperated:
        image[j, i] = clamp_unit(image[j, i] + step)
        delta = step if outcome.trustee_returned else -step
        image[i, j] = clamp_unit(image[i, j] + delta)
    else:
        image[j, i] = clamp_unit(image[j, i] - step)
    return image


def play_pair(trustor: AgentState, trustee: AgentState, image: np.ndarray,
              reputation: np.ndarray, config: SimConfig,
              rng: RngStream | None = None) -> TgOutcome:
    """Run one complete encounter: perceptions, decisions, payoffs.

    Image updates are left to the caller so that all pairs of a round
    can resolve against the same start-of-round information.
    """
    p_out = perception(trustor.id, trustee.id, image, reputation, config.image_weight)
    cooperated = decide_trustor(trustor, trustee.id, p_out,
                                config.cooperation_threshold, config.action_rule, rng)
    returned = False
    if cooperated and trustor.resources >= config.stake:
        p_back = perception(trustee.id, trustor.id, image, reputation, config.image_weight)
        returned = decide_trustee(trustee, trustor.id, True, p_back,
                                  config.cooperation_threshold, config.action_rule)
    return apply_payoffs(trustor, trustee, cooperated, returned,
                         config.stake, config.multiplier, config.return_fraction)
