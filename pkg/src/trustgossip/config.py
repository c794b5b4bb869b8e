"""Simulation configuration.

A run is fully described by one flat, JSON-serializable ``SimConfig``.
Every behavioral knob of the model lives here so that a (config, seed)
pair pins down a complete trajectory.  Parsing is strict: unknown keys
are rejected so that sweep grids cannot silently misspell a field.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

ACTION_RULES = (1, 2, 3)
REGIMES = ("well_mixed", "static", "dynamic")
GOSSIP_MECHANISMS = ("parallel", "simple", "triadic")


class ConfigError(ValueError):
    """Invalid configuration value; always names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulation run.

    Population and game
    -------------------
    n_agents            society size
    endowment           starting resources per agent
    defector_fraction   share of agents hard-wired to the defector policy;
                        the defector count is round(defector_fraction * n_agents)
    cooperation_threshold
                        perception level at or above which a cooperator
                        trusts (inclusive)
    action_rule         1 = threshold trustors and trustees
                        2 = rule 1 plus blind reciprocity by cooperating trustees
                        3 = rule 2 plus leniency counters (cooperators forgive
                            per partner, defectors start with a global kindness
                            budget)
    stake               amount a trusting trustor transfers
    multiplier          factor applied to the transfer in the trustee's hands
    return_fraction     share of the multiplied transfer an honoring trustee
                        sends back
    image_step          size of one direct-experience image update

    Information flow
    ----------------
    gossip_mechanism    "parallel" = everyone averages everyone's images once
                        per round; "simple" = dyadic diffusion that always
                        relays; "triadic" = dyadic diffusion gated by a
                        sign-pattern transmission table
    omega               weight of incoming gossip against held reputation
    image_weight        weight of direct images against gossip-derived
                        reputation when forming a perception
    gossip_budget       pieces of gossip started after each game round
    piece_lifespan      dyadic steps each piece may live; null derives
                        total_steps // (tg_rounds * gossip_budget)
    triadic_table_path  CSV overriding the built-in transmission table

    Schedule
    --------
    total_steps         gossip steps across the main phase
    tg_rounds           game rounds in the main phase
    burnin_rounds       full rounds run before accounting starts; resources
                        reset to the endowment when burn-in ends

    Partner choice
    --------------
    regime              "well_mixed", "static", or "dynamic"
    neighbor_play_prob  probability a networked trustor plays a neighbor
    min_degree          distinct partner draws per agent when generating the
                        game network

    Signed network (gossip substrate)
    ---------------------------------
    signed_network_path CSV edge list; when null a synthetic network is drawn
    positive_density    probability an unordered pair shares a positive tie
    negative_density    probability of a negative tie

    leniency_length     rule-3 forgiveness per partner and defector kindness
    seed                master seed of the run
    """

    n_agents: int = 16
    endowment: float = 20.0
    defector_fraction: float = 0.25
    cooperation_threshold: float = 0.0
    action_rule: int = 1
    regime: str = "well_mixed"
    gossip_mechanism: str = "parallel"
    omega: float = 0.3
    image_weight: float = 0.5
    multiplier: float = 3.0
    stake: float = 5.0
    return_fraction: float = 0.5
    image_step: float = 0.1
    total_steps: int = 1000
    tg_rounds: int = 10
    burnin_rounds: int = 2
    gossip_budget: int = 10
    piece_lifespan: int | None = None
    neighbor_play_prob: float = 0.95
    min_degree: int = 3
    leniency_length: int = 3
    seed: int = 1
    triadic_table_path: str | None = None
    signed_network_path: str | None = None
    positive_density: float = 0.3
    negative_density: float = 0.1

    # -- derived quantities -------------------------------------------------

    @property
    def defector_count(self) -> int:
        # round-half-up so the count is platform-stable
        return int(math.floor(self.defector_fraction * self.n_agents + 0.5))

    @property
    def steps_per_round(self) -> int:
        return self.total_steps // self.tg_rounds

    @property
    def resolved_piece_lifespan(self) -> int:
        if self.piece_lifespan is not None:
            return self.piece_lifespan
        if self.gossip_budget <= 0:
            return 0
        return self.steps_per_round // self.gossip_budget

    def uses_signed_network(self) -> bool:
        return self.gossip_mechanism in ("simple", "triadic")

    def uses_game_network(self) -> bool:
        return self.regime in ("static", "dynamic")

    # -- validation ---------------------------------------------------------

    def validate(self, allow_degenerate: bool = False) -> "SimConfig":
        """Raise ConfigError on the first violated field; return self."""
        if self.n_agents < 3 or self.n_agents > 10000:
            raise ConfigError("n_agents", "must be between 3 and 10000")
        if not self.endowment > 0:
            raise ConfigError("endowment", "must be positive")
        if not 0.0 <= self.defector_fraction <= 1.0:
            raise ConfigError("defector_fraction", "must lie in [0, 1]")
        if not allow_degenerate:
            k = self.defector_count
            if k <= 0 or k >= self.n_agents:
                raise ConfigError(
                    "defector_fraction",
                    f"defector count {k} of {self.n_agents} leaves a single-type "
                    "population; pass allow_degenerate for control runs",
                )
        if not -1.0 <= self.cooperation_threshold <= 1.0:
            raise ConfigError("cooperation_threshold", "must lie in [-1, 1]")
        if self.action_rule not in ACTION_RULES:
            raise ConfigError("action_rule", f"must be one of {ACTION_RULES}")
        if self.regime not in REGIMES:
            raise ConfigError("regime", f"must be one of {REGIMES}")
        if self.gossip_mechanism not in GOSSIP_MECHANISMS:
            raise ConfigError("gossip_mechanism", f"must be one of {GOSSIP_MECHANISMS}")
        if not 0.0 <= self.omega <= 1.0:
            raise ConfigError("omega", "must lie in [0, 1]")
        if not 0.0 <= self.image_weight <= 1.0:
            raise ConfigError("image_weight", "must lie in [0, 1]")
        if not self.multiplier > 1.0:
            raise ConfigError("multiplier", "must exceed 1 (no resource creation otherwise)")
        if not self.stake > 0:
            raise ConfigError("stake", "must be positive")
        if not 0.0 <= self.return_fraction <= 1.0:
            raise ConfigError("return_fraction", "must lie in [0, 1]")
        if not self.image_step > 0:
            raise ConfigError("image_step", "must be positive")
        if self.total_steps < 1:
            raise ConfigError("total_steps", "must be at least 1")
        if self.tg_rounds < 1:
            raise ConfigError("tg_rounds", "must be at least 1")
        if self.total_steps % self.tg_rounds != 0:
            raise ConfigError("total_steps", "must be divisible by tg_rounds")
        if self.burnin_rounds < 0:
            raise ConfigError("burnin_rounds", "must be nonnegative")
        if self.gossip_budget < 0:
            raise ConfigError("gossip_budget", "must be nonnegative")
        if self.uses_signed_network():
            if self.gossip_budget > 0 and self.total_steps < self.tg_rounds * self.gossip_budget:
                raise ConfigError(
                    "total_steps",
                    "must be at least tg_rounds * gossip_budget so each piece "
                    "lives at least one step",
                )
            if self.piece_lifespan is not None:
                if self.piece_lifespan < 1:
                    raise ConfigError("piece_lifespan", "must be at least 1 when set")
                if self.gossip_budget * self.piece_lifespan > self.steps_per_round:
                    raise ConfigError(
                        "piece_lifespan",
                        "gossip_budget * piece_lifespan must fit into the "
                        f"{self.steps_per_round} steps between rounds",
                    )
        if not 0.0 <= self.neighbor_play_prob <= 1.0:
            raise ConfigError("neighbor_play_prob", "must lie in [0, 1]")
        if self.uses_game_network():
            if not 1 <= self.min_degree <= self.n_agents - 1:
                raise ConfigError(
                    "min_degree", f"must lie in [1, {self.n_agents - 1}]"
                )
        if self.leniency_length < 0:
            raise ConfigError("leniency_length", "must be nonnegative")
        if not 0.0 <= self.positive_density:
            raise ConfigError("positive_density", "must be nonnegative")
        if not 0.0 <= self.negative_density:
            raise ConfigError("negative_density", "must be nonnegative")
        if self.positive_density + self.negative_density > 1.0:
            raise ConfigError(
                "positive_density", "positive_density + negative_density must not exceed 1"
            )
        return self

    # -- (de)serialization ----------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def with_overrides(self, **overrides: Any) -> "SimConfig":
        unknown = set(overrides) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration key")
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SimConfig":
        if not isinstance(data, dict):
            raise ConfigError("<root>", "configuration must be a JSON object")
        known = {f.name: f for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown configuration key")
        coerced: dict[str, Any] = {}
        for key, value in data.items():
            coerced[key] = _coerce(key, value)
        return cls(**coerced)

    @classmethod
    def from_json(cls, source: str | Path) -> "SimConfig":
        path = Path(source)
        try:
            payload = json.loads(path.read_text())
        except FileNotFoundError:
            raise ConfigError("<file>", f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON in {path}: {exc}")
        return cls.from_dict(payload)


_INT_FIELDS = {
    "n_agents", "action_rule", "total_steps", "tg_rounds", "burnin_rounds",
    "gossip_budget", "min_degree", "leniency_length", "seed",
}
_OPT_INT_FIELDS = {"piece_lifespan"}
_FLOAT_FIELDS = {
    "endowment", "defector_fraction", "cooperation_threshold", "omega",
    "image_weight", "multiplier", "stake", "return_fraction", "image_step",
    "neighbor_play_prob", "positive_density", "negative_density",
}
_STR_FIELDS = {"regime", "gossip_mechanism"}
_OPT_STR_FIELDS = {"triadic_table_path", "signed_network_path"}


def _coerce(key: str, value: Any) -> Any:
    if key in _OPT_INT_FIELDS and value is None:
        return None
    if key in _OPT_STR_FIELDS:
        if value is None:
            return None
        if not isinstance(value, str):
            raise ConfigError(key, "must be a string path or null")
        return value
    if key in _INT_FIELDS or key in _OPT_INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, "must be an integer")
        return value
    if key in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, "must be a number")
        return float(value)
    if key in _STR_FIELDS:
        if not isinstance(value, str):
            raise ConfigError(key, "must be a string")
        return value
    raise ConfigError(key, "unknown configuration key")
