"""Agent-based Trust Games with reputation spread by gossip on signed networks."""

__version__ = "0.1.0"

from .config import ConfigError, SimConfig
from .core import AgentState, AgentType, GameNetwork, RngStream, SignedNetwork, perception
from .gossip import GossipPiece, TriadicTable, default_triadic_table, load_triadic_table
from .metrics import RoundStats, RunRecord, aggregate, summarize
from .scheduler import SimState, run_simulation
from .sweep import default_grid, derive_seed, expand_grid, run_sweep

__all__ = [
    "AgentState",
    "AgentType",
    "ConfigError",
    "GameNetwork",
    "GossipPiece",
    "RngStream",
    "RoundStats",
    "RunRecord",
    "SignedNetwork",
    "SimConfig",
    "SimState",
    "TriadicTable",
    "aggregate",
    "default_grid",
    "default_triadic_table",
    "derive_seed",
    "expand_grid",
    "load_triadic_table",
    "perception",
    "run_simulation",
    "run_sweep",
    "summarize",
]
