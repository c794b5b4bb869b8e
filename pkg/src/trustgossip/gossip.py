"""Reputation information flow.

Three mechanisms move image information into reputations:

* parallel  — once per round everyone learns the population mean image
              of everyone else, as if all opinions were pooled publicly;
* simple    — a piece of gossip diffuses over the signed network one
              dyadic conversation per step and is always passed on;
* triadic   — like simple, but each conversation consults a transmission
              table keyed by the sign pattern of the (sender, receiver,
              target) triad and the valence of the news, so the
              relational context decides whether people pass it on.

A gossip piece carries the originator's image of the target, frozen at
emission; later forwards relay that original payload rather than the
forwarder's own opinion.  A receiving agent blends the payload into its
held reputation of the target with weight omega.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .core import RngStream, SignedNetwork, clamp_unit

VALENCE_POSITIVE = "positive"   # payload >= 0 (praise or neutral news)
VALENCE_NEGATIVE = "negative"   # payload < 0

_TABLE_HEADER = ["sr_sign", "st_rel", "rt_rel", "valence", "transmit"]
_SIGN_TOKENS = {"+1": 1, "-1": -1}
_REL_TOKENS = {"+1": 1, "-1": -1, "0": 0}
_VALENCE_TOKENS = (VALENCE_POSITIVE, VALENCE_NEGATIVE)
_TRANSMIT_TOKENS = {"yes": True, "no": False}


class TriadicTableError(ValueError):
    pass


def table_configurations() -> list[tuple[int, int, int, str]]:
    """All 36 (sender-receiver sign, sender-target, receiver-target,
    valence) combinations, in canonical order."""
    keys = []
    for sr in (1, -1):
        for st in (1, -1, 0):
            for rt in (1, -1, 0):
                for valence in _VALENCE_TOKENS:
                    keys.append((sr, st, rt, valence))
    return keys


@dataclass(frozen=True)
class TriadicTable:
    """Complete transmit/withhold rule for every triad configuration."""

    rules: dict[tuple[int, int, int, str], bool]

    def __post_init__(self):
        expected = set(table_configurations())
        got = set(self.rules)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise TriadicTableError(
                f"incomplete table: missing {missing[:6]}{'...' if len(missing) > 6 else ''}, "
                f"unexpected {extra[:6]}"
            )

    def transmits(self, sr_sign: int, st_rel: int, rt_rel: int, valence: str) -> bool:
        return self.rules[(sr_sign, st_rel, rt_rel, valence)]


def default_triadic_table() -> TriadicTable:
    """Built-in transmission heuristics.

    Positive news travels only along a positive sender-receiver tie and
    only when neither party is hostile to the target.  Negative news
    travels along positive ties unless the receiver is a friend of the
    target (that friendship inhibits it), and additionally between any
    two agents who share hostility toward the target (a common enemy
    loosens tongues even across a hostile tie).
    """
    rules: dict[tuple[int, int, int, str], bool] = {}
    for (sr, st, rt, valence) in table_configurations():
        if valence == VALENCE_POSITIVE:
            ok = sr == 1 and st != -1 and rt != -1
        else:
            ok = (sr == 1 and rt != 1) or (st == -1 and rt == -1)
        rules[(sr, st, rt, valence)] = ok
    return TriadicTable(rules)


def all_yes_table() -> TriadicTable:
    return TriadicTable({key: True for key in table_configurations()})


_ALL_YES = all_yes_table()


def default_table_text() -> str:
    """The packaged default table as CSV text."""
    return resources.files("trustgossip").joinpath("data/triadic_default.csv").read_text()


def format_table(table: TriadicTable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_TABLE_HEADER)
    rel_token = {1: "+1", -1: "-1", 0: "0"}
    for key in table_configurations():
        sr, st, rt, valence = key
        writer.writerow([rel_token[sr], rel_token[st], rel_token[rt], valence,
                         "yes" if table.rules[key] else "no"])
    return out.getvalue()


def parse_table(text: str, source: str = "<table>") -> TriadicTable:
    rules: dict[tuple[int, int, int, str], bool] = {}
    rows = [
        (lineno, line) for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise TriadicTableError(f"{source}: empty table")
    header = next(csv.reader([rows[0][1]]))
    if [h.strip() for h in header] != _TABLE_HEADER:
        raise TriadicTableError(
            f"{source}: header must be {','.join(_TABLE_HEADER)}"
        )
    for lineno, line in rows[1:]:
        cells = [c.strip() for c in next(csv.reader([line]))]
        if len(cells) != 5:
            raise TriadicTableError(f"{source}:{lineno}: expected 5 columns")
        sr_tok, st_tok, rt_tok, valence, transmit_tok = cells
        if sr_tok not in _SIGN_TOKENS:
            raise TriadicTableError(f"{source}:{lineno}: sr_sign must be +1 or -1")
        if st_tok not in _REL_TOKENS or rt_tok not in _REL_TOKENS:
            raise TriadicTableError(f"{source}:{lineno}: relations must be +1, -1 or 0")
        if valence not in _VALENCE_TOKENS:
            raise TriadicTableError(
                f"{source}:{lineno}: valence must be 'positive' or 'negative'"
            )
        if transmit_tok not in _TRANSMIT_TOKENS:
            raise TriadicTableError(f"{source}:{lineno}: transmit must be 'yes' or 'no'")
        key = (_SIGN_TOKENS[sr_tok], _REL_TOKENS[st_tok], _REL_TOKENS[rt_tok], valence)
        if key in rules:
            raise TriadicTableError(f"{source}:{lineno}: duplicate configuration {key}")
        rules[key] = _TRANSMIT_TOKENS[transmit_tok]
    return TriadicTable(rules)


def load_triadic_table(path: str | Path | None = None) -> TriadicTable:
    """Load a table from CSV; None loads the packaged default."""
    if path is None:
        return parse_table(default_table_text(), source="builtin default")
    p = Path(path)
    if not p.exists():
        raise TriadicTableError(f"table file not found: {p}")
    return parse_table(p.read_text(), source=str(p))


# -- gossip pieces --------------------------------------------------------------


@dataclass
class GossipPiece:
    """One traveling statement about a target agent.

    frontier holds everyone currently able to forward the piece;
    informed additionally blocks re-delivery (the originator counts as
    informed, the target never receives its own gossip).
    """

    target: int
    payload: float
    originator: int
    steps_remaining: int
    frontier: list[int] = field(default_factory=list)
    informed: set[int] = field(default_factory=set)

    def __post_init__(self):
        if not self.frontier:
            self.frontier = [self.originator]
        if not self.informed:
            self.informed = {self.originator}
        if self.target in self.informed:
            raise ValueError("gossip target cannot be among the informed")

    @property
    def valence(self) -> str:
        return VALENCE_NEGATIVE if self.payload < 0 else VALENCE_POSITIVE


def parallel_update(image: np.ndarray) -> np.ndarray:
    """Public pooling: every agent's reputation of j becomes the mean
    image of j held by the other agents.  Columns are constant by
    construction and the diagonal stays zero."""
    n = image.shape[0]
    means = image.sum(axis=0) / (n - 1)  # diagonal entries are fixed zeros
    rep = np.repeat(means[np.newaxis, :], n, axis=0)
    np.fill_diagonal(rep, 0.0)
    return rep


def emit_pieces(image: np.ndarray, net: SignedNetwork, budget: int,
                lifespan: int, rng: RngStream) -> list[GossipPiece]:
    """Start up to ``budget`` pieces.

    Each originator is a uniform agent with at least one signed tie;
    its target a uniform other agent it holds a nonzero image of.  A
    drawn originator with nothing to say forfeits that piece.  Payloads
    freeze the originator's current image of the target.
    """
    n = net.n
    origins = [a for a in range(n) if net.degree(a) > 0]
    pieces: list[GossipPiece] = []
    if not origins or budget <= 0 or lifespan <= 0:
        return pieces
    for _ in range(budget):
        s = origins[rng.integers(len(origins))]
        row = image[s]
        targets = [j for j in range(n) if j != s and row[j] != 0.0]
        if not targets:
            continue
        t = targets[rng.integers(len(targets))]
        pieces.append(GossipPiece(target=t, payload=float(row[t]), originator=s,
                                  steps_remaining=lifespan))
    return pieces


def triadic_step(piece: GossipPiece, net: SignedNetwork, table: TriadicTable,
                 reputation: np.ndarray, omega: float,
                 rng: RngStream) -> bool | None:
    """One dyadic conversation about the piece.

    A uniform sender is drawn among frontier members that still have an
    eligible neighbor (uninformed and not the target); the receiver is a
    uniform eligible neighbor of that sender.  The table decides whether
    the piece crosses the tie.  Returns True on a transmission, False on
    a withheld one (both consume a step of the piece's life), or None
    when nobody can forward and the piece dies early.
    """
    if piece.steps_remaining <= 0:
        raise ValueError("gossip piece has no steps remaining")
    senders = []
    for s in piece.frontier:
        for nb in net.neighbors[s]:
            if nb != piece.target and nb not in piece.informed:
                senders.append(s)
                break
    if not senders:
        piece.steps_remaining = 0
        return None
    s = senders[rng.integers(len(senders))]
    candidates = [nb for nb in net.neighbors[s]
                  if nb != piece.target and nb not in piece.informed]
    r = candidates[rng.integers(len(candidates))]
    decision = table.transmits(
        net.edge_sign(s, r),
        net.edge_sign(s, piece.target),
        net.edge_sign(r, piece.target),
        piece.valence,
    )
    piece.steps_remaining -= 1
    if decision:
        held = reputation[r, piece.target]
        reputation[r, piece.target] = clamp_unit(
            held * (1.0 - omega) + piece.payload * omega
        )
        piece.frontier.append(r)
        piece.informed.add(r)
    return decision


def simple_step(piece: GossipPiece, net: SignedNetwork, reputation: np.ndarray,
                omega: float, rng: RngStream) -> bool | None:
    """Diffusion without relational gating: every conversation relays."""
    return triadic_step(piece, net, _ALL_YES, reputation, omega, rng)
