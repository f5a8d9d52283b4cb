"""Local event groups and their joint probability tables.

A group (``Leg``) owns a dense joint table (``Cmd``) over its binary
events. Cell order is little-endian: bit ``k`` of a cell index gives the
truth value of ``events[k]``. A ``LegNet`` is a collection of groups whose
sharing of events forms a tree; adjacent groups must agree on the joint
marginal over their shared events.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ._kernels import marginalize_cells
from .errors import (
    CyclicLegGraph,
    DisconnectedNet,
    MismatchedTables,
    NegativeCell,
    NotNormalized,
    ParseError,
    SameEvent,
    UnknownEvent,
    UnknownEventInLeg,
    UnknownLeg,
    WrongLength,
    ZeroCondition,
)

NORMALIZATION_TOL = 1e-9
CONSISTENCY_TOL = 1e-6
ZERO_PROB = 1e-12
MAX_EVENTS = 16


@dataclass(frozen=True, eq=False)
class Cmd:
    """Joint probability table over an ordered tuple of binary events."""

    events: tuple[str, ...]
    cells: np.ndarray

    @property
    def n(self) -> int:
        return len(self.events)

    def position(self, event: str) -> int:
        try:
            return self.events.index(event)
        except ValueError:
            raise UnknownEvent(f"unknown event {event!r}", {"event": event}) from None


def _cmd(events: tuple[str, ...], cells: np.ndarray) -> Cmd:
    """Internal constructor for cells already known to be valid. The array
    must be freshly allocated; it is frozen in place."""
    cells = np.ascontiguousarray(cells, dtype=np.float64)
    cells.setflags(write=False)
    return Cmd(events, cells)


def build_cmd(events: Sequence[str], cells: Sequence[float] | np.ndarray) -> Cmd:
    """Validate and build a table: non-negative cells of length 2**n that
    sum to 1 within the normalization tolerance (then renormalized exactly).
    """
    names = tuple(str(e) for e in events)
    if not 1 <= len(names) <= MAX_EVENTS:
        raise WrongLength(f"a group needs between 1 and {MAX_EVENTS} events, got {len(names)}")
    if any(not name for name in names):
        raise ParseError("event names must be non-empty")
    if len(set(names)) != len(names):
        raise SameEvent("duplicate event name in table")
    arr = np.array(cells, dtype=np.float64)
    if arr.ndim != 1 or arr.size != 1 << len(names):
        raise WrongLength(f"expected {1 << len(names)} cells, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise NegativeCell("cells must be finite")
    if np.any(arr < 0):
        raise NegativeCell("cells must be non-negative")
    total = float(arr.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"cells sum to {total!r}, expected 1 within {NORMALIZATION_TOL}")
    if total != 1.0:
        arr = arr / total
    return _cmd(names, arr)


def _positions(cmd: Cmd, subset: Sequence[str]) -> np.ndarray:
    pos = np.empty(len(subset), dtype=np.int64)
    seen = set()
    for k, name in enumerate(subset):
        if name in seen:
            raise SameEvent(f"event {name!r} repeated in subset")
        seen.add(name)
        pos[k] = cmd.position(name)
    return pos


def marginal(cmd: Cmd, subset: Sequence[str]) -> Cmd:
    """Marginal table over ``subset`` (result events in the given order)."""
    names = tuple(subset)
    if not names:
        raise WrongLength("marginal requires a non-empty subset")
    if names == cmd.events:
        return cmd
    pos = _positions(cmd, names)
    return _cmd(names, marginalize_cells(cmd.cells, pos, len(names)))


def prob(cmd: Cmd, partial: Mapping[str, bool] | None = None) -> float:
    """Probability of a partial assignment; the empty assignment has
    probability 1."""
    if not partial:
        return 1.0
    mask = 0
    want = 0
    for name, value in partial.items():
        k = cmd.position(name)
        mask |= 1 << k
        if value:
            want |= 1 << k
    idx = np.arange(cmd.cells.size, dtype=np.int64)
    return float(cmd.cells[(idx & mask) == want].sum())


def conditional(cmd: Cmd, target: Mapping[str, bool], given: Mapping[str, bool]) -> float:
    """P(target | given). Overlapping bindings are allowed; a contradictory
    overlap has probability 0."""
    for name in target:
        cmd.position(name)
    denominator = prob(cmd, given)
    if denominator <= ZERO_PROB:
        raise ZeroCondition("conditioning assignment has (near-)zero probability")
    merged = dict(given)
    for name, value in target.items():
        if name in merged and bool(merged[name]) != bool(value):
            return 0.0
        merged[name] = value
    return prob(cmd, merged) / denominator


def complement_event(cmd: Cmd, event: str) -> Cmd:
    """The same table with ``event`` read as its own negation (cells
    re-indexed by flipping that bit)."""
    k = cmd.position(event)
    idx = np.arange(cmd.cells.size, dtype=np.int64)
    return _cmd(cmd.events, cmd.cells[idx ^ (1 << k)])


@dataclass(frozen=True, eq=False)
class Leg:
    """A named local event group with its joint table."""

    id: str
    cmd: Cmd


class LegNet:
    """Groups joined by shared events. The sharing graph must be a tree
    (connected and acyclic); this is validated at construction. Marginal
    agreement between neighbours is checked separately (``check_consistency``
    / the knowledge-base loader)."""

    def __init__(
        self,
        legs: Iterable[Leg],
        vocabulary: Sequence[str] | None = None,
        causal_links: Iterable[tuple[str, str]] = (),
    ):
        self.legs: tuple[Leg, ...] = tuple(legs)
        if not self.legs:
            raise ParseError("a net needs at least one leg")
        ids = [leg.id for leg in self.legs]
        if len(set(ids)) != len(ids):
            dupe = next(i for i in ids if ids.count(i) > 1)
            raise ParseError(f"duplicate leg id {dupe!r}")
        self._by_id = {leg.id: leg for leg in self.legs}

        if vocabulary is None:
            seen: dict[str, None] = {}
            for leg in self.legs:
                for event in leg.cmd.events:
                    seen.setdefault(event, None)
            self.vocabulary: tuple[str, ...] = tuple(seen)
        else:
            self.vocabulary = tuple(vocabulary)
            if len(set(self.vocabulary)) != len(self.vocabulary):
                raise ParseError("duplicate event in vocabulary")
            known = set(self.vocabulary)
            for leg in self.legs:
                for event in leg.cmd.events:
                    if event not in known:
                        raise UnknownEventInLeg(
                            f"leg {leg.id!r} lists event {event!r} which is not in the vocabulary",
                            {"leg": leg.id, "event": event},
                        )

        edges: list[tuple[str, str, tuple[str, ...]]] = []
        for i in range(len(self.legs)):
            for j in range(i + 1, len(self.legs)):
                other = set(self.legs[j].cmd.events)
                shared = tuple(e for e in self.legs[i].cmd.events if e in other)
                if shared:
                    edges.append((self.legs[i].id, self.legs[j].id, shared))
        self._edges = tuple(edges)
        self._validate_tree()

        self.causal_links: tuple[tuple[str, str], ...] = tuple(
            (str(a), str(b)) for a, b in causal_links
        )

    def _validate_tree(self) -> None:
        index = {leg.id: k for k, leg in enumerate(self.legs)}
        neighbours: list[list[int]] = [[] for _ in self.legs]
        for a, b, _ in self._edges:
            neighbours[index[a]].append(index[b])
            neighbours[index[b]].append(index[a])
        seen = [False] * len(self.legs)
        components = 0
        for start in range(len(self.legs)):
            if seen[start]:
                continue
            components += 1
            stack = [start]
            seen[start] = True
            while stack:
                node = stack.pop()
                for nb in neighbours[node]:
                    if not seen[nb]:
                        seen[nb] = True
                        stack.append(nb)
        if len(self._edges) > len(self.legs) - components:
            raise CyclicLegGraph("shared-event graph contains a cycle")
        if components > 1:
            raise DisconnectedNet(f"shared-event graph has {components} components")

    def leg(self, leg_id: str) -> Leg:
        try:
            return self._by_id[leg_id]
        except KeyError:
            raise UnknownLeg(f"unknown leg {leg_id!r}", {"leg": leg_id}) from None

    def edges(self) -> tuple[tuple[str, str, tuple[str, ...]], ...]:
        return self._edges

    def neighbors(self, leg_id: str) -> tuple[str, ...]:
        self.leg(leg_id)
        order = {leg.id: k for k, leg in enumerate(self.legs)}
        out = []
        for a, b, _ in self._edges:
            if a == leg_id:
                out.append(b)
            elif b == leg_id:
                out.append(a)
        out.sort(key=order.__getitem__)
        return tuple(out)

    def shared_events(self, leg_a: str, leg_b: str) -> tuple[str, ...]:
        for a, b, shared in self._edges:
            if {a, b} == {leg_a, leg_b}:
                return shared
        return ()

    def legs_containing(self, event: str) -> tuple[str, ...]:
        return tuple(leg.id for leg in self.legs if event in leg.cmd.events)

    def replace_cmd(self, leg_id: str, cmd: Cmd) -> "LegNet":
        old = self.leg(leg_id)
        if cmd.events != old.cmd.events:
            raise MismatchedTables(
                f"replacement table for {leg_id!r} must keep the event list"
            )
        legs = tuple(Leg(leg.id, cmd) if leg.id == leg_id else leg for leg in self.legs)
        return LegNet(legs, self.vocabulary, self.causal_links)


@dataclass(frozen=True)
class PairCheck:
    leg_a: str
    leg_b: str
    shared: tuple[str, ...]
    max_discrepancy: float


@dataclass(frozen=True)
class ConsistencyReport:
    pairs: tuple[PairCheck, ...]
    tol: float

    @property
    def max_discrepancy(self) -> float:
        return max((p.max_discrepancy for p in self.pairs), default=0.0)

    @property
    def flagged(self) -> tuple[PairCheck, ...]:
        return tuple(p for p in self.pairs if p.max_discrepancy > self.tol)

    @property
    def consistent(self) -> bool:
        return not self.flagged


def check_consistency(net: LegNet, tol: float = CONSISTENCY_TOL) -> ConsistencyReport:
    """Compare the joint marginal over the full shared event set for every
    adjacent pair; report the worst per-cell discrepancy of each pair."""
    checks = []
    for leg_a, leg_b, shared in net.edges():
        ma = marginal(net.leg(leg_a).cmd, shared)
        mb = marginal(net.leg(leg_b).cmd, shared)
        disc = float(np.max(np.abs(ma.cells - mb.cells)))
        checks.append(PairCheck(leg_a, leg_b, shared, disc))
    return ConsistencyReport(tuple(checks), tol)
