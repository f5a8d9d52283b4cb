"""Minimum-information evidence updating and propagation.

A single group's table is projected onto marginal constraints by cyclic
proportional fitting, which minimizes the information gained relative to
the prior table; with one single-event constraint this reduces to Jeffrey's
rule (conditionals given the constrained event are preserved). An update to
one group is propagated breadth-first through the tree of groups: each
changed group hands its shared-set marginal to the next neighbour.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from ._kernels import marginalize_cells, rescale_cells
from .errors import (
    ImpossibleEvidence,
    InvalidConstraint,
    MismatchedTables,
    NoConvergence,
    UnknownEvent,
    UnknownUpdate,
)
from .table import Cmd, LegNet, ZERO_PROB, _cmd, _positions, marginal, prob

if TYPE_CHECKING:  # pragma: no cover
    from .explain import CausalGraph

IPF_TOL = 1e-9
IPF_MAX_ITER = 1000
PROPAGATION_TOL = 1e-9


@dataclass(frozen=True)
class EvidenceSpec:
    """Target probabilities for one or more events of a single group,
    imposed simultaneously. Mapping order fixes the fitting cycle order."""

    source_leg: str
    constraints: Mapping[str, float]


@dataclass(frozen=True)
class TouchedLeg:
    leg_id: str
    before: Cmd
    after: Cmd


@dataclass(frozen=True)
class UpdateRecord:
    index: int
    evidence: EvidenceSpec
    touched: tuple[TouchedLeg, ...]
    propagation_order: tuple[str, ...]


@dataclass
class Session:
    """A consultation: the live net, the net as loaded, and the update
    history with per-group before/after snapshots. Mutations must be
    serialized by the owner; all contained values are immutable."""

    net: LegNet
    initial_net: LegNet
    history: list[UpdateRecord] = field(default_factory=list)
    causal: "CausalGraph | None" = None


def make_session(net: LegNet) -> Session:
    return Session(net=net, initial_net=net)


def _check_unit(value: float, what: str) -> float:
    value = float(value)
    if not np.isfinite(value) or not 0.0 <= value <= 1.0:
        raise InvalidConstraint(f"{what} must lie in [0, 1], got {value!r}")
    return value


def jeffrey_update(cmd: Cmd, event: str, target: float) -> Cmd:
    """Impose a new marginal probability on one event, preserving the
    conditionals given the event and given its negation."""
    target = _check_unit(target, "target probability")
    k = cmd.position(event)
    p_true = prob(cmd, {event: True})
    p_false = 1.0 - p_true
    if target > ZERO_PROB and p_true <= ZERO_PROB:
        raise ImpossibleEvidence(
            f"{event} has no prior probability mass but the target is {target}"
        )
    if target < 1.0 - ZERO_PROB and p_false <= ZERO_PROB:
        raise ImpossibleEvidence(
            f"{event} is certain a priori but the target is {target}"
        )
    idx = np.arange(cmd.cells.size, dtype=np.int64)
    true_side = ((idx >> k) & 1) == 1
    out = np.array(cmd.cells)
    out[true_side] *= 0.0 if p_true <= 0.0 else target / p_true
    out[~true_side] *= 0.0 if p_false <= 0.0 else (1.0 - target) / p_false
    total = out.sum()
    if total > 0.0 and total != 1.0:
        out /= total
    return _cmd(cmd.events, out)


def ipf_project(
    cmd: Cmd,
    constraints: Sequence[tuple[Sequence[str], Cmd]],
    tol: float = IPF_TOL,
    max_iter: int = IPF_MAX_ITER,
) -> Cmd:
    """Project a table onto a set of marginal constraints by cycling over
    them, rescaling cells by target/current on each subset, until every
    constraint holds within ``tol``. Zero cells stay zero; among feasible
    tables the result approaches the one closest (in relative entropy) to
    the input.
    """
    if not constraints:
        return cmd
    prepared: list[tuple[np.ndarray, np.ndarray]] = []
    for subset, target in constraints:
        names = tuple(subset)
        if names != target.events:
            raise MismatchedTables(
                f"constraint subset {names!r} does not match target events {target.events!r}"
            )
        pos = _positions(cmd, names)
        prior_m = marginalize_cells(cmd.cells, pos, len(names))
        infeasible = (prior_m <= ZERO_PROB) & (target.cells > ZERO_PROB)
        if np.any(infeasible):
            raise ImpossibleEvidence(
                f"constraint on {names!r} puts mass on a configuration with zero prior probability"
            )
        prepared.append((pos, np.array(target.cells)))

    cells = np.array(cmd.cells)
    worst = np.inf
    for _ in range(max_iter):
        for pos, tgt in prepared:
            cur = marginalize_cells(cells, pos, tgt.size.bit_length() - 1)
            safe = np.where(cur > 0.0, cur, 1.0)
            ratio = np.where(cur > 0.0, tgt / safe, 0.0)
            cells = rescale_cells(cells, pos, ratio)
        if cells.sum() <= 0.0:
            raise ImpossibleEvidence("constraints eliminated all probability mass")
        worst = 0.0
        for pos, tgt in prepared:
            cur = marginalize_cells(cells, pos, tgt.size.bit_length() - 1)
            worst = max(worst, float(np.max(np.abs(cur - tgt))))
        if worst <= tol:
            break
    else:
        raise NoConvergence(
            f"constraints not satisfied after {max_iter} cycles; worst residual {worst:.3e}",
            {"residual": worst},
        )
    total = cells.sum()
    if total != 1.0:
        cells /= total
    return _cmd(cmd.events, cells)


def _single_event_target(event: str, p: float) -> tuple[tuple[str], Cmd]:
    return (event,), _cmd((event,), np.array([1.0 - p, p]))


def apply_evidence(session: Session, evidence: EvidenceSpec) -> UpdateRecord:
    """Project the source group onto the evidence constraints, then sweep
    outward through the tree: every neighbour whose shared-set marginal no
    longer agrees (beyond 1e-9 per cell) is projected onto the updated
    marginal. Groups that did not change are not recorded and not expanded.
    The session is modified only if the whole update succeeds."""
    leg = session.net.leg(evidence.source_leg)
    if not evidence.constraints:
        raise InvalidConstraint("evidence needs at least one constraint")
    constraints = []
    for name, p in evidence.constraints.items():
        if name not in leg.cmd.events:
            raise UnknownEvent(
                f"event {name!r} is not in leg {leg.id!r}", {"leg": leg.id, "event": name}
            )
        constraints.append(_single_event_target(name, _check_unit(p, f"target for {name}")))

    before_src = leg.cmd
    after_src = ipf_project(before_src, constraints)
    net = session.net.replace_cmd(leg.id, after_src)
    touched = [TouchedLeg(leg.id, before_src, after_src)]
    visited = {leg.id}
    frontier = deque([leg.id])
    while frontier:
        current = frontier.popleft()
        for neighbor in net.neighbors(current):
            if neighbor in visited:
                continue
            visited.add(neighbor)
            shared = net.shared_events(current, neighbor)
            target = marginal(net.leg(current).cmd, shared)
            have = marginal(net.leg(neighbor).cmd, shared)
            if float(np.max(np.abs(target.cells - have.cells))) <= PROPAGATION_TOL:
                continue
            nb_before = net.leg(neighbor).cmd
            nb_after = ipf_project(nb_before, [(shared, target)])
            net = net.replace_cmd(neighbor, nb_after)
            touched.append(TouchedLeg(neighbor, nb_before, nb_after))
            frontier.append(neighbor)

    record = UpdateRecord(
        index=len(session.history) + 1,
        evidence=evidence,
        touched=tuple(touched),
        propagation_order=tuple(t.leg_id for t in touched),
    )
    session.net = net
    session.history.append(record)
    return record


def initialize(session: Session) -> Session:
    """Restore the net as loaded and clear the history. Causal structure is
    knowledge-engineer input and survives."""
    session.net = session.initial_net
    session.history = []
    return session


def snapshots(session: Session, leg_id: str, update_index: int) -> tuple[Cmd, Cmd]:
    """The group's table immediately before and after the given update. If
    the update did not touch the group, both are the prevailing table."""
    session.initial_net.leg(leg_id)
    if not isinstance(update_index, int) or not 1 <= update_index <= len(session.history):
        raise UnknownUpdate(
            f"update {update_index!r} does not exist (history has {len(session.history)})",
            {"update": update_index},
        )

    def prevailing(after_count: int) -> Cmd:
        for record in reversed(session.history[:after_count]):
            for t in record.touched:
                if t.leg_id == leg_id:
                    return t.after
        return session.initial_net.leg(leg_id).cmd

    before = prevailing(update_index - 1)
    record = session.history[update_index - 1]
    after = next((t.after for t in record.touched if t.leg_id == leg_id), before)
    return before, after
