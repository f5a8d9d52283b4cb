"""Explanation generation: local, whole-history, and causal-chain scopes.

A local explanation accounts for a hypothesis's change across one update
using only events that share its group, ranked by the effect measure. The
history scope emits one clause per update that moved the hypothesis. The
global scope walks designated causal links step by step, taking the
strongest-effect candidate at each stage, and stops at an event the
focused update constrained outright ("X occurred" / "X was ruled out").

Rendering is deterministic template fill-in at two detail levels; numbers
print with exactly two decimals, ties rounding away from zero.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

from .effect import EFFECT_EPS, rank_explainers
from .errors import (
    CyclicCausalGraph,
    EndpointsShareNoLeg,
    FilterExhausted,
    FilterRequired,
    InvalidQuery,
    UnknownEvent,
    UnknownUpdate,
)
from .table import Cmd, LegNet
from .update import Session, UpdateRecord, prob, snapshots

HARD_EVIDENCE_TOL = 1e-9
ALL_HISTORY = "all"


class Scope(str, Enum):
    LOCAL = "local"
    GLOBAL = "global"


class Filter(str, Enum):
    NONE = "none"
    CAUSAL = "causal"
    DIAGNOSTIC = "diagnostic"


class Detail(str, Enum):
    USER = "user"
    KNOWLEDGE_ENGINEER = "ke"


class Direction(str, Enum):
    INCREASED = "increased"
    DECREASED = "decreased"
    UNCHANGED = "unchanged"


@dataclass(frozen=True)
class CausalGraph:
    """Directed cause -> symptom links; control information for the
    explanation process only, never for updating."""

    links: tuple[tuple[str, str], ...] = ()

    def causes_of(self, event: str) -> tuple[str, ...]:
        return tuple(c for c, s in self.links if s == event)

    def symptoms_of(self, event: str) -> tuple[str, ...]:
        return tuple(s for c, s in self.links if c == event)


def _normalize_links(links: Iterable) -> list[tuple[str, str]]:
    out = []
    for link in links:
        if isinstance(link, Mapping):
            try:
                out.append((str(link["from"]), str(link["to"])))
            except KeyError:
                raise InvalidQuery("causal link objects need 'from' and 'to'") from None
        else:
            a, b = link
            out.append((str(a), str(b)))
    return out


def build_causal_graph(net: LegNet, links: Iterable) -> CausalGraph:
    """Validate links against a net: endpoints known, co-located in at
    least one group, and no directed cycle."""
    normalized = _normalize_links(links)
    vocabulary = set(net.vocabulary)
    for cause, symptom in normalized:
        for name in (cause, symptom):
            if name not in vocabulary:
                raise UnknownEvent(f"unknown event {name!r} in causal link", {"event": name})
        if cause == symptom:
            raise CyclicCausalGraph(f"self-link on {cause!r}")
        if not any(
            cause in leg.cmd.events and symptom in leg.cmd.events for leg in net.legs
        ):
            raise EndpointsShareNoLeg(
                f"{cause!r} and {symptom!r} never share a leg",
                {"from": cause, "to": symptom},
            )
    successors: dict[str, list[str]] = {}
    for cause, symptom in normalized:
        successors.setdefault(cause, []).append(symptom)
    state: dict[str, int] = {}

    def visit(node: str, trail: list[str]) -> None:
        state[node] = 1
        for nxt in successors.get(node, ()):
            if state.get(nxt) == 1:
                raise CyclicCausalGraph(
                    "causal links form a cycle: " + " -> ".join(trail + [node, nxt])
                )
            if state.get(nxt, 0) == 0:
                visit(nxt, trail + [node])
        state[node] = 2

    for node in list(successors):
        if state.get(node, 0) == 0:
            visit(node, [])
    return CausalGraph(tuple(normalized))


def set_causal_links(session: Session, links: Iterable) -> CausalGraph:
    graph = build_causal_graph(session.net, links)
    session.causal = graph
    return graph


@dataclass(frozen=True)
class ExplanationQuery:
    hypothesis: str
    context_leg: str
    scope: Scope = Scope.LOCAL
    filter: Filter = Filter.NONE
    detail: Detail = Detail.USER
    when: int | str | None = None   # update index, ALL_HISTORY, or None for the latest


@dataclass(frozen=True)
class Clause:
    explainer: str
    direction: Direction
    reported_correlation: float
    hypothesis_before: float
    hypothesis_after: float
    explainer_before: float
    explainer_after: float
    source_leg: str
    update_index: int
    hard_evidence: str | None = None   # "occurred" | "was ruled out"


@dataclass(frozen=True)
class Explanation:
    hypothesis: str
    direction: Direction
    kind: str                          # "local" | "historical" | "global"
    hypothesis_before: float
    hypothesis_after: float
    clauses: tuple[Clause, ...]


def _direction(delta: float) -> Direction:
    if abs(delta) <= EFFECT_EPS:
        return Direction.UNCHANGED
    return Direction.INCREASED if delta > 0 else Direction.DECREASED


def _resolve_index(session: Session, when: int | str | None) -> int:
    if when is None:
        if not session.history:
            raise UnknownUpdate("no evidence has been asserted yet")
        return len(session.history)
    index = int(when)
    if not 1 <= index <= len(session.history):
        raise UnknownUpdate(
            f"update {index} does not exist (history has {len(session.history)})",
            {"update": index},
        )
    return index


def _graph(session: Session) -> CausalGraph:
    return session.causal if session.causal is not None else CausalGraph()


def _allowed(session: Session, filter_: Filter, hypothesis: str) -> set[str] | None:
    if filter_ is Filter.NONE:
        return None
    graph = _graph(session)
    if filter_ is Filter.CAUSAL:
        return set(graph.causes_of(hypothesis))
    return set(graph.symptoms_of(hypothesis))


def _exhausted(hypothesis: str, filter_: Filter) -> FilterExhausted:
    if filter_ is Filter.CAUSAL:
        what = f"designated cause of {hypothesis}"
    elif filter_ is Filter.DIAGNOSTIC:
        what = f"designated symptom of {hypothesis}"
    else:
        what = f"event sharing a group with {hypothesis}"
    return FilterExhausted(
        f"Cannot explain the change in {hypothesis}: no {what} has a supporting effect.",
        {"hypothesis": hypothesis, "filter": filter_.value},
    )


def _validate_hypothesis(session: Session, query: ExplanationQuery):
    leg = session.net.leg(query.context_leg)
    if query.hypothesis not in leg.cmd.events:
        raise UnknownEvent(
            f"event {query.hypothesis!r} is not in leg {leg.id!r}",
            {"leg": leg.id, "event": query.hypothesis},
        )
    return leg


def _top_clause(session, query, before: Cmd, after: Cmd, index: int) -> Clause | None:
    h = query.hypothesis
    allowed = _allowed(session, query.filter, h)
    ranked = rank_explainers(before, after, h, allowed, update_index=index)
    if not ranked:
        return None
    top = ranked[0]
    return Clause(
        explainer=top.explainer,
        direction=_direction(top.delta_e),
        reported_correlation=top.reported_correlation,
        hypothesis_before=prob(before, {h: True}),
        hypothesis_after=prob(after, {h: True}),
        explainer_before=prob(before, {top.explainer: True}),
        explainer_after=prob(after, {top.explainer: True}),
        source_leg=session.history[index - 1].evidence.source_leg,
        update_index=index,
    )


def explain_local(session: Session, query: ExplanationQuery) -> Explanation:
    """Explain the hypothesis's change across one update using only events
    of its own group."""
    index = _resolve_index(session, query.when)
    leg = _validate_hypothesis(session, query)
    before, after = snapshots(session, leg.id, index)
    h = query.hypothesis
    h_before = prob(before, {h: True})
    h_after = prob(after, {h: True})
    if abs(h_after - h_before) <= EFFECT_EPS:
        return Explanation(h, Direction.UNCHANGED, "local", h_before, h_after, ())
    clause = _top_clause(session, query, before, after, index)
    if clause is None:
        raise _exhausted(h, query.filter)
    return Explanation(h, _direction(h_after - h_before), "local", h_before, h_after, (clause,))


def explain_history(session: Session, query: ExplanationQuery) -> Explanation:
    """Summarize the effect of every update so far on the hypothesis: one
    clause per update that moved it, in update order."""
    if not session.history:
        raise UnknownUpdate("no evidence has been asserted yet")
    leg = _validate_hypothesis(session, query)
    h = query.hypothesis
    clauses = []
    for index in range(1, len(session.history) + 1):
        before, after = snapshots(session, leg.id, index)
        if abs(prob(after, {h: True}) - prob(before, {h: True})) <= EFFECT_EPS:
            continue
        clause = _top_clause(session, query, before, after, index)
        if clause is not None:
            clauses.append(clause)
    initial = prob(snapshots(session, leg.id, 1)[0], {h: True})
    current = prob(session.net.leg(leg.id).cmd, {h: True})
    direction = _direction(current - initial)
    if not clauses:
        if direction is Direction.UNCHANGED:
            return Explanation(h, direction, "historical", initial, current, ())
        raise _exhausted(h, query.filter)
    return Explanation(h, direction, "historical", initial, current, tuple(clauses))


def _constraining_record(
    session: Session, event: str, index: int | None
) -> UpdateRecord | None:
    if index is not None:
        record = session.history[index - 1]
        return record if event in record.evidence.constraints else None
    for record in reversed(session.history):
        if event in record.evidence.constraints:
            return record
    return None


def explain_global(session: Session, query: ExplanationQuery) -> Explanation:
    """Chain local steps along the causal structure: at each stage pick the
    strongest filtered candidate among every group containing the current
    event, then continue from that candidate. The chain ends when no
    candidate passes or when it reaches an event the evidence fixed
    outright."""
    if query.filter is Filter.NONE:
        raise FilterRequired(
            "Global explanations require the causal or diagnostic filter."
        )
    if query.when == ALL_HISTORY:
        if not session.history:
            raise UnknownUpdate("no evidence has been asserted yet")
        focused: int | None = None
    else:
        focused = _resolve_index(session, query.when)

    def window(leg_id: str) -> tuple[Cmd, Cmd]:
        if focused is None:
            return session.initial_net.leg(leg_id).cmd, session.net.leg(leg_id).cmd
        return snapshots(session, leg_id, focused)

    leg = _validate_hypothesis(session, query)
    h = query.hypothesis
    ctx_before, ctx_after = window(leg.id)
    h_before = prob(ctx_before, {h: True})
    h_after = prob(ctx_after, {h: True})
    if abs(h_after - h_before) <= EFFECT_EPS:
        return Explanation(h, Direction.UNCHANGED, "global", h_before, h_after, ())

    graph = _graph(session)
    fallback_record = (
        session.history[focused - 1] if focused is not None else session.history[-1]
    )
    visited = {h}
    clauses: list[Clause] = []
    current = h
    while True:
        step_filter = (
            graph.causes_of(current)
            if query.filter is Filter.CAUSAL
            else graph.symptoms_of(current)
        )
        allowed = set(step_filter) - visited
        best = None
        best_leg = None
        if allowed:
            for lg in session.net.legs:
                if current not in lg.cmd.events:
                    continue
                before, after = window(lg.id)
                for breakdown in rank_explainers(before, after, current, allowed):
                    if best is None or breakdown.effect > best.effect:
                        best = breakdown
                        best_leg = lg.id
        if best is None:
            if not clauses:
                raise _exhausted(h, query.filter)
            break
        before, after = window(best_leg)
        explainer = best.explainer
        posterior = prob(after, {explainer: True})
        constraining = _constraining_record(session, explainer, focused)
        hard = None
        if constraining is not None:
            if abs(posterior - 1.0) <= HARD_EVIDENCE_TOL:
                hard = "occurred"
            elif posterior <= HARD_EVIDENCE_TOL:
                hard = "was ruled out"
        record = constraining if hard is not None else fallback_record
        clauses.append(
            Clause(
                explainer=explainer,
                direction=_direction(best.delta_e),
                reported_correlation=best.reported_correlation,
                hypothesis_before=prob(before, {current: True}),
                hypothesis_after=prob(after, {current: True}),
                explainer_before=prob(before, {explainer: True}),
                explainer_after=posterior,
                source_leg=record.evidence.source_leg,
                update_index=record.index,
                hard_evidence=hard,
            )
        )
        if hard is not None:
            break
        visited.add(explainer)
        current = explainer
    return Explanation(
        h, _direction(h_after - h_before), "global", h_before, h_after, tuple(clauses)
    )


def explain(session: Session, query: ExplanationQuery) -> Explanation:
    """Dispatch on scope and temporal extent."""
    if query.scope is Scope.GLOBAL:
        return explain_global(session, query)
    if query.when == ALL_HISTORY:
        return explain_history(session, query)
    return explain_local(session, query)


# -- rendering ----------------------------------------------------------------

def format_probability(x: float) -> str:
    """Exactly two decimals, ties away from zero."""
    quantized = Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    text = format(quantized, "f")
    return "0.00" if text == "-0.00" else text


def _sign_word(value: float) -> str:
    return "positively" if value > 0 else "negatively"


def _from_to(before: float, after: float) -> str:
    return f" (from {format_probability(before)} to {format_probability(after)})"


def _render_local(expl: Explanation, ke: bool) -> str:
    clause = expl.clauses[0]
    prefix = ""
    if ke:
        prefix = (
            f"Events {expl.hypothesis} and {clause.explainer} are "
            f"{_sign_word(clause.reported_correlation)} correlated "
            f"(P{{{expl.hypothesis} | {clause.explainer}}} - P{{{expl.hypothesis}}}"
            f" = {format_probability(clause.reported_correlation)}). "
        )
    text = f"The probability of {expl.hypothesis} {expl.direction.value}"
    if ke:
        text += _from_to(expl.hypothesis_before, expl.hypothesis_after)
    text += f" because the probability of {clause.explainer} {clause.direction.value}"
    if ke:
        text += _from_to(clause.explainer_before, clause.explainer_after)
    text += f" after the update of {clause.source_leg}."
    return prefix + text


def _render_historical(expl: Explanation, ke: bool) -> str:
    prefix = ""
    if ke:
        parts = []
        previous_sign = None
        for clause in expl.clauses:
            sign = _sign_word(clause.reported_correlation)
            item = f"with {clause.explainer} ({format_probability(clause.reported_correlation)})"
            if previous_sign is None:
                parts.append(f"{sign} correlated {item}")
            elif sign == previous_sign:
                parts.append(f"and {item}")
            else:
                parts.append(f"and {sign} correlated {item}")
            previous_sign = sign
        prefix = f"{expl.hypothesis} is " + " ".join(parts) + ". "
    text = f"The probability of {expl.hypothesis} {expl.direction.value}"
    if ke:
        text += _from_to(expl.hypothesis_before, expl.hypothesis_after)
    pieces = []
    for clause in expl.clauses:
        piece = f"because the probability of {clause.explainer} {clause.direction.value}"
        if ke:
            piece += _from_to(clause.explainer_before, clause.explainer_after)
        piece += f" after the update of the {clause.source_leg}"
        pieces.append(piece)
    text += " " + ", and ".join(pieces) + "."
    return prefix + text


def _render_global(expl: Explanation, ke: bool) -> str:
    prefix = ""
    if ke:
        parts = []
        subject = expl.hypothesis
        for k, clause in enumerate(expl.clauses):
            sign = _sign_word(clause.reported_correlation)
            corr = format_probability(clause.reported_correlation)
            if k == 0:
                parts.append(f"{subject} is {sign} correlated ({corr}) with {clause.explainer}")
            else:
                parts.append(f"which is {sign} correlated ({corr}) with {clause.explainer}")
        prefix = ", ".join(parts) + ". "
    text = f"The probability of {expl.hypothesis} {expl.direction.value}"
    if ke:
        text += _from_to(expl.hypothesis_before, expl.hypothesis_after)
    pieces = []
    for clause in expl.clauses:
        if not ke and clause.hard_evidence is not None:
            pieces.append(f"because {clause.explainer} {clause.hard_evidence}")
            continue
        piece = f"because the probability of {clause.explainer} {clause.direction.value}"
        if ke:
            piece += _from_to(clause.explainer_before, clause.explainer_after)
        pieces.append(piece)
    text += " " + ", ".join(pieces)
    text += f" after the update of {expl.clauses[-1].source_leg}."
    return prefix + text


def render(expl: Explanation, detail: Detail = Detail.USER) -> str:
    """Deterministic template text for an explanation at the given detail
    level; identical inputs yield identical bytes."""
    if expl.direction is Direction.UNCHANGED or not expl.clauses:
        return f"The probability of {expl.hypothesis} did not change."
    ke = detail is Detail.KNOWLEDGE_ENGINEER
    if expl.kind == "local":
        return _render_local(expl, ke)
    if expl.kind == "historical":
        return _render_historical(expl, ke)
    return _render_global(expl, ke)


def explanation_to_dict(expl: Explanation) -> dict:
    """Stable JSON-ready structure (shared by the CLI and the service)."""
    return {
        "hypothesis": expl.hypothesis,
        "direction": expl.direction.value,
        "kind": expl.kind,
        "hypothesis_before": expl.hypothesis_before,
        "hypothesis_after": expl.hypothesis_after,
        "clauses": [
            {
                "explainer": c.explainer,
                "direction": c.direction.value,
                "reported_correlation": c.reported_correlation,
                "hypothesis_before": c.hypothesis_before,
                "hypothesis_after": c.hypothesis_after,
                "explainer_before": c.explainer_before,
                "explainer_after": c.explainer_after,
                "source_leg": c.source_leg,
                "update_index": c.update_index,
                "hard_evidence": c.hard_evidence,
            }
            for c in expl.clauses
        ],
    }


def parse_query(body: Mapping, default_detail: Detail = Detail.USER) -> ExplanationQuery:
    """Build a query from a JSON-style mapping (service and CLI wire form)."""
    try:
        hypothesis = str(body["hypothesis"])
        context_leg = str(body.get("context_leg") or body["leg"])
    except KeyError as exc:
        raise InvalidQuery(f"missing field {exc.args[0]!r} in explanation query") from None
    try:
        scope = Scope(body.get("scope", Scope.LOCAL.value))
        filter_ = Filter(body.get("filter", Filter.NONE.value))
        detail = Detail(body.get("detail", default_detail.value))
    except ValueError as exc:
        raise InvalidQuery(str(exc)) from None
    when = body.get("when")
    if when is not None and when != ALL_HISTORY:
        try:
            when = int(when)
        except (TypeError, ValueError):
            raise InvalidQuery(f"bad 'when' value {when!r}") from None
    return ExplanationQuery(hypothesis, context_leg, scope, filter_, detail, when)
