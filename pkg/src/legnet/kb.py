"""Knowledge-base documents and replayable session archives.

A knowledge base is a UTF-8 JSON document:

    {
      "events": ["A", "B", ...],
      "legs": [{"id": "...", "events": ["A", "B"], "cmd": [..4 numbers..]}],
      "causal_links": [{"from": "A", "to": "B"}]          // optional
    }

``cmd`` cells are little-endian over the leg's event order. An archive is
a knowledge base plus the evidence log and causal links; loading one
replays the evidence, which reproduces the session deterministically.
"""

from __future__ import annotations

import json
from collections.abc import Mapping

from .errors import InconsistentMarginals, ParseError
from .explain import build_causal_graph, set_causal_links
from .table import CONSISTENCY_TOL, Leg, LegNet, build_cmd, check_consistency
from .update import EvidenceSpec, Session, apply_evidence, make_session


def _parse_document(document) -> Mapping:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise ParseError("knowledge base must be a JSON object")
    return document


def load_net(document) -> LegNet:
    """Parse and fully validate a knowledge base: table normalization,
    tree-shaped sharing, pairwise marginal consistency, causal links."""
    doc = _parse_document(document)
    events = doc.get("events")
    if not isinstance(events, list) or not all(isinstance(e, str) and e for e in events):
        raise ParseError("'events' must be a list of non-empty strings")
    raw_legs = doc.get("legs")
    if not isinstance(raw_legs, list) or not raw_legs:
        raise ParseError("'legs' must be a non-empty list")

    legs = []
    for k, item in enumerate(raw_legs):
        if not isinstance(item, Mapping):
            raise ParseError(f"leg #{k} must be an object")
        try:
            leg_id = str(item["id"])
            leg_events = item["events"]
            cells = item["cmd"]
        except KeyError as exc:
            raise ParseError(f"leg #{k} is missing {exc.args[0]!r}") from None
        if not isinstance(leg_events, list):
            raise ParseError(f"leg {leg_id!r}: 'events' must be a list")
        legs.append(Leg(leg_id, build_cmd(leg_events, cells)))

    links = doc.get("causal_links", [])
    if not isinstance(links, list):
        raise ParseError("'causal_links' must be a list")
    net = LegNet(legs, vocabulary=events)
    report = check_consistency(net, CONSISTENCY_TOL)
    if not report.consistent:
        worst = max(report.flagged, key=lambda p: p.max_discrepancy)
        raise InconsistentMarginals(
            f"legs {worst.leg_a!r} and {worst.leg_b!r} disagree on "
            f"{worst.shared!r} by {worst.max_discrepancy:.3e}",
            {
                "pairs": [
                    {"leg_a": p.leg_a, "leg_b": p.leg_b, "discrepancy": p.max_discrepancy}
                    for p in report.flagged
                ]
            },
        )
    graph = build_causal_graph(net, links)
    return LegNet(legs, vocabulary=events, causal_links=graph.links)


def new_session(document) -> Session:
    """Fresh session over a validated knowledge base, with its causal links
    installed."""
    net = load_net(document)
    session = make_session(net)
    set_causal_links(session, net.causal_links)
    return session


def make_archive(kb_document: Mapping, session: Session) -> dict:
    """Replayable snapshot: the knowledge base, the evidence log, and the
    causal links currently in force."""
    links = session.causal.links if session.causal is not None else ()
    return {
        "kb": dict(kb_document),
        "evidence": [
            {
                "leg": record.evidence.source_leg,
                "constraints": dict(record.evidence.constraints),
            }
            for record in session.history
        ],
        "causal_links": [{"from": a, "to": b} for a, b in links],
    }


def session_from_archive(document) -> tuple[Session, dict]:
    """Rebuild a session by replaying an archive; returns the session and
    the embedded knowledge base (for re-archiving)."""
    doc = _parse_document(document)
    if "kb" not in doc:
        raise ParseError("archive is missing 'kb'")
    kb_doc = doc["kb"]
    session = new_session(kb_doc)
    if "causal_links" in doc:
        set_causal_links(session, doc["causal_links"])
    evidence_log = doc.get("evidence", [])
    if not isinstance(evidence_log, list):
        raise ParseError("'evidence' must be a list")
    for k, item in enumerate(evidence_log):
        if not isinstance(item, Mapping) or "leg" not in item or "constraints" not in item:
            raise ParseError(f"evidence entry #{k} needs 'leg' and 'constraints'")
        constraints = {str(name): float(p) for name, p in item["constraints"].items()}
        apply_evidence(session, EvidenceSpec(str(item["leg"]), constraints))
    return session, dict(kb_doc)
