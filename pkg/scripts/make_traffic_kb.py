#!/usr/bin/env python3
"""Generate kb/traffic.json.

The knowledge base covers a traffic-stop consultation: does the driver get
a ticket at the scene? Every group table is marginalized from one designed
joint distribution over the full vocabulary, so the shared-event marginals
agree exactly. Run from the repository root:

    python scripts/make_traffic_kb.py
"""

from __future__ import annotations

import itertools
import json
import os

EVENTS = [
    "NO-DRINKS",
    "TWO-DRINKS",
    "MORE-DRINKS",
    "DRUNK",
    "VISION-IMPAIRED",
    "DRIVER-IMPAIRED",
    "DRIVER-GETS-A-TICKET",
    "CAR-IMPAIRED",
    "PASSED-INSPECTION",
    "ILLEGAL-EQUIPMENT",
]

# Drinking history is exactly one of the three categories.
P_DRINKS = {(1, 0, 0): 0.55, (0, 1, 0): 0.35, (0, 0, 1): 0.10}
P_DRUNK_GIVEN_DRINKS = {(1, 0, 0): 0.02, (0, 1, 0): 0.30, (0, 0, 1): 0.85}
P_VISION = 0.05
P_IMPAIRED_GIVEN = {(0, 0): 0.01, (1, 0): 0.70, (0, 1): 0.50, (1, 1): 0.90}  # (drunk, vision)
P_PASSED = 0.70
P_ILLEGAL_GIVEN_PASSED = {1: 0.02, 0: 0.20}
P_CAR_GIVEN = {(1, 0): 0.02, (1, 1): 0.50, (0, 0): 0.15, (0, 1): 0.60}  # (passed, illegal)
P_TICKET_GIVEN = {(0, 0): 0.02, (1, 0): 0.65, (0, 1): 0.30, (1, 1): 0.85}  # (impaired, car)

LEGS = [
    ("DRUNK-LEG", ["NO-DRINKS", "TWO-DRINKS", "MORE-DRINKS", "DRUNK"]),
    ("DRIVER-IMPAIRED-LEG", ["DRUNK", "VISION-IMPAIRED", "DRIVER-IMPAIRED"]),
    ("VISION-IMPAIRED-LEG", ["VISION-IMPAIRED"]),
    ("DRIVER-GETS-A-TICKET-LEG", ["DRIVER-IMPAIRED", "CAR-IMPAIRED", "DRIVER-GETS-A-TICKET"]),
    ("CAR-IMPAIRED-LEG", ["CAR-IMPAIRED", "PASSED-INSPECTION", "ILLEGAL-EQUIPMENT"]),
]

CAUSAL_LINKS = [
    ("NO-DRINKS", "DRUNK"),
    ("TWO-DRINKS", "DRUNK"),
    ("MORE-DRINKS", "DRUNK"),
    ("DRUNK", "DRIVER-IMPAIRED"),
    ("VISION-IMPAIRED", "DRIVER-IMPAIRED"),
    ("DRIVER-IMPAIRED", "DRIVER-GETS-A-TICKET"),
    ("CAR-IMPAIRED", "DRIVER-GETS-A-TICKET"),
    ("PASSED-INSPECTION", "CAR-IMPAIRED"),
    ("ILLEGAL-EQUIPMENT", "CAR-IMPAIRED"),
]


def joint_probability(a: dict[str, int]) -> float:
    drinks = (a["NO-DRINKS"], a["TWO-DRINKS"], a["MORE-DRINKS"])
    if drinks not in P_DRINKS:
        return 0.0
    p = P_DRINKS[drinks]

    p_drunk = P_DRUNK_GIVEN_DRINKS[drinks]
    p *= p_drunk if a["DRUNK"] else 1.0 - p_drunk
    p *= P_VISION if a["VISION-IMPAIRED"] else 1.0 - P_VISION

    p_imp = P_IMPAIRED_GIVEN[(a["DRUNK"], a["VISION-IMPAIRED"])]
    p *= p_imp if a["DRIVER-IMPAIRED"] else 1.0 - p_imp

    p *= P_PASSED if a["PASSED-INSPECTION"] else 1.0 - P_PASSED
    p_ill = P_ILLEGAL_GIVEN_PASSED[a["PASSED-INSPECTION"]]
    p *= p_ill if a["ILLEGAL-EQUIPMENT"] else 1.0 - p_ill
    p_car = P_CAR_GIVEN[(a["PASSED-INSPECTION"], a["ILLEGAL-EQUIPMENT"])]
    p *= p_car if a["CAR-IMPAIRED"] else 1.0 - p_car

    p_ticket = P_TICKET_GIVEN[(a["DRIVER-IMPAIRED"], a["CAR-IMPAIRED"])]
    p *= p_ticket if a["DRIVER-GETS-A-TICKET"] else 1.0 - p_ticket
    return p


def build_document() -> dict:
    joint: list[tuple[dict[str, int], float]] = []
    for bits in itertools.product((0, 1), repeat=len(EVENTS)):
        assignment = dict(zip(EVENTS, bits))
        p = joint_probability(assignment)
        if p > 0.0:
            joint.append((assignment, p))

    legs = []
    for leg_id, leg_events in LEGS:
        cells = [0.0] * (1 << len(leg_events))
        for assignment, p in joint:
            index = 0
            for k, name in enumerate(leg_events):
                index |= assignment[name] << k
            cells[index] += p
        legs.append({"id": leg_id, "events": leg_events, "cmd": cells})

    return {
        "events": EVENTS,
        "legs": legs,
        "causal_links": [{"from": a, "to": b} for a, b in CAUSAL_LINKS],
    }


def main() -> None:
    document = build_document()
    out_dir = os.path.join(os.path.dirname(__file__), "..", "kb")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.normpath(os.path.join(out_dir, "traffic.json"))
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2)
        handle.write("\n")
    total = sum(sum(leg["cmd"]) for leg in document["legs"])
    print(f"wrote {path} ({len(document['legs'])} legs, total mass per leg = {total / len(document['legs'])!r})")


if __name__ == "__main__":
    main()
