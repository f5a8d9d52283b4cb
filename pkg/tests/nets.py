"""Randomized tree-net construction for property and acceptance tests.

Each net is built from ONE random global joint distribution: the tree
shape is drawn first (a dedicated shared event per tree edge, private
events to fill), then every group's table is marginalized from that joint,
making all shared-set marginals agree by construction.
"""

from __future__ import annotations

import numpy as np

MAX_TOTAL_EVENTS = 12
MAX_LEG_EVENTS = 4
MAX_DEGREE = 3


def random_tree_kb(rng: np.random.Generator, n_legs: int | None = None) -> dict:
    if n_legs is None:
        n_legs = int(rng.integers(3, 9))
    degree = [0] * n_legs
    leg_events: list[list[str]] = [[] for _ in range(n_legs)]
    vocabulary: list[str] = []

    for child in range(1, n_legs):
        candidates = [i for i in range(child) if degree[i] < MAX_DEGREE]
        parent = int(rng.choice(candidates))
        name = f"S{child}"
        vocabulary.append(name)
        leg_events[parent].append(name)
        leg_events[child].append(name)
        degree[parent] += 1
        degree[child] += 1

    for i in range(n_legs):
        if len(vocabulary) >= MAX_TOTAL_EVENTS:
            break
        if len(leg_events[i]) < MAX_LEG_EVENTS:
            name = f"P{i}"
            vocabulary.append(name)
            leg_events[i].append(name)

    joint = rng.random(1 << len(vocabulary)) + 0.01
    joint /= joint.sum()

    legs = []
    indices = np.arange(joint.size, dtype=np.int64)
    for i in range(n_legs):
        positions = [vocabulary.index(name) for name in leg_events[i]]
        proj = np.zeros(joint.size, dtype=np.int64)
        for k, pk in enumerate(positions):
            proj |= ((indices >> pk) & 1) << k
        cells = np.bincount(proj, weights=joint, minlength=1 << len(positions))
        legs.append({"id": f"LEG-{i}", "events": list(leg_events[i]), "cmd": cells.tolist()})

    return {"events": vocabulary, "legs": legs, "causal_links": []}


def random_evidence(rng: np.random.Generator, kb: dict) -> dict:
    leg = kb["legs"][int(rng.integers(0, len(kb["legs"])))]
    count = min(len(leg["events"]), int(rng.integers(1, 3)))
    picked = rng.choice(len(leg["events"]), size=count, replace=False)
    constraints = {
        leg["events"][int(k)]: round(float(rng.uniform(0.05, 0.95)), 6) for k in picked
    }
    return {"leg": leg["id"], "constraints": constraints}
