import json
import os

import pytest

from legnet import _kernels

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TRAFFIC_KB_PATH = os.path.join(ROOT, "kb", "traffic.json")

# Cells for the two-leg ticket net used across the suite. The ticket leg
# encodes P(IMPAIRED)=0.05, P(TICKET)=0.09, P(TICKET|IMPAIRED)=0.79.
TICKET_CELLS = [0.8995, 0.0105, 0.0505, 0.0395]
DRUNK_CELLS = [0.78, 0.17, 0.02, 0.03]


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Jit compilation happens here, outside any timed test body.
    _kernels.warmup()


@pytest.fixture(scope="session")
def traffic_kb() -> dict:
    with open(TRAFFIC_KB_PATH, "r", encoding="utf-8") as handle:
        return json.load(handle)


def ticket_kb() -> dict:
    return {
        "events": ["DRUNK", "DRIVER-IMPAIRED", "DRIVER-GETS-A-TICKET"],
        "legs": [
            {
                "id": "DRUNK-LEG",
                "events": ["DRUNK", "DRIVER-IMPAIRED"],
                "cmd": list(DRUNK_CELLS),
            },
            {
                "id": "DRIVER-GETS-A-TICKET-LEG",
                "events": ["DRIVER-IMPAIRED", "DRIVER-GETS-A-TICKET"],
                "cmd": list(TICKET_CELLS),
            },
        ],
        "causal_links": [
            {"from": "DRUNK", "to": "DRIVER-IMPAIRED"},
            {"from": "DRIVER-IMPAIRED", "to": "DRIVER-GETS-A-TICKET"},
        ],
    }


@pytest.fixture
def ticket_kb_doc() -> dict:
    return ticket_kb()
