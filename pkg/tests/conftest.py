from __future__ import annotations

import pytest

from axv_explain.fixtures import demo_model
from axv_explain.sim import gen_demo_mission
from axv_explain.state import MissionState, ingest_event, new_state


@pytest.fixture(scope="session")
def demo():
    return demo_model()


@pytest.fixture
def demo_state_at():
    """State of the demo mission after every event up to (and including) t."""

    def at(t: float) -> MissionState:
        state = new_state(0.0)
        for event in gen_demo_mission():
            if event.t <= t:
                state = ingest_event(state, event)
        return state

    return at
