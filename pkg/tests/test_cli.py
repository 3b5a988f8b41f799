from __future__ import annotations

import threading
import time

import pytest
import uvicorn
from click.testing import CliRunner

from axv_explain.cli import main, sim
from axv_explain.service.app import create_app
from axv_explain.sim import gen_demo_mission, load_log


@pytest.fixture(scope="module")
def live_server():
    server = uvicorn.Server(
        uvicorn.Config(create_app(), host="127.0.0.1", port=0, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("server did not start")
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=10)


def test_sim_demo_writes_loadable_log(tmp_path):
    out = tmp_path / "demo.ndjson"
    result = CliRunner().invoke(sim, ["demo", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert load_log(out) == gen_demo_mission()


def test_full_client_flow(live_server, tmp_path):
    runner = CliRunner()
    log_path = tmp_path / "demo.ndjson"
    assert runner.invoke(sim, ["demo", "--out", str(log_path)]).exit_code == 0

    created = runner.invoke(main, ["create", "--target", live_server])
    assert created.exit_code == 0, created.output
    mission = created.output.strip()

    replayed = runner.invoke(
        sim,
        ["replay", "--log", str(log_path), "--speed", "max", "--target", live_server, "--mission", mission],
    )
    assert replayed.exit_code == 0, replayed.output
    assert "delivered 7 events" in replayed.output

    asked = runner.invoke(main, ["ask", "--target", live_server, "--mission", mission, "why is it surfacing"])
    assert asked.exit_code == 0, asked.output
    assert "It is because it needs a GPS fix" in asked.output

    state = runner.invoke(main, ["state", "--target", live_server, "--mission", mission])
    assert state.exit_code == 0
    assert '"clock": 1400.0' in state.output


def test_replay_speed_validation(live_server, tmp_path):
    log_path = tmp_path / "demo.ndjson"
    CliRunner().invoke(sim, ["demo", "--out", str(log_path)])
    result = CliRunner().invoke(
        sim,
        ["replay", "--log", str(log_path), "--speed", "soon", "--target", live_server, "--mission", "x"],
    )
    assert result.exit_code != 0


def test_ask_unknown_mission_fails(live_server):
    result = CliRunner().invoke(main, ["ask", "--target", live_server, "--mission", "zzz", "status"])
    assert result.exit_code == 1
    assert "404" in result.output


def test_serve_addr_parsing():
    from axv_explain.cli import _parse_addr

    assert _parse_addr("127.0.0.1:8000") == ("127.0.0.1", 8000)
    with pytest.raises(Exception):
        _parse_addr("8000")


def test_serve_flag_wins_over_env(monkeypatch):
    import axv_explain.cli as cli

    calls = []
    monkeypatch.setattr(
        cli.uvicorn, "run", lambda app, host, port, log_level: calls.append((host, port))
    )
    runner = CliRunner()
    env = {"AXV_EXPLAIN_ADDR": "10.0.0.1:9999"}
    assert runner.invoke(cli.main, ["serve"], env=env).exit_code == 0
    assert runner.invoke(cli.main, ["serve", "--addr", "127.0.0.1:7777"], env=env).exit_code == 0
    assert calls == [("10.0.0.1", 9999), ("127.0.0.1", 7777)]
