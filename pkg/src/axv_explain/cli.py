"""Command-line entry points.

`axv-explain` runs the service and offers thin HTTP-client commands for
scripting against it; `axv-sim` writes and replays mission logs. Everything
the clients do goes through the public HTTP API — no shortcuts into the
engine.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import httpx
import uvicorn

from .fixtures import demo_model_source
from .service.app import create_app
from .sim import dump_log, gen_demo_mission, load_log, replay


def _parse_addr(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise click.BadParameter(f"expected HOST:PORT, got {addr!r}")
    return host, int(port)


@click.group()
def main():
    """AxV explanation service and client."""


@main.command()
@click.option(
    "--addr",
    envvar="AXV_EXPLAIN_ADDR",
    default="127.0.0.1:8000",
    show_default=True,
    help="Listen address as HOST:PORT (flag wins over AXV_EXPLAIN_ADDR).",
)
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None, help="Built frontend to serve at /.")
@click.option(
    "--transcript-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Append each answer to an NDJSON transcript per mission.",
)
def serve(addr: str, ui_dir: str | None, transcript_dir: str | None):
    """Run the explanation service."""
    host, port = _parse_addr(addr)
    app = create_app(ui_dir=ui_dir, transcript_dir=transcript_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.option("--target", default="http://127.0.0.1:8000", show_default=True)
@click.option(
    "--model",
    "model_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Model DSL file; defaults to the bundled demo model.",
)
@click.option("--mode", type=click.Choice(["complete", "sound"]), default="complete", show_default=True)
@click.option("--threshold", type=float, default=0.8, show_default=True)
@click.option("--show-numbers/--no-show-numbers", default=True, show_default=True)
def create(target: str, model_path: Path | None, mode: str, threshold: float, show_numbers: bool):
    """Create a mission session; prints the mission id."""
    source = model_path.read_text(encoding="utf-8") if model_path else demo_model_source()
    resp = httpx.post(
        f"{target}/api/missions",
        json={
            "model": source,
            "policy": {"mode": mode, "threshold": threshold},
            "show_numbers": show_numbers,
        },
        timeout=10.0,
    )
    if resp.status_code != 200:
        click.echo(f"error: {resp.status_code} {resp.text}", err=True)
        sys.exit(1)
    body = resp.json()
    for warning in body.get("warnings", []):
        click.echo(f"warning: {warning}", err=True)
    click.echo(body["mission_id"])


@main.command()
@click.option("--target", default="http://127.0.0.1:8000", show_default=True)
@click.option("--mission", "mission_id", required=True)
@click.argument("question")
def ask(target: str, mission_id: str, question: str):
    """Ask the mission a question; prints the answer."""
    resp = httpx.post(
        f"{target}/api/missions/{mission_id}/ask", json={"text": question}, timeout=10.0
    )
    if resp.status_code != 200:
        click.echo(f"error: {resp.status_code} {resp.text}", err=True)
        sys.exit(1)
    body = resp.json()
    click.echo(body["answer"])
    for item in body["items"]:
        click.echo(f"  - {item['id']}: {item['probability']:.2f} ({item['band']}) {item['text']}")


@main.command()
@click.option("--target", default="http://127.0.0.1:8000", show_default=True)
@click.option("--mission", "mission_id", required=True)
def state(target: str, mission_id: str):
    """Print the mission's current state snapshot."""
    resp = httpx.get(f"{target}/api/missions/{mission_id}/state", timeout=10.0)
    if resp.status_code != 200:
        click.echo(f"error: {resp.status_code} {resp.text}", err=True)
        sys.exit(1)
    click.echo(json.dumps(resp.json(), indent=2, sort_keys=True))


@click.group()
def sim():
    """Mission log tools: write the demo log, replay logs into the service."""


@sim.command("demo")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
def sim_demo(out: Path):
    """Write the canned demo mission log."""
    out.write_text(dump_log(gen_demo_mission()), encoding="utf-8")
    click.echo(f"wrote {out}")


@sim.command("replay")
@click.option("--log", "log_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--speed", default="1", show_default=True, help="Replay speed factor, or 'max'.")
@click.option("--target", default="http://127.0.0.1:8000", show_default=True)
@click.option("--mission", "mission_id", required=True)
def sim_replay(log_path: Path, speed: str, target: str, mission_id: str):
    """Replay a mission log into a service session at scaled time."""
    if speed == "max":
        factor = math.inf
    else:
        try:
            factor = float(speed)
        except ValueError:
            raise click.BadParameter("--speed must be a positive number or 'max'")
    events = load_log(log_path)
    url = f"{target}/api/missions/{mission_id}/events"

    def sink(event):
        resp = httpx.post(
            url, json={"t": event.t, "kind": event.kind, "data": dict(event.payload)}, timeout=10.0
        )
        if resp.status_code != 200:
            raise RuntimeError(f"{resp.status_code} {resp.text}")

    report = replay(events, factor, sink)
    click.echo(f"delivered {report.delivered} events in {report.wall_seconds:.2f}s")


if __name__ == "__main__":
    main()
