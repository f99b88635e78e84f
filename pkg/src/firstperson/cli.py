"""Command-line interface: record, verify, report, project, replay, export,
schema dump, and serving the HTTP services.

Exit codes: 0 success; 1 unexpected error; 2 usage; 3 invalid
config/scenario; 4 chain tampered; 5 chain gap; 6 not found; 7 unreachable
configuration target. Failures also emit one machine-readable JSON object
on stderr.
"""

from __future__ import annotations

import json
import sys
import time
import zipfile
from pathlib import Path
from typing import Any

import click

from .integrity import AttestationService, HttpAttestationClient, verify_chain
from .model.config import default_config, merge_config, validate_config
from .model.documents import ConsentRegistry
from .model.schemas import dump_schemas
from .model.streams import StreamId
from .rates import projection_table, project_recording_days, rate_report
from .recorder import record_session
from .sim.base import ConfigurationError
from .sim.scenario import ScenarioError, load_scenario, make_demo_scenario, parse_scenario
from .store import SessionNotFound, SessionReader, SessionStore

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_TAMPERED = 4
EXIT_GAP = 5
EXIT_NOT_FOUND = 6
EXIT_CONFIG = 7


def _fail(code: int, kind: str, message: str, extra: dict[str, Any] | None = None) -> None:
    payload = {"error": {"code": code, "kind": kind, "message": message}}
    if extra:
        payload["error"].update(extra)
    click.echo(json.dumps(payload), err=True)
    sys.exit(code)


def _print_rate_table(report_jsonable: dict[str, Any]) -> None:
    click.echo(f"{'stream':<20} {'KB/s':>12} {'target KB/s':>12} {'bytes':>14}")
    for stream, row in report_jsonable["per_stream"].items():
        click.echo(f"{stream:<20} {row['kb_s']:>12.3f} {row['target_kb_s']:>12.3f} {row['bytes']:>14}")
    click.echo(f"{'total':<20} {report_jsonable['total_kb_s']:>12.3f} {'':>12} {report_jsonable['total_bytes']:>14}")
    click.echo(
        f"per 16-hour day: {report_jsonable['extrapolated_full_day_gb']:.2f} GB full profile, "
        f"{report_jsonable['extrapolated_text_day_gb']:.3f} GB text profile"
    )


def _load_session(session_dir: str) -> SessionReader:
    path = Path(session_dir)
    if not (path / "manifest.json").exists():
        _fail(EXIT_NOT_FOUND, "not-found", f"no manifest.json under {session_dir}")
    return SessionReader(path)


@click.group()
def main() -> None:
    """Operate the simulated first-person recorder."""


@main.command()
@click.option("--scenario", "scenario_file", type=click.Path(exists=True, dir_okay=False), help="Scenario JSON; defaults to the bundled demo timeline.")
@click.option("--duration", type=float, help="Session length in seconds (overrides the scenario).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True, help="Directory that will hold <session-id>/ and attestation-store/.")
@click.option("--virtual-clock/--real-time", default=True, show_default=True, help="Run faster than real time or pace against the wall clock.")
@click.option("--seed", type=int, default=None, help="Scenario seed override.")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="Session config JSON (partial; merged onto defaults).")
@click.option("--service", "service_url", help="Attestation service URL; default is a local in-process store.")
def record(scenario_file: str | None, duration: float | None, out_dir: str, virtual_clock: bool, seed: int | None, config_file: str | None, service_url: str | None) -> None:
    """Run one full session end-to-end and print its manifest path and rates."""
    overrides = None
    if config_file:
        overrides = json.loads(Path(config_file).read_text(encoding="utf-8"))
    config = merge_config(overrides)
    violations = validate_config(config)
    if violations:
        _fail(EXIT_INVALID, "invalid-config", "config rejected", {"violations": [v.to_jsonable() for v in violations]})

    duration_ms = int(duration * 1000) if duration else None
    try:
        if scenario_file:
            scenario = load_scenario(scenario_file)
            raw = scenario.to_jsonable()
            if seed is not None:
                raw["seed"] = seed
            if duration_ms:
                raw["duration_ms"] = duration_ms
                raw["events"] = [e for e in raw["events"] if e["at_ms"] + e.get("span_ms", e.get("duration_ms", 0)) <= duration_ms]
            scenario = parse_scenario(raw)
        else:
            scenario = make_demo_scenario(seed=seed if seed is not None else 0, duration_ms=duration_ms or 60_000)
    except ScenarioError as exc:
        _fail(EXIT_INVALID, "invalid-scenario", "scenario rejected", {"problems": exc.problems})

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    attestation = HttpAttestationClient(service_url) if service_url else AttestationService(out / "attestation-store")
    store = SessionStore(out)
    registry_path = out / "consent.json"
    registry = (
        ConsentRegistry.from_jsonable(json.loads(registry_path.read_text(encoding="utf-8")))
        if registry_path.exists()
        else ConsentRegistry()
    )
    started = time.time()
    try:
        result = record_session(store, config, scenario, attestation, registry=registry, realtime=not virtual_clock)
    except ConfigurationError as exc:
        _fail(EXIT_CONFIG, "configuration", str(exc))
    click.echo(result.manifest_path)
    report = result.rate_report.to_jsonable()
    _print_rate_table(report)
    click.echo(f"recorded {result.run_report.duration_ms} ms in {time.time() - started:.1f} s wall time")
    click.echo(json.dumps(report))


@main.command()
@click.option("--session", "session_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--service", "service_url", help="Attestation service URL.")
@click.option("--local-store", "local_store", type=click.Path(file_okay=False), help="Directory holding the attestation service's records.")
def verify(session_dir: str, service_url: str | None, local_store: str | None) -> None:
    """Check the session's hash chain; exit 0 only when it is Valid."""
    if bool(service_url) == bool(local_store):
        _fail(EXIT_USAGE, "usage", "exactly one of --service or --local-store is required")
    client = HttpAttestationClient(service_url) if service_url else AttestationService(local_store)
    verdict = verify_chain(session_dir, client)
    click.echo(str(verdict))
    click.echo(json.dumps(verdict.to_jsonable()))
    if verdict.kind == "tampered":
        sys.exit(EXIT_TAMPERED)
    if verdict.kind == "gap":
        sys.exit(EXIT_GAP)


@main.command()
@click.option("--session", "session_dir", type=click.Path(exists=True, file_okay=False), required=True)
def report(session_dir: str) -> None:
    """Print a session's achieved and projected data rates."""
    reader = _load_session(session_dir)
    try:
        rates = rate_report(reader)
    except ValueError as exc:
        _fail(EXIT_INVALID, "invalid-session", str(exc))
    jsonable = rates.to_jsonable()
    _print_rate_table(jsonable)
    click.echo(json.dumps(jsonable))


@main.command()
@click.option("--target-gb", type=float, help="Training-data volume to project.")
@click.option("--mode", type=click.Choice(["full", "text"]), help="Accounting profile.")
@click.option("--table3", "table", is_flag=True, help="Print the standard projection table (three model scales, both profiles).")
def project(target_gb: float | None, mode: str | None, table: bool) -> None:
    """Days of recording needed to reach a data volume."""
    if table:
        rows = projection_table()
        click.echo(f"{'model':<8} {'target GB':>12} {'days (full)':>14} {'days (text)':>14}")
        for row in rows:
            click.echo(f"{row['model']:<8} {row['target_gb']:>12.1f} {row['days_full']:>14.4g} {row['days_text']:>14.4g}")
        click.echo(json.dumps(rows))
        return
    if target_gb is None or mode is None:
        _fail(EXIT_USAGE, "usage", "either --table3 or both --target-gb and --mode are required")
    if target_gb <= 0:
        _fail(EXIT_USAGE, "usage", "--target-gb must be positive")
    projection = project_recording_days(target_gb, mode)
    click.echo(f"{projection.days:.4g} days at {projection.daily_gb:.4g} GB/day ({mode} profile)")
    click.echo(json.dumps(projection.to_jsonable()))


@main.command()
@click.option("--session", "session_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--speed", type=float, default=0.0, show_default=True, help="Playback speed multiplier; 0 replays as fast as possible.")
@click.option("--streams", "streams_csv", help="Comma-separated stream ids; default all.")
def replay(session_dir: str, speed: float, streams_csv: str | None) -> None:
    """Re-emit a session's envelopes to stdout as JSON lines, in time order."""
    reader = _load_session(session_dir)
    streams = None
    if streams_csv:
        try:
            streams = [StreamId(name.strip()) for name in streams_csv.split(",") if name.strip()]
        except ValueError as exc:
            _fail(EXIT_NOT_FOUND, "not-found", f"unknown stream: {exc}")
    samples = reader.query(streams)
    last_t = None
    for sample in samples:
        if speed > 0 and last_t is not None and sample["t_ms"] > last_t:
            time.sleep((sample["t_ms"] - last_t) / 1000.0 / speed)
        last_t = sample["t_ms"]
        click.echo(json.dumps(sample, sort_keys=True, separators=(",", ":")))


@main.command()
@click.option("--session", "session_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False), required=True)
def export(session_dir: str, out_file: str) -> None:
    """Zip a session directory (manifest, segments, media, scenario)."""
    _load_session(session_dir)
    session_path = Path(session_dir)
    out_path = Path(out_file)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(out_path, "w", compression=zipfile.ZIP_DEFLATED) as archive:
        for path in sorted(session_path.rglob("*")):
            if path.is_file():
                archive.write(path, path.relative_to(session_path))
    click.echo(str(out_path))


@main.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def schema(out_dir: str) -> None:
    """Write every document schema as JSON Schema files."""
    written = dump_schemas(out_dir)
    for path in written:
        click.echo(str(path))


@main.command()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="Service config JSON.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--role", type=click.Choice(["control", "attest"]), default=None)
def serve(config_file: str | None, host: str | None, port: int | None, role: str | None) -> None:
    """Run the control service (or the attestation service with --role attest).

    Config file keys: host, port, data_dir, role, attestation_url,
    bearer_token, ui_dir, attest_store_dir.
    """
    import uvicorn

    settings: dict[str, Any] = {}
    if config_file:
        settings = json.loads(Path(config_file).read_text(encoding="utf-8"))
    effective_role = role or settings.get("role", "control")
    bind_host = host or settings.get("host", "127.0.0.1")
    bind_port = port or int(settings.get("port", 8787 if effective_role == "control" else 8788))

    if effective_role == "attest":
        from .service.attest import create_attestation_app

        app = create_attestation_app(settings.get("attest_store_dir", "attestation-store"))
    else:
        from .service.control import create_control_app

        app = create_control_app(
            settings.get("data_dir", "recorder-data"),
            attestation_url=settings.get("attestation_url"),
            token=settings.get("bearer_token"),
            ui_dir=settings.get("ui_dir"),
        )
    uvicorn.run(app, host=bind_host, port=bind_port, log_level="info")


if __name__ == "__main__":
    main()
