"""Command-line entry point: run (live service), render (headless CSV),
signals (print catalog), validate (check a session file)."""

from __future__ import annotations

import sys

import click

from .audio_io import StreamConfig
from .engine import Engine, run_headless, validate_session
from .errors import SchemaError, SonomapError
from .session import SessionConfig, load_session
from .runner import LiveRunner

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _load_config(session_path, frame, hop, rate) -> SessionConfig:
    config = load_session(session_path) if session_path else SessionConfig()
    if frame or hop or rate:
        stream = StreamConfig(
            sample_rate=rate or config.stream.sample_rate,
            frame_size=frame or config.stream.frame_size,
            hop_size=hop or config.stream.hop_size,
        )
        config = SessionConfig(stream=stream, subbands=config.subbands,
                               automatables=config.automatables,
                               mappings=config.mappings,
                               transports=config.transports,
                               device=config.device)
    return config


@click.group()
def cli():
    """Audio feature extraction and mapping engine for live visuals."""


@cli.command()
@click.option("--session", type=click.Path(exists=True), help="Session JSON file.")
@click.option("--input", "input_path", type=click.Path(exists=True), help="Input WAV file.")
@click.option("--osc-dest", default=None, help="OSC destination host:port.")
@click.option("--ui-port", type=int, default=None, help="WebSocket UI port.")
@click.option("--frame", type=int, default=None, help="Frame size override.")
@click.option("--hop", type=int, default=None, help="Hop size override.")
@click.option("--rate", type=int, default=None, help="Sample rate override.")
@click.option("--loop/--no-loop", default=False, help="Loop the input file.")
def run(session, input_path, osc_dest, ui_port, frame, hop, rate, loop):
    """Run live: realtime-paced processing, OSC publishing, UI endpoint."""
    import uvicorn
    from .service import create_app
    from .session import TransportConfig

    config = _load_config(session, frame, hop, rate)
    transports = config.transports
    if osc_dest:
        host, _, port = osc_dest.partition(":")
        transports = TransportConfig(host or transports.osc_host,
                                     int(port) if port else transports.osc_port,
                                     transports.ui_port)
    if ui_port:
        transports = TransportConfig(transports.osc_host, transports.osc_port, ui_port)
    config = SessionConfig(stream=config.stream, subbands=config.subbands,
                           automatables=config.automatables, mappings=config.mappings,
                           transports=transports, device=config.device)

    if input_path:
        runner = LiveRunner.from_wav(config, input_path, paced=True, loop=loop)
    else:
        runner = LiveRunner(config, samples=None, paced=True)
    runner.start()
    app = create_app(runner)
    try:
        uvicorn.run(app, host="127.0.0.1", port=config.transports.ui_port,
                    log_level="warning")
    finally:
        runner.stop()


@cli.command()
@click.option("--session", type=click.Path(exists=True), help="Session JSON file.")
@click.option("--input", "input_path", type=click.Path(exists=True), required=True,
              help="Input WAV file.")
@click.option("--output", type=click.Path(), required=True, help="Output CSV path.")
@click.option("--frame", type=int, default=None, help="Frame size override.")
@click.option("--hop", type=int, default=None, help="Hop size override.")
@click.option("--rate", type=int, default=None, help="Sample rate override.")
def render(session, input_path, output, frame, hop, rate):
    """Headless render: process a WAV file to a CSV of all signal streams."""
    config = _load_config(session, frame, hop, rate)
    run_headless(config, input_path, output)
    click.echo(f"wrote {output}")


@cli.command()
@click.option("--session", type=click.Path(exists=True), help="Session JSON file.")
def signals(session):
    """Print the signal catalog for a session (defaults if none given)."""
    config = load_session(session) if session else SessionConfig()
    engine = Engine(config)
    for entry in engine.catalog():
        kind = "auto" if entry["automatable"] else entry["direction"]
        click.echo("%-40s %-12s %-10s [%g, %g] %s" % (
            entry["id"], kind, entry["value_kind"],
            entry["range_min"], entry["range_max"], entry["unit"]))


@cli.command()
@click.argument("session_path", type=click.Path(exists=True))
def validate(session_path):
    """Validate a session file; exit 0 if loadable and consistent."""
    config = load_session(session_path)
    validate_session(config)
    click.echo(f"{session_path}: OK")


def main():
    try:
        cli.main(standalone_mode=False)
        return EXIT_OK
    except click.exceptions.Exit as exc:
        return EXIT_OK if exc.exit_code == 0 else EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except SchemaError as exc:
        click.echo(f"session error: {exc}", err=True)
        return EXIT_CONFIG
    except SonomapError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_RUNTIME
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
