"""Command-line front end.

Machine-readable results go to stdout; everything else (logs, progress,
error explanations) goes to stderr. Exit codes: 0 success, 1 layout
validation findings, 2 bad input or configuration, 3 a run that logged
safety violations.
"""

from __future__ import annotations

import json
import logging
import os
import sys

import click

from .gain import fit_by_class, pse as fit_pse, detection_range, plan_threshold_session, read_responses
from .layout import LayoutError, RealSpace, load_layout, validate
from .redirection import EventKind
from .simulator import (
    ConfigError,
    check_trace_invariants,
    load_run_config,
    metrics_from_trace,
    run_session,
    write_input_log,
    write_trace,
)

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    raw = os.environ.get("BLINDWALK_LOG", "warn")
    level = _LOG_LEVELS.get(raw)
    if level is None:
        print(f"blindwalk: ignoring BLINDWALK_LOG={raw!r} (use error, warn, info, or debug)", file=sys.stderr)
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _machine(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


@click.group()
def cli() -> None:
    """Simulate and inspect change-blind redirected walking."""
    _setup_logging()


@cli.command("run")
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), help="Write the event trace here (JSON lines).")
@click.option("--input-log", "input_log_path", type=click.Path(dir_okay=False), help="Write per-tick applied inputs here.")
@click.option("--check/--no-check", default=True, help="Audit the finished trace against the safety contract.")
def run_cmd(config_path: str, trace_path: str | None, input_log_path: str | None, check: bool) -> None:
    """Run a policy-driven simulation from a config file; print metrics."""
    try:
        config = load_run_config(config_path)
        layout = load_layout(config.layout_path)
        findings = validate(layout)
        if findings:
            for f in findings:
                print(f"layout: {f}", file=sys.stderr)
            raise ConfigError(f"layout {config.layout_path!r} failed validation")
    except (ConfigError, LayoutError, OSError) as e:
        print(f"blindwalk: {e}", file=sys.stderr)
        sys.exit(2)

    import time

    started = time.perf_counter()
    session = run_session(config, layout)
    elapsed = time.perf_counter() - started
    print(f"simulated {config.ticks} ticks in {elapsed:.2f}s", file=sys.stderr)
    trace = session.trace
    metrics = metrics_from_trace(trace)

    if trace_path:
        write_trace(trace_path, trace)
    if input_log_path:
        write_input_log(input_log_path, session.input_log)

    _machine(metrics.to_json_obj())

    logged = sum(1 for e in trace if e.kind is EventKind.VIOLATION)
    audit = []
    if check:
        audit = check_trace_invariants(
            [e.to_json_obj() for e in trace], load_layout(config.layout_path),
            config.thresholds, config.fov_half_angle,
        )
        for v in audit[:10]:
            print(f"audit: tick {v.tick}: {v.kind}: {v.message}", file=sys.stderr)
    if logged or audit:
        print(f"blindwalk: {logged} logged violation(s), {len(audit)} audit finding(s)", file=sys.stderr)
        sys.exit(3)


@cli.command("validate")
@click.argument("layout_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--real", "real_override", default=None, help="Check against a different tracked space, e.g. 4x4 or 3.5x5.")
def validate_cmd(layout_path: str, real_override: str | None) -> None:
    """Validate a layout file; print findings one per line."""
    try:
        layout = load_layout(layout_path)
    except (LayoutError, OSError) as e:
        print(f"blindwalk: {e}", file=sys.stderr)
        sys.exit(2)
    real = None
    if real_override is not None:
        parts = real_override.lower().split("x")
        try:
            if len(parts) != 2:
                raise ValueError
            real = RealSpace(width=float(parts[0]), depth=float(parts[1]))
        except ValueError:
            print(f"blindwalk: --real expects WIDTHxDEPTH, got {real_override!r}", file=sys.stderr)
            sys.exit(2)
    findings = validate(layout, real=real)
    for f in findings:
        sys.stdout.write(f + "\n")
    if findings:
        sys.exit(1)


@cli.command("fit")
@click.argument("responses", type=click.File("r"))
def fit_cmd(responses) -> None:
    """Fit per-class psychometric curves from a response CSV; print JSON."""
    try:
        samples = read_responses(responses)
        fits = fit_by_class(samples)
    except ValueError as e:
        print(f"blindwalk: {e}", file=sys.stderr)
        sys.exit(2)
    if not fits:
        print("blindwalk: no responses found", file=sys.stderr)
        sys.exit(2)
    out = {}
    for cls, fit in sorted(fits.items(), key=lambda kv: kv[0].value):
        lo, hi = detection_range(fit)
        out[cls.value] = {
            "a": fit.a,
            "b": fit.b,
            "pse": fit_pse(fit),
            "x25": lo,
            "x75": hi,
            "log_likelihood": fit.log_likelihood,
            "warning": fit.warning,
        }
    _machine(out)


@cli.command("plan")
@click.option("--seed", type=int, required=True, help="Session seed; the same seed always yields the same order.")
def plan_cmd(seed: int) -> None:
    """Print a shuffled 45-trial threshold session as CSV."""
    sys.stdout.write("distance_class,gain,repeat_index\n")
    for trial in plan_threshold_session(seed):
        sys.stdout.write(f"{trial.distance_class.value},{trial.gain},{trial.repeat_index}\n")


@cli.command("serve")
@click.option("--layout", "layout_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--tick-rate", default=30.0, show_default=True, type=float, help="Simulation ticks per second.")
@click.option("--static-dir", default=None, type=click.Path(file_okay=False), help="Serve a built viewer from this directory.")
@click.option("--input-log", "input_log_path", default=None, type=click.Path(dir_okay=False), help="Record applied inputs here for replay.")
def serve_cmd(layout_path: str, host: str, port: int, seed: int, tick_rate: float, static_dir: str | None, input_log_path: str | None) -> None:
    """Host the websocket bridge (and optionally a built browser viewer)."""
    try:
        layout = load_layout(layout_path)
        findings = validate(layout)
        if findings:
            for f in findings:
                print(f"layout: {f}", file=sys.stderr)
            sys.exit(2)
        if tick_rate <= 0:
            print("blindwalk: --tick-rate must be positive", file=sys.stderr)
            sys.exit(2)
    except (LayoutError, OSError) as e:
        print(f"blindwalk: {e}", file=sys.stderr)
        sys.exit(2)

    import uvicorn

    from .server import BridgeSettings, create_app

    settings = BridgeSettings(
        layout_path=layout_path, seed=seed, tick_interval=1.0 / tick_rate,
        static_dir=static_dir, input_log_path=input_log_path,
    )
    app = create_app(settings)
    print(f"serving {layout_path} on ws://{host}:{port}/session", file=sys.stderr)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main() -> None:
    cli(prog_name="blindwalk")


if __name__ == "__main__":
    main()
