"""Command-line entry point.

Exit codes: 0 success, 2 invalid arguments or scenario, 3 runtime failure
(including malformed trace records met mid-run). Diagnostics, logs and the
run summary go to stderr; stdout only ever carries primary output.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
from typing import Iterator, Optional, Sequence, TextIO

from . import io as gio
from .engine import FAST_TIME, REAL_TIME, RunConfig, run
from .scenario import ScenarioError, load

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RUNTIME = 3

log = logging.getLogger("gnss_threat_sim")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already uses 2; keep it explicit
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _open_in(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as fh:
            yield fh


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        # line buffering so paced runs are visible downstream per epoch
        with open(path, "w", encoding="utf-8", buffering=1, newline="\n") as fh:
            yield fh


def _load_scenario(path: str):
    try:
        return load(path)
    except OSError as exc:
        raise ScenarioError([f"{path}: {exc.strerror}"]) from exc


def cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario(args.scenario)
        config = RunConfig(scenario=scenario,
                           mode=REAL_TIME if args.mode == "realtime" else FAST_TIME,
                           speed_factor=args.speed, verbosity=args.verbosity)
    except ScenarioError as exc:
        for e in exc.errors:
            print(e, file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    try:
        with _open_in(args.trace) as src, _open_out(args.out) as sink:
            summary = run(gio.read_trace(src), config, sink)
    except (OSError, ValueError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(json.dumps(summary.to_json(), indent=2), file=sys.stderr)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        scenario = _load_scenario(args.scenario)
    except ScenarioError as exc:
        for e in exc.errors:
            print(e, file=sys.stderr)
        return EXIT_INVALID
    names = ", ".join(scenario.threat_names()) or "no threats"
    print(f"{args.scenario}: valid ({names})", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        prns = tuple(int(p) for p in args.prns.split(",")) if args.prns else None
        params = gio.SynthParams(
            duration=args.duration, rate=args.rate,
            n_satellites=len(prns) if prns else args.sats, seed=args.seed,
            start=args.start, prns=prns, clock_bias_m=args.clock_bias_m,
            snr_db={"L1": args.snr_db, "L5": args.snr_db},
            satellite_motion=not args.static_sats,
            trajectory=gio.Trajectory(kind=args.trajectory, speed_mps=args.speed_mps,
                                      heading_deg=args.heading_deg),
        )
    except ValueError as exc:
        print(f"invalid synth parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        with _open_out(args.out) as sink:
            n = gio.write_trace(gio.synth_trace(params), sink)
    except OSError as exc:
        print(f"synth failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    log.info("wrote %d epochs", n)
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    if args.quantity not in gio.QUANTITIES:
        print(f"unknown quantity {args.quantity!r}; choose from {sorted(gio.QUANTITIES)}",
              file=sys.stderr)
        return EXIT_INVALID
    try:
        with _open_in(args.fdr) as src:
            series = gio.export_plot_series(gio.read_fdr(src), args.sat, args.band, args.quantity)
    except gio.TraceError as exc:
        print(exc, file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"export failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    with _open_out(args.out) as sink:
        w = csv.writer(sink, lineterminator="\n")
        w.writerow(["t", args.quantity])
        w.writerows(zip(series.t, series.value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gts", description="GNSS jamming/spoofing measurement-level simulator")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="inject a scenario into a trace")
    r.add_argument("--scenario", required=True)
    r.add_argument("--trace", required=True, help="trace file, or - for stdin")
    r.add_argument("--mode", choices=["fast", "realtime"], default="fast")
    r.add_argument("--speed", type=float, default=1.0, help="real-time speed factor")
    r.add_argument("--out", default="-", help="FDR file, or - for stdout")
    r.add_argument("--verbosity", choices=["full", "active"], default="full")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("validate", help="check a scenario file")
    v.add_argument("--scenario", required=True)
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("synth", help="write a synthetic measurement trace")
    s.add_argument("--duration", type=float, required=True)
    s.add_argument("--rate", type=float, default=1.0)
    s.add_argument("--sats", type=int, default=8)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-")
    s.add_argument("--start", type=float, default=0.0, help="time of the first epoch [s]")
    s.add_argument("--prns", help="comma-separated GPS PRNs (overrides --sats)")
    s.add_argument("--snr-db", type=float, default=45.0)
    s.add_argument("--clock-bias-m", type=float, default=0.0)
    s.add_argument("--trajectory", choices=["static", "straight", "circular"], default="straight")
    s.add_argument("--speed-mps", type=float, default=50.0)
    s.add_argument("--heading-deg", type=float, default=90.0)
    s.add_argument("--static-sats", action="store_true")
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("export", help="extract a (t, value) CSV from an FDR")
    e.add_argument("--fdr", required=True)
    e.add_argument("--sat", required=True)
    e.add_argument("--band", required=True, choices=["L1", "L5"])
    e.add_argument("--quantity", required=True)
    e.add_argument("--out", default="-")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=os.environ.get("GTS_LOG_LEVEL", "WARNING").upper(),
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
