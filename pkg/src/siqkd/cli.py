"""Command-line entry point: ``siqkd {sweep,point,verify,compare}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from siqkd.config import RunConfig, parse_config
from siqkd.csvio import point_row, read_overlay, write_points, write_rows
from siqkd.errors import ParseError, ValidationError
from siqkd.optimize import optimize_point, spec_for, sweep
from siqkd.verify import format_report, run_verify

PROTOCOL_ORDER = {"si": 0, "sps_bb84": 1}


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    return parse_config(Path(path).read_text(encoding="utf-8"))


def run_sweep(cfg: RunConfig, jobs: int = 1) -> str:
    points = sweep(spec_for(cfg), cfg.sweep.distances(), cfg, jobs=jobs)
    return write_points(points)


def run_point(cfg: RunConfig, distance: float) -> str:
    return write_points([optimize_point(spec_for(cfg), distance, cfg)])


def run_compare(cfg: RunConfig, overlay: str | None = None, jobs: int = 1) -> str:
    """Both protocols on one configuration, merged by distance."""
    distances = cfg.sweep.distances()
    rows = []
    for protocol in ("si", "sps_bb84"):
        rows += [point_row(p) for p in sweep(spec_for(cfg, protocol), distances, cfg, jobs=jobs)]
    if overlay is not None:
        rows += read_overlay(overlay)
    rows.sort(key=lambda r: (r["distance_km"], PROTOCOL_ORDER.get(r["protocol"], 2)))
    return write_rows(rows)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="siqkd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="optimised key rate versus distance")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("point", help="optimised key rate at one distance")
    p.add_argument("--distance", type=float, required=True)
    p.add_argument("--config")
    p.add_argument("--out")

    sub.add_parser("verify", help="oracle and closed-form self-checks")

    p = sub.add_parser("compare", help="SI protocol and single-photon BB84 side by side")
    p.add_argument("--config")
    p.add_argument("--overlay", help="CSV with distance_km,skr_per_pulse to merge in")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)

    args = parser.parse_args(argv)

    if args.command == "verify":
        checks = run_verify()
        sys.stdout.write(format_report(checks))
        return 0 if all(c.passed for c in checks) else 1

    try:
        cfg = load_config(args.config)
        if args.command == "sweep":
            text = run_sweep(cfg, jobs=args.jobs)
        elif args.command == "point":
            text = run_point(cfg, args.distance)
        else:
            overlay = None
            if args.overlay:
                overlay = Path(args.overlay).read_text(encoding="utf-8")
            text = run_compare(cfg, overlay, jobs=args.jobs)
        _emit(text, args.out)
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"siqkd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"siqkd: I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
