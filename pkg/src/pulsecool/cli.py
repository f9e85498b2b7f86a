"""Command-line surface: one job per invocation.

Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
failure during integration.  Batching and orchestration belong to the
shell; sweeps parallelize internally.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import design_schedule, first_dip, j_sweep
from .config import load_config
from .dynamics import simulate
from .errors import NumericalError, ValidationError
from .io import write_compare, write_sweep, write_trajectory
from .oracle import compare_displacement, simulate_nonlinear
from .presets import PRESET_NAMES, run_preset

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsecool",
        description="Pulsed-drive cooling of a mechanical resonator: "
        "moment dynamics, schedules, and sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-q", "--quiet", action="store_true", help="suppress informational logging"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("-c", "--config", required=True, help="JSON config file")
        p.add_argument("-o", "--output", help="output file (overrides config)")
        return p

    with_config(sub.add_parser("simulate", help="integrate one run, write the trajectory CSV"))
    with_config(sub.add_parser("sweep", help="dip time/value across drive intensities"))
    with_config(sub.add_parser("design", help="probe a drive and emit a pulse-train schedule"))
    with_config(sub.add_parser("compare", help="linear vs nonlinear displacement"))

    p = sub.add_parser("preset", help="run a named figure-reproduction preset")
    p.add_argument("name", help=f"one of: {', '.join(PRESET_NAMES)}")
    p.add_argument("-d", "--directory", default=".", help="output directory")
    p.add_argument("--amplitude", type=float, help="override the preset drive amplitude")
    return parser


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    traj = simulate(cfg.params, cfg.require("envelope"), cfg.require("grid"))
    out = args.output or cfg.output_path or "trajectory.csv"
    write_trajectory(traj, out)
    try:
        dip = first_dip(traj, cfg.window, cfg.hysteresis)
    except ValidationError:
        print(f"wrote {out}; run shorter than one averaging window, dip analysis skipped")
        return EXIT_OK
    if dip.found:
        print(f"wrote {out}; first dip n_m={dip.n_dip:.4g} at t={dip.t_dip:.4g}")
    else:
        print(f"wrote {out}; no phonon-number dip found")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.require("sweep")
    rows = j_sweep(cfg.params, spec.J_values, spec.pulse_duration, cfg.grid)
    out = args.output or cfg.output_path or "sweep.csv"
    write_sweep(rows, out)
    found = [r for r in rows if r.found]
    if found:
        print(
            f"wrote {out}; {len(found)}/{len(rows)} rows with a dip, "
            f"t_dip {found[0].t_dip:.4g} (J={found[0].J:g}) -> "
            f"{found[-1].t_dip:.4g} (J={found[-1].J:g})"
        )
    else:
        print(f"wrote {out}; no row produced a dip")
    return EXIT_OK


def _cmd_design(args) -> int:
    cfg = load_config(args.config)
    spec = cfg.require("design")
    env = design_schedule(cfg.params, spec.E, spec.t2, spec.n_pulses, cfg.require("grid"))
    out = args.output or cfg.output_path or "schedule.json"
    Path(out).write_text(
        json.dumps(
            {
                "kind": env.kind,
                "E": env.E,
                "t1": env.t1,
                "t2": env.t2,
                "n_pulses": env.n_pulses,
            },
            indent=2,
        )
        + "\n"
    )
    print(f"wrote {out}; schedule t1={env.t1:g}, t2={env.t2:g}, n_pulses={env.n_pulses}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg = load_config(args.config)
    env = cfg.require("envelope")
    grid = cfg.require("grid")
    linear = simulate(cfg.params, env, grid)
    nonlinear = simulate_nonlinear(cfg.params, env, grid)
    report = compare_displacement(linear, nonlinear)
    out = args.output or cfg.output_path or "compare.csv"
    write_compare(linear, nonlinear, out)
    print(
        f"wrote {out}; X_m deviation max={report.max_abs:.4g} "
        f"rms={report.rms:.4g} nrms={report.nrms:.4g}"
    )
    return EXIT_OK


def _cmd_preset(args) -> int:
    result = run_preset(args.name, args.directory, amplitude=args.amplitude)
    print(result.summary)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    # force=True so repeated in-process invocations honor the current -q flag
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    handlers = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "design": _cmd_design,
        "compare": _cmd_compare,
        "preset": _cmd_preset,
    }
    try:
        return handlers[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
