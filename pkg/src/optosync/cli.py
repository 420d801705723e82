"""Command-line interface.

Three subcommands share the config-file plus ``--set`` override
mechanism:

* ``simulate``  one run; writes trajectory.csv, measures.csv,
  steady.json and manifest.json into the output directory.
* ``sweep``     a one-parameter scan (from ``--recipe`` or
  ``--param/--from/--to/--steps``); writes sweep.csv and manifest.json.
* ``stability`` one run; prints the drift-matrix spectral diagnostic as
  JSON on standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, build_config, parse_config_file, parse_set_overrides
from .dynamics import simulate, stability_scan
from .errors import OptosyncError
from .model import default_dt
from .output import (
    manifest_document,
    steady_document,
    write_json,
    write_measures_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from .sweep import (
    SWEEPABLE,
    SweepSpec,
    figure_recipe,
    run_point,
    run_sweep,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optosync",
        description="Simulate two coupled modulated optomechanical cavities "
                    "and evaluate their quantum synchronization measures.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_out=True):
        p.add_argument("--config", metavar="PATH", help="key = value config file")
        p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                       dest="overrides", help="override one config key (repeatable)")
        if with_out:
            p.add_argument("--out", metavar="DIR", default="out",
                           help="output directory (default: %(default)s)")

    p_sim = sub.add_parser("simulate", help="run one simulation and write its data")
    common(p_sim)
    p_sim.add_argument("--recipe", metavar="NAME",
                       help="single-run preset (fig2, fig3, fig5a, fig5b)")

    p_sweep = sub.add_parser("sweep", help="scan one parameter over a grid")
    common(p_sweep)
    p_sweep.add_argument("--recipe", metavar="NAME",
                         help="sweep preset (fig4a, fig4b, fig6)")
    p_sweep.add_argument("--param", choices=sorted(SWEEPABLE),
                         help="parameter to scan")
    p_sweep.add_argument("--from", dest="start", type=float, metavar="X",
                         help="first grid value")
    p_sweep.add_argument("--to", dest="stop", type=float, metavar="Y",
                         help="last grid value")
    p_sweep.add_argument("--steps", type=int, metavar="N", help="grid size")
    p_sweep.add_argument("--jobs", type=int, default=None, metavar="N",
                         help="worker threads (default: available parallelism)")

    p_stab = sub.add_parser("stability",
                            help="print the spectral stability diagnostic as JSON")
    common(p_stab, with_out=False)
    p_stab.add_argument("--samples", type=int, default=16, metavar="N",
                        help="sample count in the final modulation period")
    return parser


def _resolve_config(args):
    """Config file plus --set overrides; returns (config, raw mapping)."""
    raw = parse_config_file(args.config) if args.config else {}
    overrides = parse_set_overrides(args.overrides)
    raw.update(overrides)
    source = args.config if args.config else "<defaults>"
    return build_config(raw, source=source), raw


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _prepare_out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out, config, outputs, started):
    document = manifest_document(
        version=__version__, command=sys.argv[1:] or ["<api>"],
        config=config.as_dict(), outputs=outputs,
        started=started, finished=_utc_now())
    write_json(out / "manifest.json", document)


def cmd_simulate(args) -> int:
    started = _utc_now()
    config, raw = _resolve_config(args)
    params = config.params
    if args.recipe:
        recipe = figure_recipe(args.recipe, base=params)
        if recipe.kind != "single":
            raise ConfigError(
                f"recipe {args.recipe!r} is a sweep preset; use the sweep command")
        params = recipe.params
        # an explicit dt wins; otherwise track the preset's modulation rate
        dt = config.dt if "dt" in raw else default_dt(params)
        config = replace(config, params=params, dt=dt)

    traj, series, steady, _, summary = run_point(
        params, t_end=config.t_end, dt=config.dt,
        record_stride=config.record_stride,
        transient_fraction=config.transient_fraction)

    out = _prepare_out(args)
    write_trajectory_csv(out / "trajectory.csv", traj)
    write_measures_csv(out / "measures.csv", series)
    write_json(out / "steady.json", steady_document(steady, summary))
    _write_manifest(out, config,
                    ["trajectory.csv", "measures.csv", "steady.json"], started)
    print(f"wrote trajectory.csv, measures.csv, steady.json, manifest.json to {out}")
    return 0


def _sweep_spec_from_flags(args, config) -> SweepSpec:
    missing = [flag for flag, value in
               (("--param", args.param), ("--from", args.start),
                ("--to", args.stop), ("--steps", args.steps)) if value is None]
    if missing:
        raise ConfigError("sweep needs --recipe or all of --param/--from/--to/--steps; "
                          f"missing {', '.join(missing)}")
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    if args.steps == 1:
        if args.stop != args.start:
            raise ConfigError("--steps 1 requires --from and --to to be equal")
        values = (args.start,)
    else:
        if args.stop <= args.start:
            raise ConfigError("--to must be greater than --from")
        values = tuple(np.linspace(args.start, args.stop, args.steps))
    try:
        return SweepSpec(base=config.params, param_name=args.param, values=values,
                         t_end=config.t_end, dt=config.dt,
                         record_stride=config.record_stride,
                         transient_fraction=config.transient_fraction)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_sweep(args) -> int:
    started = _utc_now()
    config, raw = _resolve_config(args)
    if args.recipe:
        recipe = figure_recipe(args.recipe, base=config.params,
                               t_end=config.t_end,
                               dt=config.dt if "dt" in raw else None,
                               record_stride=config.record_stride,
                               transient_fraction=config.transient_fraction)
        if recipe.kind != "sweep":
            raise ConfigError(
                f"recipe {args.recipe!r} is a single-run preset; "
                "use the simulate command")
        spec = recipe.sweep
    else:
        spec = _sweep_spec_from_flags(args, config)

    rows = run_sweep(spec, jobs=args.jobs)
    out = _prepare_out(args)
    write_sweep_csv(out / "sweep.csv", rows)
    _write_manifest(out, config, ["sweep.csv"], started)
    failed = sum(1 for row in rows if not row.ok)
    note = f" ({failed} point(s) failed)" if failed else ""
    print(f"wrote sweep.csv ({len(rows)} rows){note} and manifest.json to {out}")
    return 0


def cmd_stability(args) -> int:
    config, _ = _resolve_config(args)
    traj = simulate(config.params, t_end=config.t_end, dt=config.dt,
                    record_stride=config.record_stride)
    report = stability_scan(config.params, traj, n_samples=args.samples)
    document = {
        "sample_times": list(report.sample_times),
        "max_real_eig": list(report.max_real_eig),
        "all_negative": report.all_negative,
    }
    print(json.dumps(document, indent=2))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"simulate": cmd_simulate, "sweep": cmd_sweep,
                "stability": cmd_stability}
    try:
        return handlers[args.command](args)
    except OptosyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
