"""Command-line front end: ``run``, ``check`` and ``sweep``.

Exit codes: 0 success, 1 configuration error, 2 integration failure
(partial CSV is still written), 3 failing invariant check.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import models
from .checks import SUITES, run_checks
from .config import OUTPUT_DIR_ENV, RunConfig, parse_vector, resolve
from .diagnostics import action_residual, hamiltonian_drift, sync_metric
from .errors import ContactError, IntegrationError, InvalidConfig
from .integrator import Trajectory, analytic_damped_ho_series, integrate
from .io import format_float, svg_lines, write_trajectory_csv

EXIT_CONFIG = 1
EXIT_INTEGRATION = 2
EXIT_CHECK = 3

MODEL_FIELDS = ("omega", "gamma", "a", "omega1_sq", "omega2_sq", "g")
GRID_FIELDS = MODEL_FIELDS + ("h", "z0", "lambda0")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--preset", choices=list("ABCD"), help="published model settings")
    p.add_argument("--variant", type=int, default=0,
                   help="preset variant: C has q0=+2,-2; D has g=0.0,0.8 (default 0)")
    p.add_argument("--config", help="key = value config file")
    g = p.add_argument_group("model")
    for name in MODEL_FIELDS:
        g.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    g = p.add_argument_group("initial state (vectors as comma lists, e.g. --q0=1,-1)")
    g.add_argument("--q0")
    g.add_argument("--p0")
    g.add_argument("--z0", type=float)
    g.add_argument("--lambda0", type=float)
    g.add_argument("--t0", type=float)
    g = p.add_argument_group("integrator")
    g.add_argument("--h", type=float)
    g.add_argument("--steps", type=int, dest="n_steps")
    g.add_argument("--record-every", type=int)
    g.add_argument("--scheme", choices=["hybrid", "rk4"])
    g = p.add_argument_group("output")
    g.add_argument("--outdir", help=f"output directory (overrides ${OUTPUT_DIR_ENV})")


def _overrides(args) -> dict:
    ov = {
        "model": {k: getattr(args, k) for k in MODEL_FIELDS},
        "initial": {
            "q": parse_vector(args.q0) if args.q0 is not None else None,
            "p": parse_vector(args.p0) if args.p0 is not None else None,
            "z": args.z0,
            "lambda": args.lambda0,
            "t": args.t0,
        },
        "integrator": {
            "h": args.h,
            "n_steps": args.n_steps,
            "record_every": args.record_every,
            "scheme": args.scheme,
        },
        "output": {"dir": args.outdir},
    }
    if args.h is not None and args.n_steps is None:
        ov["integrator"]["_keep_horizon"] = True
    return ov


def _resolve(args, extra: "dict | None" = None) -> RunConfig:
    ov = _overrides(args)
    for section, values in (extra or {}).items():
        ov.setdefault(section, {}).update(values)
    keep = ov["integrator"].pop("_keep_horizon", False)
    if keep:
        base = resolve(args.preset, args.variant, args.config)
        ov["integrator"]["n_steps"] = int(round(base.integ.horizon / ov["integrator"]["h"]))
        rec = ov["integrator"].get("record_every") or base.integ.record_every
        ov["integrator"]["record_every"] = min(rec, max(ov["integrator"]["n_steps"], 1))
    return resolve(args.preset, args.variant, args.config, ov)


def _report(traj: Trajectory, rc: RunConfig) -> dict:
    sys_ = models.build(rc.model)
    out = {
        "hamiltonian_drift": hamiltonian_drift(traj).to_dict(),
        "action_residual": action_residual(traj, sys_).to_dict(),
    }
    if traj.n == 2:
        try:
            out["sync_metric"] = sync_metric(traj)
        except ContactError as exc:
            out["sync_metric"] = None
            out["sync_error"] = str(exc)
    return out


def _write_outputs(traj: Trajectory, rc: RunConfig, args) -> None:
    rc.outdir.mkdir(parents=True, exist_ok=True)
    if rc.csv_path is not None:
        write_trajectory_csv(traj, rc.csv_path)
    svg = args.svg or rc.svg
    if svg and len(traj):
        labels = [f"q{i + 1}" for i in range(traj.n)]
        title = f"model {rc.model.kind.value}: q(t)"
        text = svg_lines(traj.t, [traj.q[:, i] for i in range(traj.n)], labels, title=title)
        (rc.outdir / svg).write_text(text)


def cmd_run(args) -> int:
    try:
        extra = {"output": {"csv": args.out, "svg": args.svg}}
        rc = _resolve(args, extra)
    except (ContactError, OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys_ = models.build(rc.model)
    try:
        traj = integrate(sys_, rc.initial, rc.integ)
    except IntegrationError as exc:
        _write_outputs(exc.trajectory, rc, args)
        print(f"integration failed at step {exc.step}: {exc.cause}", file=sys.stderr)
        return EXIT_INTEGRATION
    _write_outputs(traj, rc, args)
    if args.report:
        (rc.outdir / args.report).write_text(json.dumps(_report(traj, rc), indent=2) + "\n")
    if rc.csv_path is not None:
        print(f"wrote {len(traj)} records to {rc.csv_path}", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    only = args.only or None
    if only:
        unknown = sorted(set(only) - set(SUITES))
        if unknown:
            print(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}",
                  file=sys.stderr)
            return EXIT_CONFIG
    first_fail = None
    width = 52
    print(f"{'suite':<12} {'check':<{width}} result  detail")
    for c, ok, detail in run_checks(only):
        print(f"{c.suite:<12} {c.name:<{width}} {'PASS' if ok else 'FAIL':<7} {detail}", flush=True)
        if not ok and first_fail is None:
            first_fail = c
    if first_fail is not None:
        print(f"first failing check: {first_fail.suite}: {first_fail.name}", file=sys.stderr)
        return EXIT_CHECK
    return 0


def _parse_grid(items) -> "list[tuple[str, list[float]]]":
    grid = []
    for item in items or []:
        if "=" not in item:
            raise InvalidConfig(f"grid item {item!r} must look like field=v1,v2,...")
        name, _, values = item.partition("=")
        name = name.strip().replace("-", "_")
        if name not in GRID_FIELDS:
            raise InvalidConfig(f"cannot sweep {name!r}; choose from {', '.join(GRID_FIELDS)}")
        vals = [float(v) for v in values.split(",") if v.strip()]
        grid.append((name, vals))
    if len(grid) > 2:
        raise InvalidConfig("a sweep grid spans at most two fields")
    if len({n for n, _ in grid}) != len(grid):
        raise InvalidConfig("duplicate grid field")
    return grid


def _sweep_columns(names, n) -> list[str]:
    return (
        list(names)
        + ["t"]
        + [f"q{i + 1}" for i in range(n)]
        + [f"p{i + 1}" for i in range(n)]
        + ["z", "lambda", "K", "H", "h_drift", "sync", "ref_error", "error"]
    )


def _sweep_point(job):
    """Run one grid point; returns a row of strings (picklable for process pools)."""
    args, names, values, base_n = job
    assign = dict(zip(names, values))
    extra = {"model": {}, "initial": {}, "integrator": {}, "output": {"csv": None, "svg": None}}
    for k, v in assign.items():
        if k in MODEL_FIELDS:
            extra["model"][k] = v
        elif k == "z0":
            extra["initial"]["z"] = v
        elif k == "lambda0":
            extra["initial"]["lambda"] = v
    fmt = [format_float(v) for v in values]
    blanks = [""] * (len(_sweep_columns((), base_n)) - 1)
    try:
        if "h" in assign:
            args = argparse.Namespace(**{**vars(args), "h": assign["h"], "n_steps": None})
        rc = _resolve(args, extra)
        sys_ = models.build(rc.model)
        traj = integrate(sys_, rc.initial, rc.integ)
    except IntegrationError as exc:
        return fmt + blanks + [f"step {exc.step}: {type(exc.cause).__name__}: {exc.cause}"]
    except (ContactError, ValueError) as exc:
        return fmt + blanks + [f"{type(exc).__name__}: {exc}"]
    s = traj.final
    sync = ""
    if traj.n == 2:
        try:
            sync = format_float(sync_metric(traj))
        except ContactError:
            sync = ""
    ref_err = ""
    m = rc.model
    if m.kind is models.ModelKind.DampedHO_Linear and m.gamma < 2 * m.omega and rc.initial.t == 0.0:
        ref = analytic_damped_ho_series(m.omega, m.gamma, rc.initial.q[0], rc.initial.p[0],
                                        rc.initial.z, rc.initial.lam, traj.t)
        ref_err = format_float(float(np.max(np.abs(traj.q[:, 0] - ref["q"]))))
    vals = [s.t, *s.q, *s.p, s.z, s.lam, traj.K[-1], traj.H[-1], hamiltonian_drift(traj).value]
    return fmt + [format_float(v) for v in vals] + [sync, ref_err, ""]


def cmd_sweep(args) -> int:
    try:
        grid = _parse_grid(args.grid)
        base = _resolve(args, {"output": {"csv": None, "svg": None}})
    except (ContactError, OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    names = [n for n, _ in grid]
    points = list(itertools.product(*[v for _, v in grid])) if grid else []
    jobs = [(args, names, list(p), base.initial.n) for p in points]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    base.outdir.mkdir(parents=True, exist_ok=True)
    dest = base.outdir / args.out
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_sweep_columns(names, base.initial.n))
        w.writerows(rows)
    print(f"wrote {len(rows)} grid point(s) to {dest}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="contactdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="integrate one configuration and write a trajectory CSV")
    _add_common(p)
    p.add_argument("--out", help="trajectory CSV file name (default trajectory.csv)")
    p.add_argument("--svg", help="also write an SVG plot of q(t) to this file name")
    p.add_argument("--report", help="write a JSON diagnostics report to this file name")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="run the invariant suite")
    p.add_argument("--only", action="append", metavar="SUITE",
                   help=f"restrict to a suite (repeatable): {', '.join(SUITES)}")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="run a one- or two-field parameter grid")
    _add_common(p)
    p.add_argument("--grid", action="append", metavar="FIELD=V1,V2,...",
                   help=f"grid axis; fields: {', '.join(GRID_FIELDS)}")
    p.add_argument("--out", default="sweep.csv", help="summary CSV file name")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
