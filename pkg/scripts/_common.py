"""Shared helpers for the experiment scripts."""

import argparse
from pathlib import Path

from contactdyn.integrator import integrate
from contactdyn.io import svg_lines, write_trajectory_csv
from contactdyn.models import build, default_experiment


def parse_outdir(description: str) -> Path:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--outdir", default="results", help="where CSV and SVG files go")
    out = Path(ap.parse_args().outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_presets(kind: str):
    """Yield ``(experiment, system, trajectory)`` for every variant of a preset."""
    for ex in default_experiment(kind):
        sys = build(ex.spec)
        yield ex, sys, integrate(sys, ex.initial, ex.config)


def slug(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name).strip("_")


def save(outdir: Path, stem: str, traj) -> Path:
    path = outdir / f"{stem}.csv"
    write_trajectory_csv(traj, path)
    return path


def plot(outdir: Path, stem: str, t, curves: dict, title: str) -> Path:
    path = outdir / f"{stem}.svg"
    path.write_text(svg_lines(t, list(curves.values()), list(curves), title=title))
    return path
