"""Coupled oscillators without (g = 0) and with (g = 0.8) coupling.

Writes one plot per coupling with both coordinates and prints the
frequency-lock score of each run.
"""

from _common import parse_outdir, plot, run_presets, save, slug
from contactdyn.diagnostics import sync_metric


def main():
    out = parse_outdir(__doc__.splitlines()[0])
    for ex, _, traj in run_presets("D"):
        stem = f"figure3_{slug(ex.name)}"
        save(out, stem, traj)
        plot(out, stem, traj.t, {"q1": traj.q[:, 0], "q2": traj.q[:, 1]}, ex.name)
        print(f"{ex.name}: sync = {sync_metric(traj):.5f}")


if __name__ == "__main__":
    main()
