"""Damped double well from q(0) = +2 and q(0) = -2, with the mirror residual."""

from _common import parse_outdir, plot, run_presets, save
from contactdyn.diagnostics import symmetry_check_space_inversion


def main():
    out = parse_outdir(__doc__.splitlines()[0])
    runs = list(run_presets("C"))
    curves = {}
    for ex, _, traj in runs:
        save(out, f"figure2_{'plus' if ex.initial.q[0] > 0 else 'minus'}", traj)
        curves[f"q(0) = {ex.initial.q[0]:+g}"] = traj.q[:, 0]
        print(f"{ex.name}: final q = {traj.q[-1, 0]:+.6f}")
    r = symmetry_check_space_inversion(runs[0][2], runs[1][2])
    print(f"mirror residual = {r.value:.1e}")
    plot(out, "figure2", runs[0][2].t, curves, "double well: q(t) from +-2")


if __name__ == "__main__":
    main()
