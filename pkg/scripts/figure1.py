"""Damped oscillators A (linear in z) and B (quadratic in z): q(t) side by side.

B keeps a larger amplitude at late times; the script prints the peak |q|
over t in [40, 50] for each.
"""

import numpy as np

from _common import parse_outdir, plot, run_presets, save
from contactdyn.diagnostics import hamiltonian_drift


def main():
    out = parse_outdir(__doc__.splitlines()[0])
    curves, t = {}, None
    for kind in "AB":
        ((ex, _, traj),) = run_presets(kind)
        save(out, f"figure1_{kind}", traj)
        t = traj.t
        curves[f"model {kind}"] = traj.q[:, 0]
        late = np.abs(traj.q[(traj.t >= 40) & (traj.t <= 50), 0]).max()
        print(f"model {kind}: peak |q| on [40, 50] = {late:.4f}, "
              f"H drift = {hamiltonian_drift(traj).value:.2e}")
    plot(out, "figure1", t, curves, "damped oscillators A and B: q(t)")


if __name__ == "__main__":
    main()
