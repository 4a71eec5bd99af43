"""Step-size study on model A against the exact solution.

Reports the max |q| error over T = 50 and the H drift for a ladder of step
sizes, for both the hybrid leap-frog and the RK4 reference.
"""

import csv

import numpy as np

from _common import parse_outdir, plot
from contactdyn.diagnostics import hamiltonian_drift
from contactdyn.integrator import IntegratorConfig, Scheme, analytic_damped_ho_series, integrate
from contactdyn.io import format_float
from contactdyn.models import ModelSpec, build
from contactdyn.state import ContactState

HS = [0.08, 0.04, 0.02, 0.01, 0.005]
T = 50.0


def main():
    out = parse_outdir(__doc__.splitlines()[0])
    sys = build(ModelSpec("A", omega=1.0, gamma=0.1))
    s0 = ContactState(q=[1.0], p=[0.0], z=1.0, lam=1.0)
    rows, errs = [], {s: [] for s in Scheme}
    for scheme in Scheme:
        for h in HS:
            traj = integrate(sys, s0, IntegratorConfig(h, int(round(T / h)), scheme=scheme))
            ref = analytic_damped_ho_series(1.0, 0.1, 1.0, 0.0, 1.0, 1.0, traj.t)
            err = float(np.max(np.abs(traj.q[:, 0] - ref["q"])))
            drift = hamiltonian_drift(traj).value
            errs[scheme].append(err)
            rows.append([scheme.value, h, err, drift])
            print(f"{scheme.value:>6}  h={h:<6g} max|q err|={err:.3e}  H drift={drift:.3e}")
        slope = np.polyfit(np.log(HS), np.log(errs[scheme]), 1)[0]
        print(f"{scheme.value:>6}  fitted order {slope:.3f}")
    with open(out / "convergence.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scheme", "h", "max_q_error", "h_drift"])
        w.writerows([[r[0]] + [format_float(v) for v in r[1:]] for r in rows])
    plot(out, "convergence", np.log10(HS),
         {s.value: np.log10(errs[s]) for s in Scheme}, "log10 error vs log10 h")


if __name__ == "__main__":
    main()
