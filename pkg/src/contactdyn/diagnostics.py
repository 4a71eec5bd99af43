"""Trajectory-level checks: conservation laws, action identity, symmetry, synchronisation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyTrajectory, LengthMismatch, NoCrossings, TooShort, UnsupportedModel
from .integrator import Trajectory
from .state import ContactSystem

__all__ = [
    "DiagnosticReport",
    "hamiltonian_drift",
    "k_drift",
    "action_residual",
    "herglotz_residual",
    "herglotz_residual_series",
    "symmetry_check_space_inversion",
    "zero_crossing_period",
    "sync_metric",
]


@dataclass
class DiagnosticReport:
    """A named time series, the scalar it reduces to and a verdict.

    ``value`` is the quantity compared with ``threshold`` (``passed`` is
    ``value <= threshold``); ``max_abs`` is the largest absolute entry of the
    series.
    """

    name: str
    t: np.ndarray
    values: np.ndarray
    max_abs: float
    value: float
    threshold: float
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.threshold)

    @property
    def series(self) -> list[tuple[float, float]]:
        return list(zip(self.t.tolist(), self.values.tolist()))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "max_abs": self.max_abs,
            "passed": self.passed,
            "extras": {k: float(v) for k, v in self.extras.items()},
        }


def _nonempty(traj: Trajectory):
    if traj is None or len(traj) == 0:
        raise EmptyTrajectory("trajectory has no records")


def _max_abs(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def hamiltonian_drift(traj: Trajectory, threshold: float = 1e-3) -> DiagnosticReport:
    """Series ``lambda K - lambda0 K0``; verdict on the drift relative to ``|H0|``."""
    _nonempty(traj)
    H = traj.H
    series = H - H[0]
    m = _max_abs(series)
    scale = abs(H[0]) if H[0] != 0 else 1.0
    return DiagnosticReport("hamiltonian_drift", traj.t, series, m, m / scale, threshold)


def k_drift(traj: Trajectory, threshold: float = 1e-4) -> DiagnosticReport:
    """Relative drift of ``K`` itself; meaningful when ``K_z = 0``."""
    _nonempty(traj)
    series = traj.K - traj.K[0]
    m = _max_abs(series)
    scale = abs(traj.K[0]) if traj.K[0] != 0 else 1.0
    return DiagnosticReport("k_drift", traj.t, series, m, m / scale, threshold)


def action_residual(traj: Trajectory, sys: ContactSystem, threshold: float = 1e-3) -> DiagnosticReport:
    """Check ``z' + J = 0`` with ``J = p.K_p - K``.

    The pointwise residual ``(K - p.K_p) + J`` vanishes identically and is
    reported in ``extras["identity_max"]``. The series is the running
    quadrature gap ``z(t) - (z(0) - int_0^t J dt)`` (trapezoid over records);
    its final entry is compared with ``threshold``.
    """
    _nonempty(traj)
    J = np.empty(len(traj))
    ident = np.empty(len(traj))
    for k in range(len(traj)):
        q, p, z = traj.q[k], traj.p[k], traj.z[k]
        K = float(sys.K(q, p, z))
        pKp = float(np.dot(p, sys.K_p(q, p, z)))
        J[k] = pKp - K
        ident[k] = (K - pKp) + J[k]
    dt = np.diff(traj.t)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * dt * (J[1:] + J[:-1]))])
    gap = traj.z - (traj.z[0] - cum)
    final = abs(float(gap[-1]))
    return DiagnosticReport(
        "action_residual", traj.t, gap, _max_abs(gap), final, threshold,
        extras={"identity_max": _max_abs(ident)},
    )


def herglotz_residual_series(sys: ContactSystem, t, q, z):
    """Centered-difference residual ``q'' + K_q - q' K_z`` on a uniform grid.

    For ``K = |p|^2/2 + U(q) + f(z)`` this is the Herglotz equation for the
    contact Lagrangian ``J = |q'|^2/2 - U(q) - f(z)``. Returns interior
    times and an ``(m-2, n)`` residual array.
    """
    if not sys.separable:
        raise UnsupportedModel(f"{sys.label or 'system'} is not of the form |p|^2/2 + V(q, z)")
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float).reshape(len(t), -1)
    z = np.asarray(z, dtype=float)
    if len(t) < 3:
        raise EmptyTrajectory("need at least three records for a centered stencil")
    h = t[1] - t[0]
    if not np.allclose(np.diff(t), h, rtol=1e-9, atol=1e-12):
        raise ValueError("records must be uniformly spaced")
    qdd = (q[2:] - 2.0 * q[1:-1] + q[:-2]) / (h * h)
    qd = (q[2:] - q[:-2]) / (2.0 * h)
    res = np.empty_like(qdd)
    for k in range(res.shape[0]):
        qk, pk, zk = q[k + 1], qd[k], z[k + 1]
        res[k] = qdd[k] + np.asarray(sys.K_q(qk, pk, zk)) - qd[k] * float(sys.K_z(qk, pk, zk))
    return t[1:-1], res


def herglotz_residual(traj: Trajectory, sys: ContactSystem, threshold: float = 5e-3) -> DiagnosticReport:
    """Herglotz residual of a recorded trajectory, componentwise for n > 1."""
    _nonempty(traj)
    tt, res = herglotz_residual_series(sys, traj.t, traj.q, traj.z)
    worst = np.max(np.abs(res), axis=1)
    m = _max_abs(worst)
    return DiagnosticReport("herglotz_residual", tt, worst, m, m, threshold)


def symmetry_check_space_inversion(
    traj_plus: Trajectory, traj_minus: Trajectory, threshold: float = 1e-12
) -> DiagnosticReport:
    """Mirror residual under ``(q, p) -> (-q, -p)``; ``z`` and ``lambda`` must coincide."""
    if len(traj_plus) != len(traj_minus) or not np.array_equal(traj_plus.t, traj_minus.t):
        raise LengthMismatch("trajectories have different record times")
    _nonempty(traj_plus)
    rq = np.max(np.abs(traj_plus.q + traj_minus.q), axis=1)
    rp = np.max(np.abs(traj_plus.p + traj_minus.p), axis=1)
    rz = np.abs(traj_plus.z - traj_minus.z)
    rl = np.abs(traj_plus.lam - traj_minus.lam)
    series = np.maximum.reduce([rq, rp, rz, rl])
    m = _max_abs(series)
    return DiagnosticReport(
        "space_inversion", traj_plus.t, series, m, m, threshold,
        extras={"q": _max_abs(rq), "p": _max_abs(rp), "z": _max_abs(rz), "lambda": _max_abs(rl)},
    )


def zero_crossing_period(t, x) -> float:
    """Mean spacing of upward zero crossings, located by linear interpolation."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    idx = np.nonzero((x[:-1] < 0.0) & (x[1:] >= 0.0))[0]
    if idx.size < 2:
        raise NoCrossings(f"found {idx.size} upward zero crossings, need at least 2")
    x0, x1 = x[idx], x[idx + 1]
    tc = t[idx] - x0 * (t[idx + 1] - t[idx]) / (x1 - x0)
    return float(np.mean(np.diff(tc)))


def sync_metric(traj: Trajectory, min_periods: float = 10.0) -> float:
    """Frequency-lock score ``1 - |T1 - T2| / max(T1, T2)`` over the last half of the run."""
    if traj.n != 2:
        raise UnsupportedModel(f"sync metric needs n = 2, got n = {traj.n}")
    _nonempty(traj)
    half = traj.t >= traj.t[0] + 0.5 * (traj.t[-1] - traj.t[0])
    t = traj.t[half]
    T1 = zero_crossing_period(t, traj.q[half, 0])
    T2 = zero_crossing_period(t, traj.q[half, 1])
    duration = traj.t[-1] - traj.t[0]
    if duration < min_periods * max(T1, T2):
        raise TooShort(f"run of length {duration:g} covers fewer than {min_periods:g} periods")
    return 1.0 - abs(T1 - T2) / max(T1, T2)
