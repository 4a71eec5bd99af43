"""Time stepping: the hybrid leap-frog scheme, an RK4 reference and closed-form oracles."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _quad

from .errors import (
    ContactError,
    InsufficientData,
    IntegrationError,
    InvalidConfig,
    NonFinite,
    NonPositiveLambda,
    OverdampedUnsupported,
    StepSingular,
)
from .state import ContactState, ContactSystem, validate

__all__ = [
    "Scheme",
    "IntegratorConfig",
    "Trajectory",
    "SINGULAR_THRESHOLD",
    "hybrid_leapfrog_step",
    "rk4_reference_step",
    "integrate",
    "analytic_damped_ho",
    "analytic_damped_ho_series",
    "ConvergenceResult",
    "convergence_order",
]

SINGULAR_THRESHOLD = 1e-12


class Scheme(str, enum.Enum):
    HybridLeapfrog = "hybrid"
    RK4Reference = "rk4"

    @classmethod
    def parse(cls, text: "str | Scheme") -> "Scheme":
        if isinstance(text, cls):
            return text
        for s in cls:
            if text in (s.value, s.name):
                return s
        raise InvalidConfig(f"unknown scheme {text!r}")


@dataclass(frozen=True)
class IntegratorConfig:
    h: float
    n_steps: int
    record_every: int = 1
    scheme: Scheme = Scheme.HybridLeapfrog

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not (math.isfinite(self.h) and self.h > 0):
            raise InvalidConfig(f"h must be a positive finite number, got {self.h!r}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise InvalidConfig(f"n_steps must be a non-negative integer, got {self.n_steps!r}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise InvalidConfig(f"record_every must be a positive integer, got {self.record_every!r}")
        if self.record_every > max(self.n_steps, 1):
            raise InvalidConfig("record_every must not exceed n_steps")
        if not math.isfinite(self.h * self.n_steps):
            raise InvalidConfig("h * n_steps overflows")
        object.__setattr__(self, "n_steps", int(self.n_steps))
        object.__setattr__(self, "record_every", int(self.record_every))

    @property
    def horizon(self) -> float:
        return self.h * self.n_steps


@dataclass
class Trajectory:
    """Recorded states as column arrays; row ``k`` is one record."""

    t: np.ndarray
    q: np.ndarray  # (m, n)
    p: np.ndarray  # (m, n)
    z: np.ndarray
    lam: np.ndarray
    K: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def H(self) -> np.ndarray:
        return self.lam * self.K

    @property
    def n(self) -> int:
        return self.q.shape[1]

    def __len__(self) -> int:
        return self.t.shape[0]

    def state(self, k: int) -> ContactState:
        return ContactState(q=self.q[k], p=self.p[k], z=self.z[k], lam=self.lam[k], t=self.t[k])

    @property
    def states(self) -> list[ContactState]:
        return [self.state(k) for k in range(len(self))]

    @property
    def final(self) -> ContactState:
        return self.state(len(self) - 1)

    @classmethod
    def from_records(cls, rows, label="") -> "Trajectory":
        """Build from ``(t, q, p, z, lam, K)`` tuples."""
        rows = list(rows)
        n = len(rows[0][1]) if rows else 1
        t = np.array([r[0] for r in rows], dtype=float)
        q = np.array([r[1] for r in rows], dtype=float).reshape(len(rows), n)
        p = np.array([r[2] for r in rows], dtype=float).reshape(len(rows), n)
        z = np.array([r[3] for r in rows], dtype=float)
        lam = np.array([r[4] for r in rows], dtype=float)
        K = np.array([r[5] for r in rows], dtype=float)
        return cls(t, q, p, z, lam, K, label)


def _finite(*xs):
    for x in xs:
        if not np.all(np.isfinite(x)):
            raise NonFinite("non-finite value produced during step")


def _hybrid_arrays(sys: ContactSystem, q, p, z, lam, h):
    hh = 0.5 * h
    K0 = sys.K(q, p, z)
    Kp0 = np.asarray(sys.K_p(q, p, z), dtype=float)
    Kq0 = np.asarray(sys.K_q(q, p, z), dtype=float)
    Kz0 = float(sys.K_z(q, p, z))
    # auxiliary half steps of z and q from step n
    z_half = z + hh * (K0 - float(np.dot(p, Kp0)))
    q_half = q + hh * Kp0
    den0 = 1.0 - hh * Kz0
    if abs(den0) <= SINGULAR_THRESHOLD:
        raise StepSingular(f"1 - (h/2) K_z = {den0!r} at step start")
    p_half = (p - hh * Kq0) / den0
    Kh = sys.K(q_half, p_half, z_half)
    Kph = np.asarray(sys.K_p(q_half, p_half, z_half), dtype=float)
    z_new = z + h * (Kh - float(np.dot(p_half, Kph)))
    q_new = q + h * Kph
    Kz1 = float(sys.K_z(q_new, p_half, z_new))
    Kq1 = np.asarray(sys.K_q(q_new, p_half, z_new), dtype=float)
    den1 = 1.0 + hh * Kz1
    if abs(den1) <= SINGULAR_THRESHOLD:
        raise StepSingular(f"1 + (h/2) K_z = {den1!r} at step end")
    lam_half = lam * den0
    lam_new = lam_half / den1
    p_new = p_half * den1 - hh * Kq1
    _finite(q_new, p_new, z_new, lam_new)
    return q_new, p_new, z_new, lam_new


def hybrid_leapfrog_step(sys: ContactSystem, s: ContactState, h: float) -> ContactState:
    """Advance ``s`` by one hybrid leap-frog step of size ``h``.

    Half steps of ``z`` and ``q`` are taken explicitly from step ``n``; the
    momentum uses the lambda-free recursion

        p_half = (p - h/2 K_q) / (1 - h/2 K_z)
        p_new  = p_half (1 + h/2 K_z') - h/2 K_q'

    with primed partials evaluated at ``(q_new, p_half, z_new)``. ``lambda``
    is updated alongside but never feeds back into ``(q, p, z)``.
    """
    validate(s)
    q, p, z, lam = _hybrid_arrays(sys, np.array(s.q), np.array(s.p), s.z, s.lam, h)
    return validate(ContactState(q=q, p=p, z=z, lam=lam, t=s.t + h))


def _pack(q, p, z, lam):
    return np.concatenate([q, p, [z, lam]])


def _rk4_arrays(sys: ContactSystem, q, p, z, lam, h):
    n = q.shape[0]

    def f(y):
        qq, pp, zz, ll = y[:n], y[n : 2 * n], y[2 * n], y[2 * n + 1]
        K = sys.K(qq, pp, zz)
        Kp = np.asarray(sys.K_p(qq, pp, zz), dtype=float)
        Kq = np.asarray(sys.K_q(qq, pp, zz), dtype=float)
        Kz = float(sys.K_z(qq, pp, zz))
        return _pack(Kp, -Kq + pp * Kz, K - float(np.dot(pp, Kp)), -ll * Kz)

    y = _pack(q, p, z, lam)
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _finite(y)
    return y[:n], y[n : 2 * n], float(y[2 * n]), float(y[2 * n + 1])


def rk4_reference_step(sys: ContactSystem, s: ContactState, h: float) -> ContactState:
    """Classical RK4 on the full ``(q, p, z, lambda)`` contact vector field."""
    validate(s)
    q, p, z, lam = _rk4_arrays(sys, np.array(s.q), np.array(s.p), s.z, s.lam, h)
    return validate(ContactState(q=q, p=p, z=z, lam=lam, t=s.t + h))


_STEPPERS = {Scheme.HybridLeapfrog: _hybrid_arrays, Scheme.RK4Reference: _rk4_arrays}


def integrate(sys: ContactSystem, s0: ContactState, cfg: IntegratorConfig) -> Trajectory:
    """Run ``cfg.n_steps`` steps, recording every ``record_every``-th state and the last.

    On failure raises :class:`IntegrationError` carrying the failing step
    index and the partial trajectory.
    """
    validate(s0)
    step = _STEPPERS[cfg.scheme]
    q, p, z, lam = np.array(s0.q), np.array(s0.p), s0.z, s0.lam
    rows = [(s0.t, q, p, z, lam, float(sys.K(q, p, z)))]
    last = 0
    for k in range(1, cfg.n_steps + 1):
        try:
            q, p, z, lam = step(sys, q, p, z, lam, cfg.h)
            if not lam > 0.0:
                raise NonPositiveLambda(f"lambda left the positive half-line: {lam!r}")
        except ContactError as exc:
            raise IntegrationError(k, exc, Trajectory.from_records(rows, sys.label)) from exc
        if k % cfg.record_every == 0 or k == cfg.n_steps:
            rows.append((s0.t + k * cfg.h, q, p, z, lam, float(sys.K(q, p, z))))
            last = k
    traj = Trajectory.from_records(rows, sys.label)
    traj.meta.update(h=cfg.h, n_steps=cfg.n_steps, record_every=cfg.record_every,
                     scheme=cfg.scheme.value, last_step=last)
    return traj


def _check_underdamped(omega, gamma):
    if not gamma < 2.0 * omega:
        raise OverdampedUnsupported(f"gamma={gamma} >= 2*omega={2 * omega}")
    return math.sqrt(omega * omega - 0.25 * gamma * gamma)


def _qp(omega, gamma, q0, p0, t):
    wd = _check_underdamped(omega, gamma)
    A = q0
    B = (p0 + 0.5 * gamma * q0) / wd
    env = np.exp(-0.5 * gamma * t)
    c, s = np.cos(wd * t), np.sin(wd * t)
    q = env * (A * c + B * s)
    p = env * (-0.5 * gamma * (A * c + B * s) + wd * (B * c - A * s))
    return q, p


def analytic_damped_ho(omega, gamma, q0, p0, z0, lam0, t, with_z=True) -> ContactState:
    """Exact solution of model A at time ``t`` (underdamped only).

    ``q`` and ``p`` are closed form, ``lambda = lam0 exp(gamma t)``; ``z``
    solves ``z' + gamma z = (omega^2 q^2 - p^2)/2`` by adaptive quadrature of
    the integrating-factor integral. With ``with_z=False`` z is NaN.
    """
    q, p = _qp(omega, gamma, q0, p0, t)
    z = math.nan
    if with_z:
        z = _z_increment(omega, gamma, q0, p0, 0.0, t, z0)
    return ContactState(q=[q], p=[p], z=z, lam=lam0 * math.exp(gamma * t), t=t)


def _source(omega, gamma, q0, p0):
    def g(s):
        q, p = _qp(omega, gamma, q0, p0, s)
        return math.exp(gamma * s) * 0.5 * (omega * omega * q * q - p * p)

    return g


def _z_increment(omega, gamma, q0, p0, t0, t1, z_t0):
    g = _source(omega, gamma, q0, p0)
    val, _ = _quad.quad(g, t0, t1, epsabs=1e-13, epsrel=1e-12, limit=200)
    return math.exp(-gamma * t1) * (math.exp(gamma * t0) * z_t0 + val)


def analytic_damped_ho_series(omega, gamma, q0, p0, z0, lam0, times) -> dict:
    """Exact model-A columns ``t, q, p, z, lam`` on an increasing time grid starting at 0."""
    times = np.asarray(times, dtype=float)
    q, p = _qp(omega, gamma, q0, p0, times)
    g = _source(omega, gamma, q0, p0)
    acc = np.empty_like(times)
    total, prev = 0.0, 0.0
    for k, tk in enumerate(times):
        if tk != prev:
            total += _quad.quad(g, prev, tk, epsabs=1e-13, epsrel=1e-12)[0]
        acc[k] = total
        prev = tk
    z = np.exp(-gamma * times) * (z0 + acc)
    return dict(t=times, q=q, p=p, z=z, lam=lam0 * np.exp(gamma * times))


@dataclass(frozen=True)
class ConvergenceResult:
    hs: np.ndarray
    errors: np.ndarray
    order: float
    degenerate: bool = False

    def ratios(self) -> np.ndarray:
        """Successive error ratios ``err(h_k) / err(h_{k+1})``."""
        return self.errors[:-1] / self.errors[1:]


def convergence_order(
    sys: ContactSystem,
    s0: ContactState,
    T: float,
    h_list,
    reference: "ContactState | None" = None,
    scheme: Scheme = Scheme.HybridLeapfrog,
) -> ConvergenceResult:
    """Least-squares slope of ``log(max |q(T) - q_ref(T)|)`` against ``log h``.

    Without ``reference`` the comparison point is a fine RK4 run with step
    ``min(h_list) / 16``. When fewer than two errors are nonzero the fit is
    undefined and the result is flagged ``degenerate`` with ``order = nan``.
    Errors within a few ulps of the reference count as zero.
    """
    hs = np.asarray(sorted(h_list, reverse=True), dtype=float)
    if hs.size < 2:
        raise InsufficientData("need at least two step sizes")
    if reference is None:
        hf = hs[-1] / 16.0
        ref_traj = integrate(sys, s0, IntegratorConfig(hf, _nsteps(T, hf), _nsteps(T, hf),
                                                       Scheme.RK4Reference))
        ref_q = ref_traj.q[-1]
    else:
        ref_q = np.asarray(reference.q, dtype=float)
    errors = []
    for h in hs:
        n = _nsteps(T, h)
        traj = integrate(sys, s0, IntegratorConfig(h, n, n, scheme))
        errors.append(float(np.max(np.abs(traj.q[-1] - ref_q))))
    errors = np.array(errors)
    floor = 64 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(ref_q))))
    good = errors > floor
    if good.sum() < 2:
        return ConvergenceResult(hs, errors, math.nan, degenerate=True)
    slope, _ = np.polyfit(np.log(hs[good]), np.log(errors[good]), 1)
    return ConvergenceResult(hs, errors, float(slope))


def _nsteps(T: float, h: float) -> int:
    n = int(round(T / h))
    if n < 1 or abs(n * h - T) > 1e-9 * max(1.0, abs(T)):
        raise InvalidConfig(f"T={T} is not an integer multiple of h={h}")
    return n
