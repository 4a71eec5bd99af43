"""Continuous-time contact equations of motion and their lifted Hamilton form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFinite, NonPositiveLambda
from .state import ContactState, ContactSystem, LiftedState, validate

__all__ = [
    "StateDerivative",
    "LiftedDerivative",
    "contact_vector_field",
    "lifted_hamiltonian",
    "lifted_hamiltonian_gradient",
    "lifted_vector_field",
    "pushforward",
    "k_rate_identity",
    "h_rate",
]


@dataclass(frozen=True)
class StateDerivative:
    dq: np.ndarray
    dp: np.ndarray
    dz: float
    dlambda: float

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.dq, self.dp, [self.dz, self.dlambda]])


@dataclass(frozen=True)
class LiftedDerivative:
    dq1: np.ndarray
    dp1: np.ndarray
    dq0: float
    dp0: float


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise NonFinite("partial derivative evaluated to a non-finite value")


def _partials(sys: ContactSystem, q, p, z):
    K = float(sys.K(q, p, z))
    Kp = np.asarray(sys.K_p(q, p, z), dtype=float)
    Kq = np.asarray(sys.K_q(q, p, z), dtype=float)
    Kz = float(sys.K_z(q, p, z))
    _check_finite(K, Kp, Kq, Kz)
    return K, Kp, Kq, Kz


def contact_vector_field(sys: ContactSystem, s: ContactState) -> StateDerivative:
    """Evaluate ``q' = K_p, p' = -K_q + p K_z, z' = K - p.K_p, lambda' = -lambda K_z``."""
    validate(s)
    if sys.n != s.n:
        raise DimensionMismatch(f"system has n={sys.n}, state has n={s.n}")
    K, Kp, Kq, Kz = _partials(sys, s.q, s.p, s.z)
    return StateDerivative(
        dq=Kp,
        dp=-Kq + s.p * Kz,
        dz=K - float(np.dot(s.p, Kp)),
        dlambda=-s.lam * Kz,
    )


def lifted_hamiltonian(sys: ContactSystem, ls: LiftedState) -> float:
    """``H(q1, p1, q0, p0) = p0 * K(p1 / p0, q1, q0)``."""
    return ls.p0 * float(sys.K(ls.q1, ls.p1 / ls.p0, ls.q0))


def lifted_hamiltonian_gradient(sys: ContactSystem, ls: LiftedState):
    """Partials ``(H_q1, H_p1, H_q0, H_p0)`` from K's partials via the chain rule.

    With ``p = p1/p0`` and ``lambda = p0``:
    ``d/dp1 = (1/lambda) d/dp`` and ``d/dp0 = d/dlambda - (p/lambda) d/dp``.
    """
    if not ls.p0 > 0.0:
        raise NonPositiveLambda(f"p0 must be positive, got {ls.p0!r}")
    lam = ls.p0
    p = ls.p1 / lam
    K, Kp, Kq, Kz = _partials(sys, ls.q1, p, ls.q0)
    H_p1 = Kp
    H_q1 = lam * Kq
    H_p0 = K - float(np.dot(p, Kp))
    H_q0 = lam * Kz
    return H_q1, H_p1, H_q0, H_p0


def lifted_vector_field(sys: ContactSystem, ls: LiftedState) -> LiftedDerivative:
    """Canonical Hamilton equations for ``H = lambda K`` in lifted coordinates."""
    H_q1, H_p1, H_q0, H_p0 = lifted_hamiltonian_gradient(sys, ls)
    return LiftedDerivative(dq1=H_p1, dp1=-H_q1, dq0=H_p0, dp0=-H_q0)


def pushforward(ls: LiftedState, d: LiftedDerivative) -> StateDerivative:
    """Map a lifted tangent vector back to contact coordinates.

    From ``p = p1/p0``: ``p' = (p1' - p p0') / p0``.
    """
    p = ls.p1 / ls.p0
    return StateDerivative(
        dq=np.asarray(d.dq1, dtype=float),
        dp=(d.dp1 - p * d.dp0) / ls.p0,
        dz=float(d.dq0),
        dlambda=float(d.dp0),
    )


def k_rate_identity(sys: ContactSystem, s: ContactState) -> tuple[float, float]:
    """Return ``(dK/dt by the chain rule, K * K_z)``; the two agree along the flow."""
    validate(s)
    K, Kp, Kq, Kz = _partials(sys, s.q, s.p, s.z)
    f = contact_vector_field(sys, s)
    lhs = float(np.dot(Kp, f.dp) + np.dot(Kq, f.dq)) + Kz * f.dz
    return lhs, K * Kz


def h_rate(sys: ContactSystem, s: ContactState) -> tuple[float, float]:
    """Return ``(lambda * dK/dt, K * dlambda/dt)``; their sum is ``dH/dt = 0``."""
    lhs, _ = k_rate_identity(sys, s)
    f = contact_vector_field(sys, s)
    return s.lam * lhs, float(sys.K(s.q, s.p, s.z)) * f.dlambda
