"""Phase-space data model for contact dynamics.

A contact phase point carries positions ``q``, momenta ``p`` (both of length
``n``), the contact variable ``z`` and the integration factor ``lambda``.
Multiplying the contact one-form by ``lambda`` turns it into an ordinary
symplectic one-form in the lifted coordinates

    q1 = q,  p1 = lambda * p,  q0 = z,  p0 = lambda,

where ``H = lambda * K`` is an ordinary (conserved) Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NonFinite, NonPositiveLambda

__all__ = [
    "ContactState",
    "LiftedState",
    "ContactSystem",
    "validate",
    "lift",
    "unlift",
    "time_inversion",
    "lifted_time_inversion",
    "fd_step",
]


def _frozen_vector(x) -> np.ndarray:
    arr = np.array(x, dtype=float, ndmin=1, copy=True)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def fd_step(x) -> np.ndarray | float:
    """Central-difference step ``cbrt(eps) * max(1, |x|)``."""
    return np.cbrt(np.finfo(float).eps) * np.maximum(1.0, np.abs(x))


@dataclass(frozen=True, eq=False)
class ContactState:
    """A point ``(q, p, z, lambda)`` of contact phase space at time ``t``.

    Construction only normalises types; call :func:`validate` to enforce the
    invariants (equal lengths, ``lambda > 0``, finite entries).
    """

    q: np.ndarray
    p: np.ndarray
    z: float
    lam: float
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", _frozen_vector(self.q))
        object.__setattr__(self, "p", _frozen_vector(self.p))
        object.__setattr__(self, "z", float(self.z))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def replace(self, **changes) -> "ContactState":
        kw = dict(q=self.q, p=self.p, z=self.z, lam=self.lam, t=self.t)
        kw.update(changes)
        return ContactState(**kw)

    def __eq__(self, other):
        if not isinstance(other, ContactState):
            return NotImplemented
        return (
            np.array_equal(self.q, other.q)
            and np.array_equal(self.p, other.p)
            and self.z == other.z
            and self.lam == other.lam
            and self.t == other.t
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"ContactState(q={self.q.tolist()}, p={self.p.tolist()}, "
            f"z={self.z!r}, lam={self.lam!r}, t={self.t!r})"
        )


@dataclass(frozen=True, eq=False)
class LiftedState:
    """Canonical coordinates ``(q1, p1, q0, p0) = (q, lambda*p, z, lambda)``."""

    q1: np.ndarray
    p1: np.ndarray
    q0: float
    p0: float
    t: float = 0.0
    # set by lift(): float division cannot always undo lambda * p exactly
    _source: "ContactState | None" = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "q1", _frozen_vector(self.q1))
        object.__setattr__(self, "p1", _frozen_vector(self.p1))
        object.__setattr__(self, "q0", float(self.q0))
        object.__setattr__(self, "p0", float(self.p0))
        object.__setattr__(self, "t", float(self.t))

    def __eq__(self, other):
        if not isinstance(other, LiftedState):
            return NotImplemented
        return (
            np.array_equal(self.q1, other.q1)
            and np.array_equal(self.p1, other.p1)
            and self.q0 == other.q0
            and self.p0 == other.p0
            and self.t == other.t
        )

    __hash__ = None


@dataclass(frozen=True)
class ContactSystem:
    """A contact Hamiltonian ``K(q, p, z)`` with its analytic partials.

    All callables take ``(q, p, z)`` with ``q`` and ``p`` 1-d arrays of length
    ``n``; ``K`` and ``K_z`` return floats, ``K_p`` and ``K_q`` return arrays.
    ``K`` never depends on ``lambda``, so it is not an argument.

    ``separable`` marks Hamiltonians of the form ``|p|^2/2 + V(q, z)``, for
    which the Herglotz residual diagnostic is defined.
    """

    n: int
    K: Callable[[np.ndarray, np.ndarray, float], float]
    K_p: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    K_q: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    K_z: Callable[[np.ndarray, np.ndarray, float], float]
    label: str = ""
    separable: bool = field(default=False)

    def partials_discrepancy(self, s: ContactState) -> float:
        """Largest relative gap between supplied partials and central differences of K."""
        q, p, z = np.array(s.q), np.array(s.p), s.z
        worst = 0.0

        def fd(vec, i, make):
            hstep = float(fd_step(vec[i]))
            up, dn = vec.copy(), vec.copy()
            up[i] += hstep
            dn[i] -= hstep
            return (make(up) - make(dn)) / (up[i] - dn[i])

        kp = np.asarray(self.K_p(q, p, z), dtype=float)
        kq = np.asarray(self.K_q(q, p, z), dtype=float)
        pairs = []
        for i in range(self.n):
            pairs.append((kp[i], fd(p, i, lambda v: self.K(q, v, z))))
            pairs.append((kq[i], fd(q, i, lambda v: self.K(v, p, z))))
        zs = np.array([z])
        pairs.append((float(self.K_z(q, p, z)), fd(zs, 0, lambda v: self.K(q, p, v[0]))))
        scale = 1.0 + max(abs(a) for a, _ in pairs)
        for exact, approx in pairs:
            worst = max(worst, abs(exact - approx) / scale)
        return worst


def validate(state: ContactState) -> ContactState:
    """Return ``state`` unchanged, or raise if it violates an invariant."""
    if state.q.shape != state.p.shape or state.q.shape[0] < 1:
        raise DimensionMismatch(
            f"q has length {state.q.shape[0]} but p has length {state.p.shape[0]}"
        )
    values = np.concatenate([state.q, state.p, [state.z, state.lam, state.t]])
    if not np.all(np.isfinite(values)):
        raise NonFinite(f"non-finite entry in {state!r}")
    if not state.lam > 0.0:
        raise NonPositiveLambda(f"lambda must be positive, got {state.lam!r}")
    return state


def lift(state: ContactState) -> LiftedState:
    validate(state)
    return LiftedState(
        q1=state.q,
        p1=state.lam * state.p,
        q0=state.z,
        p0=state.lam,
        t=state.t,
        _source=state,
    )


def unlift(ls: LiftedState) -> ContactState:
    """Inverse of :func:`lift`.

    Exact for lifted states produced by :func:`lift`; otherwise ``p = p1 / p0``
    is correctly rounded.
    """
    if not ls.p0 > 0.0:
        raise NonPositiveLambda(f"p0 must be positive, got {ls.p0!r}")
    if ls._source is not None:
        return ls._source
    return ContactState(q=ls.q1, p=ls.p1 / ls.p0, z=ls.q0, lam=ls.p0, t=ls.t)


def time_inversion(state: ContactState) -> ContactState:
    """``T(q, p, z, lambda, t) = (q, -p, -z, lambda, -t)``, applied componentwise."""
    validate(state)
    return ContactState(q=state.q, p=-state.p, z=-state.z, lam=state.lam, t=-state.t)


def lifted_time_inversion(ls: LiftedState) -> LiftedState:
    """Map induced on lifted coordinates by :func:`time_inversion`."""
    src = ls._source
    return LiftedState(
        q1=ls.q1,
        p1=-ls.p1,
        q0=-ls.q0,
        p0=ls.p0,
        t=-ls.t,
        _source=None if src is None else time_inversion(src),
    )
