"""The four dissipative test systems and their default experiment settings.

A  damped harmonic oscillator, linear in z:   K = (p^2 + w^2 q^2)/2 - gamma z
B  damped harmonic oscillator, quadratic in z: K = (p^2 + w^2 q^2)/2 - gamma z^2
C  damped double well:                          K = p^2/2 + (q^2 - a^2)^2/2 - gamma z
D  two coupled oscillators sharing one z:
   K = (p1^2 + w1^2 q1^2)/2 + (p2^2 + w2^2 q2^2)/2 + g q1^2 q2^2 - gamma z
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import InvalidSpec
from .state import ContactState, ContactSystem

__all__ = ["ModelKind", "ModelSpec", "Experiment", "build", "default_experiment"]


class ModelKind(str, enum.Enum):
    DampedHO_Linear = "A"
    DampedHO_Quadratic = "B"
    DampedDoubleWell = "C"
    CoupledOscillators = "D"

    @classmethod
    def parse(cls, text: "str | ModelKind") -> "ModelKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip()
        for kind in cls:
            if key.upper() == kind.value or key == kind.name:
                return kind
        raise InvalidSpec(f"unknown model kind {text!r}")


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    omega: float = 1.0
    gamma: float = 0.1
    a: float = 1.0
    omega1_sq: float = 1.2
    omega2_sq: float = 0.8
    g: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        for f in fields(self):
            if f.name != "kind":
                object.__setattr__(self, f.name, float(getattr(self, f.name)))

    @property
    def n(self) -> int:
        return 2 if self.kind is ModelKind.CoupledOscillators else 1

    def check(self) -> "ModelSpec":
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name != "kind" and not math.isfinite(v):
                raise InvalidSpec(f"{f.name} must be finite, got {v!r}")
        if self.gamma < 0.0:
            raise InvalidSpec(f"gamma must be >= 0, got {self.gamma}")
        if self.kind in (ModelKind.DampedHO_Linear, ModelKind.DampedHO_Quadratic) and self.omega <= 0:
            raise InvalidSpec(f"omega must be > 0, got {self.omega}")
        if self.kind is ModelKind.CoupledOscillators:
            if self.omega1_sq <= 0 or self.omega2_sq <= 0:
                raise InvalidSpec("omega1_sq and omega2_sq must be > 0")
            if self.g < 0:
                raise InvalidSpec(f"g must be >= 0, got {self.g}")
        return self


def _damped_ho_linear(omega: float, gamma: float) -> ContactSystem:
    w2 = omega**2
    return ContactSystem(
        n=1,
        K=lambda q, p, z: 0.5 * (p[0] * p[0] + w2 * q[0] * q[0]) - gamma * z,
        K_p=lambda q, p, z: p,
        K_q=lambda q, p, z: w2 * q,
        K_z=lambda q, p, z: -gamma,
        label="A: damped HO (linear in z)",
        separable=True,
    )


def _damped_ho_quadratic(omega: float, gamma: float) -> ContactSystem:
    w2 = omega**2
    return ContactSystem(
        n=1,
        K=lambda q, p, z: 0.5 * (p[0] * p[0] + w2 * q[0] * q[0]) - gamma * z * z,
        K_p=lambda q, p, z: p,
        K_q=lambda q, p, z: w2 * q,
        K_z=lambda q, p, z: -2.0 * gamma * z,
        label="B: damped HO (quadratic in z)",
        separable=True,
    )


def _double_well(a: float, gamma: float) -> ContactSystem:
    a2 = a * a

    def K(q, p, z):
        u = q[0] * q[0] - a2
        return 0.5 * p[0] * p[0] + 0.5 * u * u - gamma * z

    return ContactSystem(
        n=1,
        K=K,
        K_p=lambda q, p, z: p,
        K_q=lambda q, p, z: 2.0 * q * (q * q - a2),
        K_z=lambda q, p, z: -gamma,
        label="C: damped double well",
        separable=True,
    )


def _coupled(w1sq: float, w2sq: float, g: float, gamma: float) -> ContactSystem:
    w = np.array([w1sq, w2sq])

    def K(q, p, z):
        return (
            0.5 * (p[0] * p[0] + w1sq * q[0] * q[0])
            + 0.5 * (p[1] * p[1] + w2sq * q[1] * q[1])
            + g * q[0] * q[0] * q[1] * q[1]
            - gamma * z
        )

    def K_q(q, p, z):
        return w * q + 2.0 * g * q * (q[::-1] * q[::-1])

    return ContactSystem(
        n=2,
        K=K,
        K_p=lambda q, p, z: p,
        K_q=K_q,
        K_z=lambda q, p, z: -gamma,
        label="D: coupled oscillators",
        separable=True,
    )


def build(spec: ModelSpec) -> ContactSystem:
    spec.check()
    if spec.kind is ModelKind.DampedHO_Linear:
        return _damped_ho_linear(spec.omega, spec.gamma)
    if spec.kind is ModelKind.DampedHO_Quadratic:
        return _damped_ho_quadratic(spec.omega, spec.gamma)
    if spec.kind is ModelKind.DampedDoubleWell:
        return _double_well(spec.a, spec.gamma)
    return _coupled(spec.omega1_sq, spec.omega2_sq, spec.g, spec.gamma)


@dataclass(frozen=True)
class Experiment:
    """One run: model parameters, initial state and integrator settings."""

    name: str
    spec: ModelSpec
    initial: ContactState
    config: "IntegratorConfig"  # noqa: F821


# run horizons are conventions: T=50 for A/B/C, T=100 for D
_HORIZON = {"A": 50.0, "B": 50.0, "C": 50.0, "D": 100.0}


def default_experiment(kind: "str | ModelKind") -> list[Experiment]:
    """Published settings for a model; C has two initial states, D two couplings."""
    from .integrator import IntegratorConfig

    kind = ModelKind.parse(kind)
    h = 0.01
    cfg = IntegratorConfig(h=h, n_steps=int(round(_HORIZON[kind.value] / h)))
    one = ContactState(q=[1.0], p=[0.0], z=1.0, lam=1.0)
    if kind is ModelKind.DampedHO_Linear:
        return [Experiment("A", ModelSpec(kind, omega=1.0, gamma=0.1), one, cfg)]
    if kind is ModelKind.DampedHO_Quadratic:
        return [Experiment("B", ModelSpec(kind, omega=1.0, gamma=0.1), one, cfg)]
    if kind is ModelKind.DampedDoubleWell:
        spec = ModelSpec(kind, a=1.0, gamma=0.1)
        return [
            Experiment("C+", spec, ContactState(q=[2.0], p=[0.0], z=1.0, lam=1.0), cfg),
            Experiment("C-", spec, ContactState(q=[-2.0], p=[0.0], z=1.0, lam=1.0), cfg),
        ]
    base = ModelSpec(kind, gamma=0.01, omega1_sq=1.2, omega2_sq=0.8, g=0.0)
    init = ContactState(q=[1.0, -1.0], p=[0.0, 0.0], z=1.0, lam=1.0)
    return [
        Experiment("D g=0.0", base, init, cfg),
        Experiment("D g=0.8", replace(base, g=0.8), init, cfg),
    ]
