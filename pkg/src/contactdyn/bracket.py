"""Contact Poisson bracket of observables and the evolution law it drives.

For observables ``A(q, p, z, lambda)`` and ``B`` the contact bracket is

    {A, B}_c = sum_i (A_qi B_pi - B_qi A_pi)
               + A_z (lambda B_lambda - p.B_p) - B_z (lambda A_lambda - p.A_p)

and every observable evolves as ``dA/dt = {A, K}_c + A_z K``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFinite
from .state import ContactState, ContactSystem, LiftedState, fd_step, unlift, validate

__all__ = [
    "Observable",
    "coordinate",
    "constant",
    "from_function",
    "from_system",
    "contact_bracket",
    "lifted_partials",
    "lifted_canonical_bracket",
    "observable_rate",
    "richardson_discrepancy",
    "monomial",
]

ScalarFn = Callable[[ContactState], float]
VectorFn = Callable[[ContactState], np.ndarray]


@dataclass(frozen=True)
class Observable:
    """A scalar function on contact phase space together with its partials."""

    value: ScalarFn
    d_q: VectorFn
    d_p: VectorFn
    d_z: ScalarFn
    d_lambda: ScalarFn
    name: str = ""
    fd_generated: bool = False

    def __call__(self, s: ContactState) -> float:
        return float(self.value(s))

    def __mul__(self, other: "Observable") -> "Observable":
        a, b = self, other
        return Observable(
            value=lambda s: a(s) * b(s),
            d_q=lambda s: np.asarray(a.d_q(s)) * b(s) + a(s) * np.asarray(b.d_q(s)),
            d_p=lambda s: np.asarray(a.d_p(s)) * b(s) + a(s) * np.asarray(b.d_p(s)),
            d_z=lambda s: a.d_z(s) * b(s) + a(s) * b.d_z(s),
            d_lambda=lambda s: a.d_lambda(s) * b(s) + a(s) * b.d_lambda(s),
            name=f"({a.name})*({b.name})",
        )

    def __add__(self, other: "Observable") -> "Observable":
        a, b = self, other
        return Observable(
            value=lambda s: a(s) + b(s),
            d_q=lambda s: np.asarray(a.d_q(s)) + np.asarray(b.d_q(s)),
            d_p=lambda s: np.asarray(a.d_p(s)) + np.asarray(b.d_p(s)),
            d_z=lambda s: a.d_z(s) + b.d_z(s),
            d_lambda=lambda s: a.d_lambda(s) + b.d_lambda(s),
            name=f"({a.name})+({b.name})",
        )


def monomial(coef: float, eq, ep, ez: int = 0, el: int = 0) -> Observable:
    """``coef * prod q_i^eq_i * prod p_i^ep_i * z^ez * lambda^el`` with exact partials."""
    eq = np.asarray(eq, dtype=int)
    ep = np.asarray(ep, dtype=int)

    def power(x, k):
        return np.asarray(x, dtype=float) ** k

    def dpower(x, k):
        k = np.asarray(k)
        return np.where(k > 0, k * np.asarray(x, dtype=float) ** np.maximum(k - 1, 0), 0.0)

    def parts(s):
        fq, fp = power(s.q, eq), power(s.p, ep)
        return fq, fp, float(power(np.float64(s.z), ez)), float(power(np.float64(s.lam), el))

    def value(s):
        fq, fp, fz, fl = parts(s)
        return coef * float(np.prod(fq) * np.prod(fp)) * fz * fl

    def grad_vec(which):
        def d(s):
            fq, fp, fz, fl = parts(s)
            x, k, mine, other = (s.q, eq, fq, fp) if which == "q" else (s.p, ep, fp, fq)
            out = np.empty(s.n)
            for i in range(s.n):
                rest = np.prod(np.delete(mine, i))
                out[i] = coef * dpower(x[i], k[i]) * rest * np.prod(other) * fz * fl
            return out

        return d

    def d_z(s):
        fq, fp, _, fl = parts(s)
        return coef * float(np.prod(fq) * np.prod(fp)) * float(dpower(np.float64(s.z), ez)) * fl

    def d_l(s):
        fq, fp, fz, _ = parts(s)
        return coef * float(np.prod(fq) * np.prod(fp)) * fz * float(dpower(np.float64(s.lam), el))

    name = f"{coef:g}*q^{eq.tolist()}*p^{ep.tolist()}*z^{ez}*lambda^{el}"
    return Observable(value, grad_vec("q"), grad_vec("p"), d_z, d_l, name)


def _zeros(s: ContactState) -> np.ndarray:
    return np.zeros(s.n)


def _unit(s: ContactState, i: int) -> np.ndarray:
    e = np.zeros(s.n)
    e[i] = 1.0
    return e


def coordinate(which: str, i: int = 0) -> Observable:
    """Coordinate observable: ``"q"``/``"p"`` (component ``i``), ``"z"`` or ``"lambda"``."""
    zero = lambda s: 0.0  # noqa: E731
    one = lambda s: 1.0  # noqa: E731
    if which == "q":
        return Observable(lambda s: s.q[i], lambda s: _unit(s, i), _zeros, zero, zero, f"q{i + 1}")
    if which == "p":
        return Observable(lambda s: s.p[i], _zeros, lambda s: _unit(s, i), zero, zero, f"p{i + 1}")
    if which == "z":
        return Observable(lambda s: s.z, _zeros, _zeros, one, zero, "z")
    if which in ("lambda", "lam"):
        return Observable(lambda s: s.lam, _zeros, _zeros, zero, one, "lambda")
    raise ValueError(f"unknown coordinate {which!r}")


def constant(c: float) -> Observable:
    zero = lambda s: 0.0  # noqa: E731
    return Observable(lambda s: c, _zeros, _zeros, zero, zero, repr(c))


def from_system(sys: ContactSystem) -> Observable:
    """Adapt ``K`` to an observable; ``K_lambda = 0`` since K does not depend on lambda."""
    return Observable(
        value=lambda s: sys.K(s.q, s.p, s.z),
        d_q=lambda s: sys.K_q(s.q, s.p, s.z),
        d_p=lambda s: sys.K_p(s.q, s.p, s.z),
        d_z=lambda s: sys.K_z(s.q, s.p, s.z),
        d_lambda=lambda s: 0.0,
        name=sys.label or "K",
    )


def _central(f: ScalarFn, s: ContactState, which: str, i: int, shrink: float) -> float:
    if which in ("q", "p"):
        base = np.array(getattr(s, which))
        step = float(fd_step(base[i])) * shrink
        up, dn = base.copy(), base.copy()
        up[i] += step
        dn[i] -= step
        return (f(s.replace(**{which: up})) - f(s.replace(**{which: dn}))) / (up[i] - dn[i])
    x = getattr(s, which)
    step = float(fd_step(x)) * shrink
    up, dn = x + step, x - step
    return (f(s.replace(**{which: up})) - f(s.replace(**{which: dn}))) / (up - dn)


def _fd_partials(f: ScalarFn, shrink: float):
    def d_vec(which):
        return lambda s: np.array([_central(f, s, which, i, shrink) for i in range(s.n)])

    return (
        d_vec("q"),
        d_vec("p"),
        lambda s: _central(f, s, "z", 0, shrink),
        lambda s: _central(f, s, "lam", 0, shrink),
    )


def from_function(f: ScalarFn, name: str = "") -> Observable:
    """Observable with central finite-difference partials (step ``cbrt(eps) max(1,|x|)``)."""
    d_q, d_p, d_z, d_lam = _fd_partials(f, 1.0)
    return Observable(f, d_q, d_p, d_z, d_lam, name, fd_generated=True)


def richardson_discrepancy(obs: Observable, s: ContactState) -> float:
    """Relative gap between the observable's partials and a half-step FD evaluation."""
    d_q, d_p, d_z, d_lam = _fd_partials(obs.value, 0.5)
    a = np.concatenate([obs.d_q(s), obs.d_p(s), [obs.d_z(s), obs.d_lambda(s)]])
    b = np.concatenate([d_q(s), d_p(s), [d_z(s), d_lam(s)]])
    return float(np.max(np.abs(a - b)) / (1.0 + np.max(np.abs(a))))


def _grad(obs: Observable, s: ContactState):
    gq = np.asarray(obs.d_q(s), dtype=float)
    gp = np.asarray(obs.d_p(s), dtype=float)
    gz = float(obs.d_z(s))
    gl = float(obs.d_lambda(s))
    return gq, gp, gz, gl


def contact_bracket(A: Observable, B: Observable, s: ContactState) -> float:
    validate(s)
    aq, ap, az, al = _grad(A, s)
    bq, bp, bz, bl = _grad(B, s)
    canonical = float(np.dot(aq, bp) - np.dot(bq, ap))
    extra = az * (s.lam * bl - float(np.dot(s.p, bp))) - bz * (s.lam * al - float(np.dot(s.p, ap)))
    out = canonical + extra
    if not np.isfinite(out):
        raise NonFinite(f"bracket {{{A.name}, {B.name}}}_c is not finite")
    return out


def lifted_partials(obs: Observable, ls: LiftedState):
    """Partials of ``A`` pulled back to ``(q1, p1, q0, p0)``."""
    s = unlift(ls)
    aq, ap, az, al = _grad(obs, s)
    return aq, ap / s.lam, az, al - float(np.dot(s.p, ap)) / s.lam


def lifted_canonical_bracket(A: Observable, B: Observable, ls: LiftedState) -> float:
    """Ordinary Poisson bracket over the pairs ``(q1, p1)`` and ``(q0, p0)``."""
    aq1, ap1, aq0, ap0 = lifted_partials(A, ls)
    bq1, bp1, bq0, bp0 = lifted_partials(B, ls)
    return float(np.dot(aq1, bp1) - np.dot(bq1, ap1)) + (aq0 * bp0 - bq0 * ap0)


def observable_rate(A: Observable, sys: ContactSystem, s: ContactState) -> float:
    """``dA/dt = {A, K}_c + A_z K``."""
    K = from_system(sys)
    return contact_bracket(A, K, s) + float(A.d_z(s)) * K(s)
