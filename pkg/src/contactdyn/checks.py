"""Invariant suite run by ``contactdyn check``.

Each check returns ``(passed, detail)``. Random states come from a fixed
seed so the table is reproducible.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import models
from .bracket import (
    contact_bracket,
    coordinate,
    from_system,
    lifted_canonical_bracket,
    monomial,
    observable_rate,
)
from .diagnostics import (
    action_residual,
    hamiltonian_drift,
    herglotz_residual,
    herglotz_residual_series,
    k_drift,
    symmetry_check_space_inversion,
    sync_metric,
)
from .integrator import (
    IntegratorConfig,
    Scheme,
    analytic_damped_ho,
    analytic_damped_ho_series,
    convergence_order,
    integrate,
)
from .state import ContactState, lift, time_inversion, unlift
from .vectorfield import contact_vector_field, k_rate_identity, lifted_vector_field, pushforward

__all__ = ["Check", "CHECKS", "SUITES", "random_state", "run_checks"]

SEED = 20240601


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    fn: Callable[[], "tuple[bool, str]"]


def random_state(rng: np.random.Generator, n: int) -> ContactState:
    return ContactState(
        q=rng.uniform(-2, 2, n),
        p=rng.uniform(-2, 2, n),
        z=rng.uniform(-2, 2),
        lam=float(np.exp(rng.uniform(-1, 1))),
        t=rng.uniform(0, 10),
    )


def _zoo():
    specs = [ex.spec for kind in "ABCD" for ex in models.default_experiment(kind)]
    seen, out = set(), []
    for s in specs:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return [(s, models.build(s)) for s in out]


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(b))))


# lift


def check_lift_roundtrip():
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        s = random_state(rng, int(rng.integers(1, 4)))
        if unlift(lift(s)) != s or time_inversion(time_inversion(s)) != s:
            return False, f"round trip failed at {s!r}"
    return True, "100 states"


# vector field


def check_pushforward():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _, sys in _zoo():
        for _ in range(100):
            s = random_state(rng, sys.n)
            ls = lift(s)
            a = pushforward(ls, lifted_vector_field(sys, ls)).as_array()
            b = contact_vector_field(sys, s).as_array()
            worst = max(worst, _rel(a, b))
    return worst <= 1e-10, f"max rel {worst:.2e}"


def check_k_rate():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _, sys in _zoo():
        for _ in range(100):
            lhs, rhs = k_rate_identity(sys, random_state(rng, sys.n))
            worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    return worst <= 1e-10, f"max {worst:.2e}"


def check_lambda_independence():
    rng = np.random.default_rng(SEED + 3)
    for _, sys in _zoo():
        s = random_state(rng, sys.n)
        a = contact_vector_field(sys, s)
        b = contact_vector_field(sys, s.replace(lam=3.7 * s.lam))
        if not (np.array_equal(a.dq, b.dq) and np.array_equal(a.dp, b.dp) and a.dz == b.dz):
            return False, sys.label
    return True, "bit-identical"


# models


def check_model_partials():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for _, sys in _zoo():
        for _ in range(250):
            worst = max(worst, sys.partials_discrepancy(random_state(rng, sys.n)))
    return worst <= 1e-6, f"max rel {worst:.2e}"


def check_time_inversion_parity():
    rng = np.random.default_rng(SEED + 5)
    A = models.build(models.ModelSpec("A"))
    B = models.build(models.ModelSpec("B"))
    for _ in range(50):
        s = random_state(rng, 1)
        ts = time_inversion(s)
        if B.K(ts.q, ts.p, ts.z) != B.K(s.q, s.p, s.z):
            return False, "B not T-even"
        if A.K(ts.q, ts.p, ts.z) == A.K(s.q, s.p, s.z):
            return False, "A unexpectedly T-even"
    return True, "B even, A not"


# bracket


def _random_poly(rng, n, terms=3):
    obs = None
    for _ in range(terms):
        m = monomial(
            float(rng.uniform(-1, 1)),
            rng.integers(0, 3, n),
            rng.integers(0, 3, n),
            int(rng.integers(0, 3)),
            int(rng.integers(0, 3)),
        )
        obs = m if obs is None else obs + m
    return obs


def check_fundamental_brackets():
    rng = np.random.default_rng(SEED + 6)
    q, p, z, lam = coordinate("q"), coordinate("p"), coordinate("z"), coordinate("lambda")
    for _ in range(20):
        s = random_state(rng, 1)
        got = (contact_bracket(q, p, s), contact_bracket(z, lam, s), contact_bracket(z, p, s))
        want = (1.0, s.lam, -s.p[0])
        if max(abs(a - b) for a, b in zip(got, want)) > 1e-12:
            return False, f"got {got}, want {want}"
    return True, "{q,p}=1, {z,lambda}=lambda, {z,p}=-p"


def check_bracket_laws():
    rng = np.random.default_rng(SEED + 7)
    worst_anti = worst_leib = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 3))
        A, B, C = (_random_poly(rng, n) for _ in range(3))
        s = random_state(rng, n)
        ab, ba = contact_bracket(A, B, s), contact_bracket(B, A, s)
        worst_anti = max(worst_anti, abs(ab + ba) / (1.0 + abs(ab)))
        lhs = contact_bracket(A, B * C, s)
        rhs = contact_bracket(A, B, s) * C(s) + B(s) * contact_bracket(A, C, s)
        worst_leib = max(worst_leib, abs(lhs - rhs) / (1.0 + abs(rhs)))
    ok = worst_anti <= 1e-10 and worst_leib <= 1e-10
    return ok, f"antisymmetry {worst_anti:.1e}, Leibniz {worst_leib:.1e}"


def check_bracket_field_equivalence():
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for _, sys in _zoo():
        for _ in range(25):
            s = random_state(rng, sys.n)
            f = contact_vector_field(sys, s)
            rates = [observable_rate(coordinate("q", i), sys, s) for i in range(sys.n)]
            rates += [observable_rate(coordinate("p", i), sys, s) for i in range(sys.n)]
            rates += [observable_rate(coordinate("z"), sys, s), observable_rate(coordinate("lambda"), sys, s)]
            worst = max(worst, _rel(rates, f.as_array()))
    return worst <= 1e-12, f"max rel {worst:.1e}"


def check_bracket_scaling():
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 3))
        A, B = _random_poly(rng, n), _random_poly(rng, n)
        s = random_state(rng, n)
        c = contact_bracket(A, B, s)
        l = s.lam * lifted_canonical_bracket(A, B, lift(s))
        worst = max(worst, abs(c - l) / (1.0 + abs(c)))
    return worst <= 1e-10, f"max rel {worst:.1e}"


# integrator properties


def check_lambda_decoupling():
    for kind in "ABCD":
        for ex in models.default_experiment(kind):
            sys = models.build(ex.spec)
            a = integrate(sys, ex.initial, ex.config)
            b = integrate(sys, ex.initial.replace(lam=2.0), ex.config)
            if not (np.array_equal(a.q, b.q) and np.array_equal(a.p, b.p) and np.array_equal(a.z, b.z)):
                return False, ex.name
    return True, "all presets bit-identical"


def _model_a_run(h):
    ex = models.default_experiment("A")[0]
    return integrate(models.build(ex.spec), ex.initial, IntegratorConfig(h, int(round(50 / h))))


def check_h_drift():
    d1 = hamiltonian_drift(_model_a_run(0.01)).value
    d2 = hamiltonian_drift(_model_a_run(0.005)).value
    ratio = d1 / d2 if d2 > 0 else float("inf")
    ok = d1 <= 1e-3 and 3.5 <= ratio <= 4.5
    return ok, f"drift {d1:.2e}, halving ratio {ratio:.2f}"


def check_conservative_k_drift():
    ex = models.default_experiment("D")[1]
    spec = dataclasses.replace(ex.spec, gamma=0.0)
    r = k_drift(integrate(models.build(spec), ex.initial, ex.config), threshold=1e-4)
    return r.passed, f"K drift {r.value:.2e}"


def check_convergence_orders():
    ex = models.default_experiment("A")[0]
    sys = models.build(ex.spec)
    ref = analytic_damped_ho(1.0, 0.1, 1.0, 0.0, 1.0, 1.0, 10.0, with_z=False)
    hs = [0.04, 0.02, 0.01, 0.005]
    hyb = convergence_order(sys, ex.initial, 10.0, hs, reference=ref)
    rk = convergence_order(sys, ex.initial, 10.0, hs, reference=ref, scheme=Scheme.RK4Reference)
    ok = abs(hyb.order - 2.0) <= 0.2 and abs(rk.order - 4.0) <= 0.3
    return ok, f"hybrid {hyb.order:.3f}, rk4 {rk.order:.3f}"


def check_accuracy_vs_analytic():
    errs = []
    for h in (0.02, 0.01):
        tr = _model_a_run(h)
        ref = analytic_damped_ho_series(1.0, 0.1, 1.0, 0.0, 1.0, 1.0, tr.t)
        errs.append(float(np.max(np.abs(tr.q[:, 0] - ref["q"]))))
    ratio = errs[0] / errs[1]
    return 3.5 <= ratio <= 4.5, f"max |dq| {errs[1]:.2e} at h=0.01, ratio {ratio:.2f}"


def check_slower_decay():
    peaks = {}
    for kind in "AB":
        ex = models.default_experiment(kind)[0]
        tr = integrate(models.build(ex.spec), ex.initial, ex.config)
        win = (tr.t >= 40.0) & (tr.t <= 50.0)
        peaks[kind] = float(np.max(np.abs(tr.q[win, 0])))
    return peaks["B"] > peaks["A"], f"peak A {peaks['A']:.4f}, B {peaks['B']:.4f}"


def check_space_inversion():
    plus, minus = models.default_experiment("C")
    sys = models.build(plus.spec)
    r = symmetry_check_space_inversion(
        integrate(sys, plus.initial, plus.config), integrate(sys, minus.initial, minus.config)
    )
    return r.passed, f"mirror residual {r.value:.1e}"


def check_sync():
    off, on = models.default_experiment("D")
    s_off = sync_metric(integrate(models.build(off.spec), off.initial, off.config))
    s_on = sync_metric(integrate(models.build(on.spec), on.initial, on.config))
    return s_on >= 0.99 and s_off <= 0.95, f"g=0.0: {s_off:.4f}, g=0.8: {s_on:.4f}"


def check_action():
    ex = models.default_experiment("A")[0]
    sys = models.build(ex.spec)
    r = action_residual(integrate(sys, ex.initial, ex.config), sys, threshold=1e-3)
    ok = r.passed and r.extras["identity_max"] == 0.0
    return ok, f"quadrature gap {r.value:.1e}"


def check_herglotz():
    ex = models.default_experiment("A")[0]
    sys = models.build(ex.spec)
    tr = integrate(sys, ex.initial, ex.config)
    num = herglotz_residual(tr, sys).value
    ref = analytic_damped_ho_series(1.0, 0.1, 1.0, 0.0, 1.0, 1.0, tr.t)
    _, res = herglotz_residual_series(sys, ref["t"], ref["q"], ref["z"])
    bound = 2.0 * float(np.max(np.abs(res)))
    return num <= bound, f"residual {num:.1e} vs bound {bound:.1e}"


CHECKS = [
    Check("lift", "lift/unlift and T round trips", check_lift_roundtrip),
    Check("models", "analytic partials vs finite differences", check_model_partials),
    Check("models", "time-inversion parity of K (A odd, B even)", check_time_inversion_parity),
    Check("vectorfield", "lifted field pushes forward to contact field", check_pushforward),
    Check("vectorfield", "dK/dt = K K_z", check_k_rate),
    Check("vectorfield", "(q, p, z) rates independent of lambda", check_lambda_independence),
    Check("bracket", "fundamental brackets", check_fundamental_brackets),
    Check("bracket", "antisymmetry and Leibniz rule", check_bracket_laws),
    Check("bracket", "observable rates reproduce the vector field", check_bracket_field_equivalence),
    Check("bracket", "contact bracket = lambda x lifted bracket", check_bracket_scaling),
    Check("decoupling", "(q, p, z) bit-identical for lambda0 = 1, 2", check_lambda_decoupling),
    Check("drift", "H = lambda K drift, model A", check_h_drift),
    Check("drift", "K drift, model D with gamma = 0", check_conservative_k_drift),
    Check("convergence", "model A accuracy vs analytic solution", check_accuracy_vs_analytic),
    Check("convergence", "orders: hybrid 2, RK4 4", check_convergence_orders),
    Check("decay", "model B decays slower than A", check_slower_decay),
    Check("symmetry", "space inversion, model C", check_space_inversion),
    Check("sync", "frequency locking, model D", check_sync),
    Check("action", "z = -int J dt, model A", check_action),
    Check("herglotz", "Herglotz residual, model A", check_herglotz),
]

SUITES = sorted({c.suite for c in CHECKS})


def run_checks(only: "list[str] | None" = None):
    """Yield ``(check, passed, detail)``; exceptions count as failures."""
    for c in CHECKS:
        if only and c.suite not in only:
            continue
        try:
            ok, detail = c.fn()
        except Exception as exc:  # noqa: BLE001
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield c, bool(ok), detail
