import numpy as np
import pytest

from contactdyn.diagnostics import (
    action_residual,
    hamiltonian_drift,
    herglotz_residual,
    herglotz_residual_series,
    k_drift,
    symmetry_check_space_inversion,
    sync_metric,
    zero_crossing_period,
)
from contactdyn.errors import (
    EmptyTrajectory,
    LengthMismatch,
    NoCrossings,
    TooShort,
    UnsupportedModel,
)
from contactdyn.integrator import IntegratorConfig, Scheme, Trajectory, integrate
from contactdyn.models import ModelSpec, build, default_experiment
from contactdyn.state import ContactState, ContactSystem

from conftest import free_particle

A_INIT = ContactState(q=[1.0], p=[0.0], z=1.0, lam=1.0)


@pytest.fixture(scope="module")
def model_a_run():
    sys = build(ModelSpec("A"))
    return sys, integrate(sys, A_INIT, IntegratorConfig(0.01, 5000))


@pytest.fixture(scope="module")
def model_d_runs():
    out = {}
    for ex in default_experiment("D"):
        out[ex.spec.g] = integrate(build(ex.spec), ex.initial, ex.config)
    return out


EMPTY = Trajectory.from_records([])


@pytest.mark.parametrize("fn", [hamiltonian_drift, k_drift])
def test_empty_trajectory_rejected(fn):
    with pytest.raises(EmptyTrajectory):
        fn(EMPTY)


def test_empty_trajectory_rejected_by_state_diagnostics():
    sys = build(ModelSpec("A"))
    with pytest.raises(EmptyTrajectory):
        action_residual(EMPTY, sys)
    with pytest.raises(EmptyTrajectory):
        herglotz_residual(EMPTY, sys)


def test_single_state_drift_is_zero():
    traj = integrate(build(ModelSpec("A")), A_INIT, IntegratorConfig(0.01, 0))
    r = hamiltonian_drift(traj)
    assert r.max_abs == 0.0 and r.passed
    assert r.series == [(0.0, 0.0)]


def test_model_a_drift_within_bound(model_a_run):
    _, traj = model_a_run
    r = hamiltonian_drift(traj)
    # measured 1.07e-4 at h=0.01
    assert r.passed and r.value <= 1e-3
    assert len(r.series) == len(traj) and r.series[-1][0] == traj.t[-1]


def test_drift_shrinks_fourfold_when_h_halves():
    sys = build(ModelSpec("A"))
    d = [hamiltonian_drift(integrate(sys, A_INIT, IntegratorConfig(h, int(round(50 / h))))).value
         for h in (0.02, 0.01)]
    assert 3.6 <= d[0] / d[1] <= 4.4


def test_fine_rk4_drift_baseline():
    sys = build(ModelSpec("A"))
    traj = integrate(sys, A_INIT, IntegratorConfig(0.001, 10_000, 10, Scheme.RK4Reference))
    assert hamiltonian_drift(traj).value <= 1e-8


def test_diagnostics_are_pure(model_a_run):
    sys, traj = model_a_run
    for fn in (lambda: hamiltonian_drift(traj), lambda: action_residual(traj, sys),
               lambda: herglotz_residual(traj, sys)):
        assert fn().to_dict() == fn().to_dict()


def test_action_identity_and_quadrature_model_a(model_a_run):
    sys, traj = model_a_run
    r = action_residual(traj, sys)
    assert r.extras["identity_max"] == 0.0
    assert r.value <= 1e-3


def test_action_free_particle_exact():
    p = 1.5
    traj = integrate(free_particle(), ContactState(q=[0.0], p=[p], z=0.0, lam=1.0),
                     IntegratorConfig(0.125, 16))
    T = traj.t[-1]
    assert traj.z[-1] == -T * p * p / 2
    assert action_residual(traj, free_particle()).max_abs == 0.0


def test_herglotz_model_a_default(model_a_run):
    sys, traj = model_a_run
    r = herglotz_residual(traj, sys)
    assert r.passed and r.value <= 5e-3


def test_herglotz_conservative_limit_is_euler_lagrange():
    sys = build(ModelSpec("A", gamma=0.0))
    t = np.linspace(0, 2, 201)
    q, z = np.cos(t), np.full_like(t, 123.0)
    tt, res = herglotz_residual_series(sys, t, q, z)
    h = t[1] - t[0]
    want = (q[2:] - 2 * q[1:-1] + q[:-2]) / h**2 + q[1:-1]
    assert np.array_equal(res[:, 0], want)


def test_herglotz_model_c_uses_double_well_force():
    a, gamma = 1.0, 0.1
    sys = build(ModelSpec("C", a=a, gamma=gamma))
    t = np.linspace(0, 1, 11)
    q = 1.0 + 0.3 * t**2
    z = np.zeros_like(t)
    tt, res = herglotz_residual_series(sys, t, q, z)
    qi = q[1:-1]
    # q'' = 0.6 and q' = 0.6 t are exact for a quadratic under centered differences
    want = 0.6 + 2 * qi * (qi * qi - a * a) + gamma * 0.6 * tt
    assert res[:, 0] == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_herglotz_rejects_non_separable():
    sys = ContactSystem(1, K=lambda q, p, z: float(p[0] * q[0]), K_p=lambda q, p, z: q,
                        K_q=lambda q, p, z: p, K_z=lambda q, p, z: 0.0)
    traj = integrate(sys, A_INIT, IntegratorConfig(0.01, 10))
    with pytest.raises(UnsupportedModel):
        herglotz_residual(traj, sys)


def test_herglotz_needs_three_records():
    sys = build(ModelSpec("A"))
    with pytest.raises(EmptyTrajectory):
        herglotz_residual(integrate(sys, A_INIT, IntegratorConfig(0.01, 1)), sys)


def test_herglotz_coupled_componentwise(model_d_runs):
    sys = build(ModelSpec("D", g=0.8, gamma=0.01))
    r = herglotz_residual(model_d_runs[0.8], sys)
    assert r.value <= 5e-3


def test_space_inversion_model_c():
    plus, minus = default_experiment("C")
    sys = build(plus.spec)
    r = symmetry_check_space_inversion(integrate(sys, plus.initial, plus.config),
                                       integrate(sys, minus.initial, minus.config))
    assert r.value <= 1e-12
    assert r.extras["z"] == 0.0 and r.extras["lambda"] == 0.0


def test_space_inversion_negative_control(model_a_run):
    _, traj = model_a_run
    r = symmetry_check_space_inversion(traj, traj)
    assert r.extras["q"] == 2 * np.max(np.abs(traj.q))
    assert not r.passed


def test_space_inversion_single_records():
    sys = build(ModelSpec("C"))
    cfg = IntegratorConfig(0.01, 0)
    a = integrate(sys, ContactState(q=[2.0], p=[0.5], z=1.0, lam=1.0), cfg)
    b = integrate(sys, ContactState(q=[-2.0], p=[-0.25], z=1.0, lam=1.0), cfg)
    r = symmetry_check_space_inversion(a, b)
    assert r.value == 0.25 and r.extras["q"] == 0.0


def test_space_inversion_length_mismatch():
    sys = build(ModelSpec("C"))
    a = integrate(sys, A_INIT, IntegratorConfig(0.01, 10))
    b = integrate(sys, A_INIT, IntegratorConfig(0.01, 11))
    with pytest.raises(LengthMismatch):
        symmetry_check_space_inversion(a, b)


def test_sync_identical_twins():
    sys = build(ModelSpec("D", omega1_sq=1.0, omega2_sq=1.0, g=0.0, gamma=0.01))
    s = ContactState(q=[1.0, 1.0], p=[0.0, 0.0], z=1.0, lam=1.0)
    traj = integrate(sys, s, IntegratorConfig(0.01, 10_000))
    assert sync_metric(traj) == 1.0


def test_sync_default_pair(model_d_runs):
    # measured 0.8165 and 0.99985
    assert sync_metric(model_d_runs[0.0]) <= 0.95
    assert sync_metric(model_d_runs[0.8]) >= 0.99


def test_sync_errors():
    sys = build(ModelSpec("D"))
    s = ContactState(q=[1.0, -1.0], p=[0.0, 0.0], z=1.0, lam=1.0)
    with pytest.raises(TooShort):
        sync_metric(integrate(sys, s, IntegratorConfig(0.01, 4000)))
    with pytest.raises(NoCrossings):
        sync_metric(integrate(sys, s, IntegratorConfig(0.01, 300)))
    with pytest.raises(UnsupportedModel):
        sync_metric(integrate(build(ModelSpec("A")), A_INIT, IntegratorConfig(0.01, 100)))


def test_zero_crossing_period_of_sine():
    t = np.linspace(0, 20 * np.pi, 20001)
    assert zero_crossing_period(t, np.sin(t)) == pytest.approx(2 * np.pi, rel=1e-9)


def test_conservative_coupled_conserves_k():
    sys = build(ModelSpec("D", g=0.8, gamma=0.0))
    s = ContactState(q=[1.0, -1.0], p=[0.0, 0.0], z=1.0, lam=1.0)
    traj = integrate(sys, s, IntegratorConfig(0.01, 10_000))
    assert k_drift(traj).value <= 1e-4
    assert sync_metric(traj) >= 0.99
