import numpy as np
import pytest
import sympy as sp
from hypothesis import strategies as st

from contactdyn.bracket import Observable
from contactdyn.models import ModelSpec, build, default_experiment
from contactdyn.state import ContactState, ContactSystem

coord = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
positive = st.floats(min_value=0.05, max_value=5.0, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw, n=None):
    if n is None:
        n = draw(st.integers(min_value=1, max_value=3))
    q = draw(st.lists(coord, min_size=n, max_size=n))
    p = draw(st.lists(coord, min_size=n, max_size=n))
    return ContactState(q=q, p=p, z=draw(coord), lam=draw(positive), t=draw(coord))


def free_particle() -> ContactSystem:
    return ContactSystem(
        n=1,
        K=lambda q, p, z: 0.5 * p[0] * p[0],
        K_p=lambda q, p, z: p,
        K_q=lambda q, p, z: np.zeros_like(q),
        K_z=lambda q, p, z: 0.0,
        label="free particle",
        separable=True,
    )


def zoo_specs():
    seen = []
    for kind in "ABCD":
        for ex in default_experiment(kind):
            if ex.spec not in seen:
                seen.append(ex.spec)
    return seen


@pytest.fixture(params=zoo_specs(), ids=lambda s: f"{s.kind.value}-g{s.g:g}")
def zoo_system(request):
    return request.param, build(request.param)


# sympy-backed observables: partials come from symbolic differentiation, an
# independent route from the library's hand-written chain rules.

Q = sp.symbols("q1:4")
P = sp.symbols("p1:4")
Z, LAM = sp.symbols("z lam")


def sympy_observable(expr, n: int) -> Observable:
    args = list(Q[:n]) + list(P[:n]) + [Z, LAM]
    f = sp.lambdify(args, expr, "math")
    dq = [sp.lambdify(args, sp.diff(expr, Q[i]), "math") for i in range(n)]
    dp = [sp.lambdify(args, sp.diff(expr, P[i]), "math") for i in range(n)]
    dz = sp.lambdify(args, sp.diff(expr, Z), "math")
    dl = sp.lambdify(args, sp.diff(expr, LAM), "math")

    def a(s):
        return [*s.q.tolist(), *s.p.tolist(), s.z, s.lam]

    return Observable(
        value=lambda s: float(f(*a(s))),
        d_q=lambda s: np.array([float(g(*a(s))) for g in dq]),
        d_p=lambda s: np.array([float(g(*a(s))) for g in dp]),
        d_z=lambda s: float(dz(*a(s))),
        d_lambda=lambda s: float(dl(*a(s))),
        name=str(expr),
    )


def random_polynomial(rng: np.random.Generator, n: int, terms: int = 3):
    syms = list(Q[:n]) + list(P[:n]) + [Z, LAM]
    expr = 0
    for _ in range(terms):
        mono = sp.Float(round(float(rng.uniform(-1, 1)), 6))
        for s in syms:
            mono *= s ** int(rng.integers(0, 3))
        expr += mono
    return expr


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for line in results:
        terminalreporter.write_line(line)
