import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contactdyn.errors import DimensionMismatch, NonFinite, NonPositiveLambda
from contactdyn.state import (
    ContactState,
    LiftedState,
    lift,
    lifted_time_inversion,
    time_inversion,
    unlift,
    validate,
)

from conftest import states


def test_validate_accepts_standard_initial_condition():
    s = ContactState(q=[1.0], p=[0.0], z=1.0, lam=1.0)
    assert validate(s) is s


@pytest.mark.parametrize(
    "kwargs, err",
    [
        (dict(q=[1.0], p=[0.0], z=1.0, lam=0.0), NonPositiveLambda),
        (dict(q=[1.0], p=[0.0], z=1.0, lam=-2.0), NonPositiveLambda),
        (dict(q=[1.0, 2.0], p=[0.0], z=1.0, lam=1.0), DimensionMismatch),
        (dict(q=[], p=[], z=1.0, lam=1.0), DimensionMismatch),
        (dict(q=[math.nan], p=[0.0], z=1.0, lam=1.0), NonFinite),
        (dict(q=[1.0], p=[math.inf], z=1.0, lam=1.0), NonFinite),
        (dict(q=[1.0], p=[0.0], z=1.0, lam=math.nan), NonFinite),
        (dict(q=[1.0], p=[0.0], z=1.0, lam=1.0, t=math.inf), NonFinite),
    ],
)
def test_validate_rejects(kwargs, err):
    with pytest.raises(err):
        validate(ContactState(**kwargs))


bad_float = st.sampled_from([math.nan, math.inf, -math.inf])


@given(
    q=st.lists(st.one_of(st.floats(-5, 5), bad_float), min_size=1, max_size=3),
    p=st.lists(st.one_of(st.floats(-5, 5), bad_float), min_size=1, max_size=3),
    z=st.one_of(st.floats(-5, 5), bad_float),
    lam=st.one_of(st.floats(-5, 5), bad_float),
)
def test_validate_fuzz_accepts_exactly_the_valid_states(q, p, z, lam):
    s = ContactState(q=q, p=p, z=z, lam=lam)
    valid = (
        len(q) == len(p)
        and all(math.isfinite(v) for v in [*q, *p, z, lam])
        and lam > 0
    )
    if valid:
        validate(s)
    else:
        with pytest.raises((NonPositiveLambda, NonFinite, DimensionMismatch)):
            validate(s)


def test_state_is_immutable():
    s = ContactState(q=[1.0], p=[0.0], z=1.0, lam=1.0)
    with pytest.raises(ValueError):
        s.q[0] = 2.0
    with pytest.raises(AttributeError):
        s.z = 3.0


def test_lift_examples():
    ls = lift(ContactState(q=[1.0], p=[2.0], z=3.0, lam=2.0))
    assert ls.q1.tolist() == [1.0] and ls.p1.tolist() == [4.0]
    assert (ls.q0, ls.p0) == (3.0, 2.0)
    ls = lift(ContactState(q=[0.0], p=[0.0], z=0.0, lam=1.0))
    assert ls == LiftedState(q1=[0.0], p1=[0.0], q0=0.0, p0=1.0)


def test_lift_propagates_validation():
    with pytest.raises(NonPositiveLambda):
        lift(ContactState(q=[0.0], p=[0.0], z=0.0, lam=0.0))


@settings(max_examples=100)
@given(states())
def test_unlift_lift_roundtrip_exact(s):
    assert unlift(lift(s)) == s


@given(states())
def test_unlift_of_fresh_lifted_state_is_correctly_rounded(s):
    ls = lift(s)
    fresh = LiftedState(q1=ls.q1, p1=ls.p1, q0=ls.q0, p0=ls.p0, t=ls.t)
    back = unlift(fresh)
    assert back.z == s.z and back.lam == s.lam and np.array_equal(back.q, s.q)
    assert np.all(np.abs(back.p - s.p) <= 2 * np.spacing(np.abs(s.p)) + 1e-300)


def test_time_inversion_example():
    s = ContactState(q=[1.0], p=[2.0], z=3.0, lam=4.0, t=5.0)
    assert time_inversion(s) == ContactState(q=[1.0], p=[-2.0], z=-3.0, lam=4.0, t=-5.0)


def test_time_inversion_fixed_point():
    s = ContactState(q=[1.0], p=[0.0], z=0.0, lam=1.0, t=0.0)
    assert time_inversion(s) == s


@given(states())
def test_time_inversion_is_involution(s):
    assert time_inversion(time_inversion(s)) == s


@given(states())
def test_time_inversion_commutes_with_lift(s):
    assert lift(time_inversion(s)) == lifted_time_inversion(lift(s))
    assert unlift(lifted_time_inversion(lift(s))) == time_inversion(s)
