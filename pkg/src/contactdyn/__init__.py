"""Contact Hamiltonian dynamics with a hybrid leap-frog integrator."""

from .errors import *  # noqa: F401,F403
from .state import (
    ContactState,
    ContactSystem,
    LiftedState,
    lift,
    lifted_time_inversion,
    time_inversion,
    unlift,
    validate,
)
from .vectorfield import (
    StateDerivative,
    contact_vector_field,
    k_rate_identity,
    lifted_vector_field,
)
from .bracket import Observable, contact_bracket, observable_rate
from .integrator import (
    IntegratorConfig,
    Scheme,
    Trajectory,
    analytic_damped_ho,
    convergence_order,
    hybrid_leapfrog_step,
    integrate,
    rk4_reference_step,
)
from .models import ModelKind, ModelSpec, build, default_experiment

__version__ = "0.1.0"
