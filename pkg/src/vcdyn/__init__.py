"""Entanglement dynamics of two V-type three-level atoms sharing a vacuum.

Times are in units of 1/gamma; an isolated excited atom decays as exp(-2 gamma t).
"""
__version__ = "0.1.0"

from .algebra import (
    DensityMatrixError,
    partial_trace,
    partial_transpose,
    transition_operator,
    trace_distance,
)
from .dynamics import (
    ConvergenceError,
    IntegrationError,
    Liouvillian,
    Trajectory,
    asymptotic_state,
    build_liouvillian,
    evolve,
)
from .entanglement import (
    birth_time,
    coherence_magnitudes,
    dicke_populations,
    negativity,
    negativity_series,
    observable_series,
)
from .geometry import (
    Configuration,
    CouplingCoefficients,
    Geometry,
    configuration_preset,
    coupling_coefficients,
    radial_factors,
)
from .states import (
    asymptotic_a12_state,
    asymptotic_psi2_state,
    bell_state,
    dicke_state,
    product_state,
    state_from_label,
    superposition_state,
)
