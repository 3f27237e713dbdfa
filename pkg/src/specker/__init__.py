"""Specker's contextuality scenario with unsharp qubit measurements."""
from .errors import (
    EmptyWindow,
    IncompatiblePair,
    InconsistentMarginals,
    InvalidJointParams,
    MismatchedSharpness,
    ScenarioError,
    SpeckerError,
    ZeroVector,
)
from .joint_measurability import (
    CompatibilityWindow,
    MeasurementTriple,
    eta_lower,
    eta_upper,
    n_wise_necessary,
    n_wise_sufficient,
    pairwise_compatible,
    specker_window,
)
from .joint_povm import JointParams, JointPovm, anticorrelation_effect, check_marginals, construct_joint, validity_window
from .lsw import ScenarioReport, lsw_bound, no_si_scan, optimal_state, r3_quantum, violation_terms
from .optimizer import (
    GridSpec,
    OptimalConfig,
    c_max_brute,
    c_max_closed_form,
    optimal_joint_params,
    optimize_eta,
    optimize_geometry,
    orthogonal_axes,
    trine_axes,
)
from .qubit import (
    TOL_ALG,
    NoisyObservable,
    Povm,
    QubitEffect,
    QubitState,
    UnitAxis,
    as_matrix,
    born_probability,
    effect_validity,
    observable_effects,
)

__version__ = "0.1.0"
