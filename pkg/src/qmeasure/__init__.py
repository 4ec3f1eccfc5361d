"""qmeasure: simulator and gate compiler for noiseless indirect measurements
on qubit and continuous-variable systems."""

from .cvgates import (
    CoordTransform,
    CVGate,
    GateKind,
    HamiltonianParams,
    NotDecomposableError,
    QuadraticForm,
    UnsupportedRegimeError,
    compose,
    csm_transform,
    decompose_single_mode,
    decompose_two_mode,
    decompose_von_neumann,
    gate_matrix,
    hamiltonian_params,
    sequence_from_json,
    sequence_to_json,
    ssm_alternative_sequence,
    ssm_parity_quadratic_form,
    ssm_transform,
    vnm_transform,
)
from .fockspace import TruncationError, evolve_quadratic_fock, parity_via_fock
from .gridsim import (
    GaussianSpec,
    Grid1D,
    GridLeakageError,
    GridSupportError,
    JointWaveFunction,
    OutcomeDistribution,
    WaveFunction,
    apply_transform,
    choose_grids,
    outcome_distribution,
    postmeasurement_state,
    sample_gaussian,
    snr,
)
from .linalg import equal_up_to_global_phase, matrix_exponential, tensor_product
from .qubit import (
    KrausPair,
    MeasurementResult,
    QubitState,
    Scheme,
    build_unitary,
    hamiltonian_generator,
    kraus_operators,
    measure,
    pulse_sequence,
    sqrt_swap,
)
from .scenarios import repeated_measurement_scenario, two_peak_scenario

__version__ = "0.1.0"
