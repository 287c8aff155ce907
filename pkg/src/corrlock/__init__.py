"""Locking of classical correlation in quantum states: states, bounds and optimizers."""
from .bounds import (
    BoundReport,
    MeritFigures,
    complete_locking_check,
    eta,
    fannes_bound,
    fannes_check,
    lemma1_decomposition_check,
    lemma1_rhs,
    merit_figures,
    pinsker_gap,
    theorem1_check,
    theorem1_delta_cap,
    theorem1_requirement,
    theorem2_cap,
)
from .field import GaloisField, field_for, gf_trace, least_prime_power, prime_power
from .infomeasure import (
    OptimizerConfig,
    OptResult,
    entropy_sum,
    entropy_sum_min,
    icc_general_lower_bound,
    icc_locking,
    icc_locking_upper_bound,
    mutual_info_of_povm,
    optimize_accessible_info,
    quantum_mutual_info,
    unlocked_icc_analytic,
)
from .mub import MubFamily, OperatorBasis, clock_shift, mub_family, pauli_classes, verify_mub
from .qmath import (
    DensityMatrix,
    Ensemble,
    JointDistribution,
    Povm,
    classical_mutual_info,
    holevo_chi,
    measurement_joint_distribution,
    partial_trace,
    quantum_relative_entropy,
    shannon_entropy,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from .states import LockingInstance, bob_ensemble, locking_state, unlocked_state

__version__ = "0.1.0"
