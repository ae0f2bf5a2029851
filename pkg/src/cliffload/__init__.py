"""Tree-structured Clifford-loader circuits for fermionic state preparation."""

from .circuit import Circuit, Gate, from_qasm
from .loader import (
    LadderStyle,
    clifford_loader,
    cnot_ladder,
    givens_gate,
    prepare_state_circuit,
)
from .oracle import correlated_oracle, slater_oracle_det, verify_preparation
from .ortho import (
    GivensSchedule,
    OrthonormalMatrix,
    compute_angles,
    minor_determinant,
    random_orthonormal,
    tree_index_sets,
)
from .pauli import PauliString, PauliSum, p_operator
from .sim import StateVector, expectation, fidelity, particle_number_moments, run
from .vqe import StiefelParams, VqeResult, correlation_fraction, params_to_matrix, run_vqe

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "Gate",
    "GivensSchedule",
    "LadderStyle",
    "OrthonormalMatrix",
    "PauliString",
    "PauliSum",
    "StateVector",
    "StiefelParams",
    "VqeResult",
    "clifford_loader",
    "cnot_ladder",
    "compute_angles",
    "correlated_oracle",
    "correlation_fraction",
    "expectation",
    "fidelity",
    "from_qasm",
    "givens_gate",
    "minor_determinant",
    "p_operator",
    "params_to_matrix",
    "particle_number_moments",
    "prepare_state_circuit",
    "random_orthonormal",
    "run",
    "run_vqe",
    "slater_oracle_det",
    "tree_index_sets",
    "verify_preparation",
]
