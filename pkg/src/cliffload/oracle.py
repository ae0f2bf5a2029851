"""Brute-force reference states and operators.

Everything here is deliberately independent of the circuit-synthesis path:
determinant-amplitude states are enumerated combination by combination,
and operator products are carried out on dense matrices, so they can serve
as ground truth for the simulated loaders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .circuit import Circuit
from .loader import LadderStyle, prepare_state_circuit
from .ortho import OrthonormalMatrix, minor_determinant
from .pauli import p_operator
from .sim import StateVector, fidelity, index_to_bitstring, run

_DENSE_MAX = 10
_ORACLE_MAX = 20

_SIGMA_RAISE = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |1><0|
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_EYE2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class FockOperatorMatrix:
    """A dense mode operator with its provenance label."""

    n_modes: int
    role: str  # "creation(mu)", "annihilation(mu)" or "p(mu,L)"
    matrix: np.ndarray


def _mode_operator(site_op: np.ndarray, mu: int, n_modes: int) -> np.ndarray:
    """kron product with Z on modes below mu; mode 1 is the low index bit."""
    m = np.array([[1.0 + 0j]])
    for q in range(1, n_modes + 1):  # later modes stack on the kron left
        if q < mu:
            factor = _SIGMA_Z
        elif q == mu:
            factor = site_op
        else:
            factor = _EYE2
        m = np.kron(factor, m)
    return m


def creation_op(mu: int, n_modes: int) -> FockOperatorMatrix:
    """Dense a_mu^dag with the Z string on modes 1..mu-1."""
    if n_modes > _DENSE_MAX:
        raise ValueError(f"dense operators limited to {_DENSE_MAX} modes")
    return FockOperatorMatrix(n_modes, f"creation({mu})", _mode_operator(_SIGMA_RAISE, mu, n_modes))


def annihilation_op(mu: int, n_modes: int) -> FockOperatorMatrix:
    if n_modes > _DENSE_MAX:
        raise ValueError(f"dense operators limited to {_DENSE_MAX} modes")
    return FockOperatorMatrix(
        n_modes, f"annihilation({mu})", _mode_operator(_SIGMA_RAISE.T.copy(), mu, n_modes)
    )


def p_op_dense(mu: int, L: int, n_qubits: int) -> FockOperatorMatrix:
    return FockOperatorMatrix(n_qubits, f"p({mu},{L})", p_operator(mu, L, n_qubits).to_matrix())


def _occupation_index(modes) -> int:
    idx = 0
    for m in modes:
        idx |= 1 << (m - 1)
    return idx


def slater_oracle_det(a: OrthonormalMatrix) -> StateVector:
    """Determinant-amplitude state: det of the row minor on each d-hot basis."""
    n, d = a.n_rows, a.n_cols
    if n > _ORACLE_MAX:
        raise ValueError(f"oracle limited to {_ORACLE_MAX} modes")
    amps = np.zeros(1 << n, dtype=complex)
    for rows in combinations(range(1, n + 1), d):
        amps[_occupation_index(rows)] = minor_determinant(a, rows)
    return StateVector.from_amplitudes(amps)


def slater_oracle_creation(a: OrthonormalMatrix, use_p_operators: bool = False) -> StateVector:
    """The product-of-operators construction, evaluated with dense matrices.

    Applies one operator sum per column to the vacuum, last column first,
    using either pure creation operators or the self-adjoint combinations
    a^dag + a; the two agree on the vacuum because the columns are
    orthonormal.
    """
    n, d = a.n_rows, a.n_cols
    if n > _DENSE_MAX:
        raise ValueError(f"dense oracle limited to {_DENSE_MAX} modes")
    ops = []
    for mu in range(1, n + 1):
        m = creation_op(mu, n).matrix
        if use_p_operators:
            m = m + annihilation_op(mu, n).matrix
        ops.append(m)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    for l in range(d, 0, -1):
        column_op = sum(a.array[mu - 1, l - 1] * ops[mu - 1] for mu in range(1, n + 1))
        psi = column_op @ psi
    psi /= np.linalg.norm(psi)
    return StateVector.from_amplitudes(psi)


def correlated_oracle(
    g: OrthonormalMatrix, L: int, n_qubits: Optional[int] = None
) -> StateVector:
    """Block-occupation state: det(G_B) on each set of L-wide blocks B."""
    if L < 1:
        raise ValueError("L must be positive")
    n_blocks, d_blocks = g.n_rows, g.n_cols
    expected = L * n_blocks
    if n_qubits is None:
        n_qubits = expected
    elif n_qubits != expected:
        raise ValueError(f"n_qubits={n_qubits} does not equal L*rows={expected}")
    if n_qubits > _ORACLE_MAX:
        raise ValueError(f"oracle limited to {_ORACLE_MAX} qubits")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    for blocks in combinations(range(1, n_blocks + 1), d_blocks):
        modes = [L * (j - 1) + i for j in blocks for i in range(1, L + 1)]
        amps[_occupation_index(modes)] = minor_determinant(g, blocks)
    return StateVector.from_amplitudes(amps)


@dataclass
class VerifyReport:
    """Outcome of comparing a simulated preparation against its oracle."""

    n_qubits: int
    L: int
    fidelity: float
    max_amp_error: float
    global_phase: complex
    support: list[str]

    @property
    def passed(self) -> bool:
        return self.fidelity > 1.0 - 1e-9

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_qubits": self.n_qubits,
                "L": self.L,
                "fidelity": self.fidelity,
                "max_amp_error": self.max_amp_error,
                "global_phase": [self.global_phase.real, self.global_phase.imag],
                "support": self.support,
            },
            indent=2,
        )


def compare_states(simulated: StateVector, reference: StateVector, L: int = 1) -> VerifyReport:
    """Phase-align `simulated` to `reference` and report the deviations.

    The aligning phase is taken at the reference's largest amplitude, so a
    pure global phase shows up in `global_phase` and not in the error.
    """
    if simulated.n_qubits != reference.n_qubits:
        raise ValueError("qubit counts differ")
    j = int(np.argmax(np.abs(reference.amps)))
    ratio = simulated.amps[j] * np.conj(reference.amps[j])
    phase = ratio / abs(ratio) if abs(ratio) > 1e-14 else 1.0 + 0.0j
    aligned = simulated.amps * np.conj(phase)
    support = [
        index_to_bitstring(int(i), reference.n_qubits)
        for i in np.flatnonzero(np.abs(reference.amps) > 1e-10)
    ]
    return VerifyReport(
        n_qubits=reference.n_qubits,
        L=L,
        fidelity=fidelity(simulated, reference),
        max_amp_error=float(np.max(np.abs(aligned - reference.amps))),
        global_phase=complex(phase),
        support=support,
    )


def verify_preparation(
    m: OrthonormalMatrix,
    L: int,
    style: LadderStyle,
    circuit: Optional[Circuit] = None,
) -> VerifyReport:
    """Simulate the preparation circuit and compare against the oracle.

    A pre-built circuit can be passed in (the CLI's corrupted-angle hook
    uses this); by default the circuit is synthesized from `m`.
    """
    if circuit is None:
        circuit = prepare_state_circuit(m, L, style)
    simulated = run(circuit)
    reference = correlated_oracle(m, L)
    return compare_states(simulated, reference, L)
