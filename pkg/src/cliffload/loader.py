"""Synthesis of Clifford-loader state-preparation circuits.

A loader for a unit vector x is the three-part circuit

    [zeroing rotations]  [X on the first block]  [un-zeroing rotations]

where the rotation angles come from the classical tree reduction of x
(ortho.compute_angles).  Conjugating the central X block by the rotation
sandwich turns it into the operator sum_mu x_mu p_mu, so applying one
loader per orthonormal column prepares the determinant-amplitude state.

Sign conventions are pinned by dense verification (see tests): the
block applied first uses gates exp[+theta p_mu p_nu], i.e.
`givens_gate(mu, nu, -theta)` in this module's convention, where
`givens_gate(theta)` implements exp[-theta p_mu p_nu].
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .circuit import Circuit, Gate, gate_cx, gate_h, gate_rx, gate_rz, gate_x
from .ortho import GivensSchedule, OrthonormalMatrix, compute_angles
from .pauli import p_operator

_HALF_PI = math.pi / 2.0


class LadderStyle(enum.Enum):
    CASCADE = "cascade"
    LOGTREE = "logtree"

    @classmethod
    def parse(cls, name: str) -> "LadderStyle":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown ladder style {name!r}") from None


def _ladder_gates(qubits: Sequence[int], style: LadderStyle) -> list[Gate]:
    """CNOTs that accumulate the parity of `qubits` onto the last one."""
    if len(qubits) == 0:
        raise ValueError("ladder needs at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise ValueError("ladder qubits must be distinct")
    gates: list[Gate] = []
    if style is LadderStyle.CASCADE:
        for a, b in zip(qubits, qubits[1:]):
            gates.append(gate_cx(a, b))
    else:
        survivors = list(qubits)
        while len(survivors) > 1:
            nxt = []
            for i in range(0, len(survivors) - 1, 2):
                gates.append(gate_cx(survivors[i], survivors[i + 1]))
                nxt.append(survivors[i + 1])
            if len(survivors) % 2:
                nxt.append(survivors[-1])
            survivors = nxt
    return gates


def cnot_ladder(
    qubits: Sequence[int], style: LadderStyle, n_qubits: Optional[int] = None
) -> Circuit:
    """Parity-accumulating CNOT subcircuit over an ordered qubit list."""
    gates = _ladder_gates(qubits, style)
    if n_qubits is None:
        n_qubits = max(qubits) + 1
    return Circuit(n_qubits, gates)


def _givens_support(mu: int, nu: int, L: int):
    """Qubit roles (0-based) of the generator string for a (mu, nu) pair.

    X on both end blocks except position L*mu which carries Y, and Z on the
    block-boundary qubits (multiples of L) strictly between the blocks.
    """
    xs = [q - 1 for q in range(L * (mu - 1) + 1, L * mu)]
    xs += [q - 1 for q in range(L * (nu - 1) + 1, L * nu + 1)]
    y = L * mu - 1
    zs = [q - 1 for q in range(L * (mu + 1), L * (nu - 1) + 1, L)]
    return xs, y, zs


def givens_gate(
    mu: int, nu: int, theta: float, L: int, n_qubits: int, style: LadderStyle
) -> Circuit:
    """Circuit for exp[-theta p_mu p_nu] at correlation width L.

    Decomposition: Hadamards on the X positions and RX(pi/2) on the single
    Y position rotate the generator onto a Z string; a CNOT ladder folds
    the string's parity onto qubit L*(mu-1)+1; RZ(-2*theta) applies the
    rotation; everything is then unwound.  The -2*theta central angle makes
    the unitary match the dense exponential of -theta p_mu p_nu exactly.
    """
    if L < 1 or n_qubits % L != 0:
        raise ValueError(f"L={L} must divide n_qubits={n_qubits}")
    n_modes = n_qubits // L
    if not 1 <= mu < nu <= n_modes:
        raise ValueError(f"need 1 <= mu < nu <= {n_modes}, got ({mu}, {nu})")
    xs, y, zs = _givens_support(mu, nu, L)
    target = L * (mu - 1)  # first qubit of the mu block, 0-based
    ladder_list = sorted(set(xs + [y] + zs) - {target}) + [target]

    pre = [gate_h(q) for q in xs]
    pre.append(gate_rx(y, _HALF_PI))
    ladder = _ladder_gates(ladder_list, style)
    gates = list(pre)
    gates += ladder
    gates.append(gate_rz(target, -2.0 * theta))
    gates += reversed(ladder)  # CNOTs are self-inverse
    gates += [g.inverse() for g in reversed(pre)]
    return Circuit(n_qubits, gates)


def clifford_loader(x: Sequence[float], L: int, style: LadderStyle) -> Circuit:
    """Circuit whose operator is sum_mu x_mu p_mu for a unit vector x."""
    schedule = compute_angles(x)
    return _loader_from_schedule(schedule, L, style)


def _loader_from_schedule(
    schedule: GivensSchedule, L: int, style: LadderStyle
) -> Circuit:
    n_qubits = L * schedule.n
    gates: list[Gate] = []
    for layer in schedule.layers:
        for mu, nu, theta in layer:
            gates += givens_gate(mu, nu, -theta, L, n_qubits, style).gates
    gates += [gate_x(q) for q in range(L)]
    for layer in reversed(schedule.layers):
        for mu, nu, theta in reversed(layer):
            gates += givens_gate(mu, nu, theta, L, n_qubits, style).gates
    return Circuit(n_qubits, gates)


@dataclass
class LoaderPlan:
    """Resolved per-column rotation schedules for a preparation circuit."""

    n_qubits: int
    L: int
    hole_trick: bool
    columns: list[GivensSchedule]

    def to_json(self) -> str:
        cols = []
        for l, schedule in enumerate(self.columns, start=1):
            layers = [
                [{"mu": r.mu, "nu": r.nu, "theta": r.theta} for r in layer]
                for layer in schedule.layers
            ]
            cols.append({"column": l, "n": schedule.n, "layers": layers})
        return json.dumps(
            {
                "n_qubits": self.n_qubits,
                "L": self.L,
                "hole_trick": self.hole_trick,
                "columns": cols,
            },
            indent=2,
        )


def loader_plan(
    m: OrthonormalMatrix,
    L: int,
    hole_trick: bool = False,
    complement: Optional[OrthonormalMatrix] = None,
) -> LoaderPlan:
    """Column schedules for preparing the state of `m` at width L.

    The hole trick prepares the complement's columns instead (followed by a
    global bit flip); the complement matrix is never inferred, so it must
    be supplied by the caller.
    """
    n_qubits = L * m.n_rows
    if n_qubits > 0 and m.n_cols > m.n_rows:
        raise ValueError("more columns than rows")
    if hole_trick:
        if complement is None:
            raise ValueError("hole_trick requires an explicit complement matrix")
        if complement.n_rows != m.n_rows:
            raise ValueError("complement row count differs")
        if complement.n_cols != m.n_rows - m.n_cols:
            raise ValueError(
                f"complement must have {m.n_rows - m.n_cols} columns, "
                f"got {complement.n_cols}"
            )
        source = complement
    else:
        source = m
    columns = [compute_angles(source.column(l)) for l in range(1, source.n_cols + 1)]
    return LoaderPlan(n_qubits=n_qubits, L=L, hole_trick=hole_trick, columns=columns)


def circuit_from_plan(plan: LoaderPlan, style: LadderStyle) -> Circuit:
    """Concatenated loaders, column 1 first, plus the hole-trick bit flip."""
    gates: list[Gate] = []
    for schedule in plan.columns:
        gates += _loader_from_schedule(schedule, plan.L, style).gates
    if plan.hole_trick:
        gates += [gate_x(q) for q in range(plan.n_qubits)]
    return Circuit(plan.n_qubits, gates)


def prepare_state_circuit(
    m: OrthonormalMatrix,
    L: int,
    style: LadderStyle,
    hole_trick: bool = False,
    complement: Optional[OrthonormalMatrix] = None,
) -> Circuit:
    """State-preparation circuit for an orthonormal matrix at width L."""
    return circuit_from_plan(loader_plan(m, L, hole_trick, complement), style)


def generator_dense(mu: int, nu: int, L: int, n_qubits: int) -> np.ndarray:
    """Dense matrix of p_mu p_nu (the rotation generator), for testing."""
    a = p_operator(mu, L, n_qubits)
    b = p_operator(nu, L, n_qubits)
    return (a * b).to_matrix()
