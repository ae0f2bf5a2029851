"""Hardware-level gate IR: X, H, RX, RZ, CNOT.

Qubit indices are zero-based here; 1-based mode indices from the synthesis
layer are converted at the boundary.  Circuits are immutable once built.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

X, H, RX, RZ, CX = "x", "h", "rx", "rz", "cx"
_ONE_QUBIT = {X, H, RX, RZ}
_PARAMETRIC = {RX, RZ}
KINDS = _ONE_QUBIT | {CX}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        arity = 2 if self.kind == CX else 1
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s)")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")
        if self.kind == CX and self.qubits[0] == self.qubits[1]:
            raise ValueError("cx control and target must differ")
        if self.kind in _PARAMETRIC:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} needs a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    def inverse(self) -> "Gate":
        if self.kind in _PARAMETRIC:
            return Gate(self.kind, self.qubits, -self.angle)
        return self  # x, h, cx are involutions


def gate_x(q: int) -> Gate:
    return Gate(X, (q,))


def gate_h(q: int) -> Gate:
    return Gate(H, (q,))


def gate_rx(q: int, angle: float) -> Gate:
    return Gate(RX, (q,), angle)


def gate_rz(q: int, angle: float) -> Gate:
    return Gate(RZ, (q,), angle)


def gate_cx(control: int, target: int) -> Gate:
    return Gate(CX, (control, target))


class Circuit:
    """An ordered gate list on a fixed register."""

    __slots__ = ("n_qubits", "gates")

    def __init__(self, n_qubits: int, gates: Iterable[Gate] = ()):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        gates = tuple(gates)
        for g in gates:
            if max(g.qubits) >= n_qubits:
                raise ValueError(f"gate {g} exceeds register of {n_qubits}")
        self.n_qubits = n_qubits
        self.gates = gates

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.n_qubits == other.n_qubits
            and self.gates == other.gates
        )

    def __repr__(self) -> str:
        return f"Circuit(n_qubits={self.n_qubits}, gates={len(self.gates)})"

    def extended(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, self.gates + tuple(gates))

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)])

    def cx_count(self) -> int:
        return sum(1 for g in self.gates if g.kind == CX)

    def two_qubit_depth(self) -> int:
        """Longest CNOT chain in the gate dependency DAG.

        Single-qubit gates order the DAG but add no length, so tracking a
        per-qubit chain-length frontier is exact: a one-qubit gate carries
        its qubit's frontier through unchanged.
        """
        frontier = [0] * self.n_qubits
        for g in self.gates:
            if g.kind == CX:
                c, t = g.qubits
                depth = max(frontier[c], frontier[t]) + 1
                frontier[c] = frontier[t] = depth
        return max(frontier, default=0)

    def unitary(self) -> np.ndarray:
        """Dense matrix product of the gates, in application order."""
        if self.n_qubits > 10:
            raise ValueError("dense unitary limited to 10 qubits")
        from . import sim  # gate kernels live with the simulator

        dim = 1 << self.n_qubits
        u = np.eye(dim, dtype=complex)
        for g in self.gates:
            sim.apply_gate(u, g)
        return u

    def to_qasm(self) -> str:
        lines = [
            "OPENQASM 2.0;",
            'include "qelib1.inc";',
            f"qreg q[{self.n_qubits}];",
        ]
        for g in self.gates:
            if g.kind == CX:
                lines.append(f"cx q[{g.qubits[0]}],q[{g.qubits[1]}];")
            elif g.kind in _PARAMETRIC:
                lines.append(f"{g.kind}({format(g.angle, '.17g')}) q[{g.qubits[0]}];")
            else:
                lines.append(f"{g.kind} q[{g.qubits[0]}];")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        gates = []
        for g in self.gates:
            entry: dict = {"kind": g.kind, "qubits": list(g.qubits)}
            if g.angle is not None:
                entry["angle"] = g.angle
            gates.append(entry)
        return json.dumps({"n": self.n_qubits, "gates": gates})

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        obj = json.loads(text)
        gates = [
            Gate(e["kind"], tuple(e["qubits"]), e.get("angle")) for e in obj["gates"]
        ]
        return cls(int(obj["n"]), gates)


def from_qasm(text: str) -> Circuit:
    """Minimal reader for the dialect `to_qasm` writes."""
    n_qubits = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if line in ("OPENQASM 2.0;", 'include "qelib1.inc";'):
            continue
        if line.startswith("qreg"):
            n_qubits = int(line[line.index("[") + 1 : line.index("]")])
            continue
        if not line.endswith(";"):
            raise ValueError(f"line {lineno}: missing semicolon")
        body = line[:-1]
        name, _, rest = body.partition(" ")
        if name.startswith(("rx(", "rz(")):
            kind = name[:2]
            angle = float(name[3 : name.index(")")])
            q = int(rest.strip()[2:-1])
            gates.append(Gate(kind, (q,), angle))
        elif name == "cx":
            a, b = rest.strip().split(",")
            gates.append(Gate(CX, (int(a.strip()[2:-1]), int(b.strip()[2:-1]))))
        elif name in (X, H):
            q = int(rest.strip()[2:-1])
            gates.append(Gate(name, (q,)))
        else:
            raise ValueError(f"line {lineno}: unsupported statement {line!r}")
    if n_qubits is None:
        raise ValueError("no qreg declaration found")
    return Circuit(n_qubits, gates)
