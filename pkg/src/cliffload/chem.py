"""Molecular Hamiltonians from FCIDUMP files.

The FCIDUMP text format carries restricted (spin-free) integrals in
chemists' (ij|kl) notation with 8-fold permutation symmetry.  Spin
orbitals are interleaved: spatial orbital p maps to qubits 2p-1 (alpha)
and 2p (beta), 1-based, so a width-2 block pairs the two spins of one
spatial orbital.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from pathlib import Path

import numpy as np

from .pauli import PauliString, PauliSum, expectation_sign_table

_COEFF_CUTOFF = 1e-12


class FcidumpError(ValueError):
    """Parse failure, annotated with the offending line number."""


@dataclass
class FciDump:
    """Parsed integral file: core energy, h_pq and (ij|kl) in Hartree."""

    n_orb: int
    n_elec: int
    ms2: int
    core_energy: float
    h1: np.ndarray  # (n_orb, n_orb), symmetric
    g2: np.ndarray  # (n_orb,)*4, chemists' notation, 8-fold symmetric

    def validate(self, tol: float = 1e-10) -> None:
        n = self.n_orb
        if self.h1.shape != (n, n) or self.g2.shape != (n, n, n, n):
            raise ValueError("integral array shapes do not match n_orb")
        if np.max(np.abs(self.h1 - self.h1.T)) > tol:
            raise ValueError("h1 is not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(self.g2 - np.transpose(self.g2, perm))) > tol:
                raise ValueError("g2 violates 8-fold permutation symmetry")


def parse_fcidump(text: str) -> FciDump:
    """Parse FCIDUMP text into dense integral arrays.

    Integral lines are `value i j k l` with 1-based indices: all-zero
    indices give the core energy, k=l=0 gives a one-electron entry, and
    anything else must be a full four-index two-electron entry.
    """
    lines = text.splitlines()
    header_end = None
    header_parts: list[str] = []
    for i, line in enumerate(lines):
        stripped = line.strip()
        if i == 0 and not stripped.upper().startswith("&FCI"):
            raise FcidumpError("line 1: file must start with an &FCI namelist")
        header_parts.append(stripped)
        if stripped.upper().endswith("&END") or stripped == "/":
            header_end = i
            break
    if header_end is None:
        raise FcidumpError("namelist never terminated with &END or /")

    header = " ".join(header_parts)

    def _field(name: str, required: bool) -> int | None:
        match = re.search(rf"{name}\s*=\s*(-?\d+)", header, re.IGNORECASE)
        if match is None:
            if required:
                raise FcidumpError(f"namelist is missing {name}")
            return None
        return int(match.group(1))

    n_orb = _field("NORB", required=True)
    n_elec = _field("NELEC", required=True)
    ms2 = _field("MS2", required=False) or 0
    if n_orb < 1:
        raise FcidumpError("NORB must be positive")

    core = 0.0
    h1 = np.zeros((n_orb, n_orb))
    g2 = np.zeros((n_orb, n_orb, n_orb, n_orb))
    for lineno, raw in enumerate(lines[header_end + 1 :], start=header_end + 2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise FcidumpError(f"line {lineno}: expected 'value i j k l'")
        try:
            value = float(parts[0])
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError:
            raise FcidumpError(f"line {lineno}: non-numeric field") from None
        if i == j == k == l == 0:
            core = value
            continue
        if k == 0 and l == 0:
            if not (1 <= i <= n_orb and 1 <= j <= n_orb):
                raise FcidumpError(f"line {lineno}: orbital index out of range")
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
            continue
        if not all(1 <= p <= n_orb for p in (i, j, k, l)):
            raise FcidumpError(f"line {lineno}: orbital index out of range")
        a, b, c, d = i - 1, j - 1, k - 1, l - 1
        for p, q, r, s in (
            (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
            (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
        ):
            g2[p, q, r, s] = value
    dump = FciDump(n_orb=n_orb, n_elec=n_elec, ms2=ms2, core_energy=core, h1=h1, g2=g2)
    dump.validate()
    return dump


def serialize_fcidump(dump: FciDump, tol: float = 1e-15) -> str:
    """Canonical FCIDUMP text: unique 8-fold entries, then h1, then core."""
    out = [
        f" &FCI NORB={dump.n_orb},NELEC={dump.n_elec},MS2={dump.ms2},",
        " &END",
    ]
    n = dump.n_orb
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    v = dump.g2[i, j, k, l]
                    if abs(v) > tol:
                        out.append(f" {v:.16g} {i + 1:3d} {j + 1:3d} {k + 1:3d} {l + 1:3d}")
    for i in range(n):
        for j in range(i + 1):
            if abs(dump.h1[i, j]) > tol:
                out.append(f" {dump.h1[i, j]:.16g} {i + 1:3d} {j + 1:3d}   0   0")
    out.append(f" {dump.core_energy:.16g}   0   0   0   0")
    return "\n".join(out) + "\n"


def load_fcidump(path) -> FciDump:
    return parse_fcidump(Path(path).read_text())


def fixture_path(name: str) -> Path:
    """Path of a vendored FCIDUMP fixture, e.g. 'h2_sto3g_1.4bohr'."""
    res = resources.files("cliffload") / "fixtures" / f"{name}.fcidump"
    with resources.as_file(res) as p:
        return Path(p)


@dataclass
class MolecularHamiltonian:
    """Qubit Hamiltonian: a real Pauli sum plus an identity offset."""

    n_qubits: int
    pauli: PauliSum
    constant: float

    def n_terms(self) -> int:
        return len(self.pauli)

    def to_json(self) -> str:
        terms = [
            {"coeff": c, "string": s.text()} for c, s in self.pauli.terms()
        ]
        return json.dumps(
            {"n_qubits": self.n_qubits, "constant": self.constant, "terms": terms},
            indent=2,
        )


def _spin_orbital(p: int, spin: int, n_qubits: int) -> int:
    """0-based qubit of spatial orbital p (1-based) with spin 0=alpha/1=beta."""
    return 2 * (p - 1) + spin


def _ladder_sum(n_qubits: int, q: int, dagger: bool) -> PauliSum:
    """Jordan-Wigner image of a_q or a_q^dag (q 0-based)."""
    below = (1 << q) - 1
    x_string = PauliString(n_qubits, 1 << q, below, 0)
    y_string = PauliString(n_qubits, 1 << q, below | (1 << q), 1)
    s = PauliSum(n_qubits)
    s.add(x_string, 0.5)
    s.add(y_string, -0.5j if dagger else 0.5j)
    return s


def jw_hamiltonian(dump: FciDump) -> MolecularHamiltonian:
    """Second-quantized electronic Hamiltonian under Jordan-Wigner.

    H = E_core + sum h_pq a+_p a_q
             + 1/2 sum (pq|rs) a+_{p,s1} a+_{r,s2} a_{s,s2} a_{q,s1}
    over interleaved spin orbitals; terms below 1e-12 are dropped.
    """
    if dump.n_orb > 12:
        raise ValueError("Hamiltonian construction limited to 12 spatial orbitals")
    n_q = 2 * dump.n_orb
    create = [[_ladder_sum(n_q, _spin_orbital(p, s, n_q), True) for s in (0, 1)]
              for p in range(1, dump.n_orb + 1)]
    destroy = [[_ladder_sum(n_q, _spin_orbital(p, s, n_q), False) for s in (0, 1)]
               for p in range(1, dump.n_orb + 1)]

    ham = PauliSum(n_q)
    for p in range(dump.n_orb):
        for q in range(dump.n_orb):
            coeff = dump.h1[p, q]
            if abs(coeff) < _COEFF_CUTOFF:
                continue
            for s in (0, 1):
                ham.add_scaled(create[p][s] * destroy[q][s], coeff)
    for p in range(dump.n_orb):
        for q in range(dump.n_orb):
            for r in range(dump.n_orb):
                for s_orb in range(dump.n_orb):
                    coeff = 0.5 * dump.g2[p, q, r, s_orb]
                    if abs(coeff) < _COEFF_CUTOFF:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            term = (create[p][s1] * create[r][s2]) * (
                                destroy[s_orb][s2] * destroy[q][s1]
                            )
                            ham.add_scaled(term, coeff)
    ham.prune(_COEFF_CUTOFF)
    identity = ham.pop_identity()
    if abs(complex(identity).imag) > 1e-9:
        raise AssertionError("identity weight came out complex")
    ham.terms()  # raises if any residual imaginary coefficient survived
    return MolecularHamiltonian(
        n_qubits=n_q, pauli=ham, constant=dump.core_energy + complex(identity).real
    )


def number_operator(n_qubits: int) -> PauliSum:
    """Total occupation sum_q (I - Z_q)/2 as a Pauli sum."""
    s = PauliSum(n_qubits)
    s.add(PauliString.identity(n_qubits), 0.5 * n_qubits)
    for q in range(n_qubits):
        s.add(PauliString(n_qubits, 0, 1 << q, 0), -0.5)
    return s


def hf_energy(h: MolecularHamiltonian, d: int) -> float:
    """Energy of the reference determinant filling the first d spin orbitals."""
    if d > h.n_qubits:
        raise ValueError("more electrons than spin orbitals")
    ref = (1 << d) - 1
    total = h.constant
    for coeff, s in h.pauli.terms():
        total += coeff * expectation_sign_table(s, ref)
    return float(total)


def _sector_basis(n_qubits: int, d: int) -> list[int]:
    return [sum(1 << q for q in occ) for occ in combinations(range(n_qubits), d)]


def _sector_entries(h: MolecularHamiltonian, d: int):
    basis = _sector_basis(h.n_qubits, d)
    pos = {b: i for i, b in enumerate(basis)}
    terms = h.pauli.terms()
    for col, b in enumerate(basis):
        yield col, col, complex(h.constant)
        for coeff, s in terms:
            row = pos.get(b ^ s.x)
            if row is None:
                continue
            parity = bin(s.z & b).count("1") & 1
            yield row, col, coeff * (1j**s.e) * (-1.0 if parity else 1.0)


def sector_matrix(h: MolecularHamiltonian, d: int) -> tuple[np.ndarray, list[int]]:
    """Hamiltonian restricted to the d-particle bitstring basis (dense)."""
    basis = _sector_basis(h.n_qubits, d)
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for row, col, val in _sector_entries(h, d):
        mat[row, col] += val
    return mat, basis


def fci_ground_energy(h: MolecularHamiltonian, d: int) -> float:
    """Lowest eigenvalue of H restricted to the d-particle sector."""
    if h.n_qubits > 16:
        raise ValueError("FCI diagonalization limited to 16 qubits")
    if not 0 <= d <= h.n_qubits:
        raise ValueError("bad particle count")
    basis = _sector_basis(h.n_qubits, d)
    if len(basis) <= 2048:
        mat, _ = sector_matrix(h, d)
        return float(np.linalg.eigvalsh(mat)[0])
    from scipy.sparse import coo_matrix
    from scipy.sparse.linalg import eigsh

    rows, cols, vals = [], [], []
    for row, col, val in _sector_entries(h, d):
        rows.append(row)
        cols.append(col)
        vals.append(val)
    dim = len(basis)
    mat = coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    out = eigsh(mat, k=1, which="SA", return_eigenvectors=False)
    return float(out[0])
