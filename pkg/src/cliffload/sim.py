"""Exact statevector simulation.

Basis convention used across the whole package: qubit q (1-based mode q)
is bit q-1 of the amplitude index, so the Fock string |b1 b2 ... bN> sits
at index sum_q b_q 2^(q-1).  Gate application is in-place over the
amplitude array with stride-based pair addressing; a numba kernel handles
Pauli-sum expectations when the state is large.
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Optional, Sequence

import numpy as np

from . import circuit as circ
from .pauli import PauliString, PauliSum

MAX_QUBITS = 24
_INV_SQRT2 = 1.0 / math.sqrt(2.0)

try:  # optional fast path; everything falls back to numpy
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False

_NUMBA_DIM = 1 << 14  # below this the numpy kernels win on call overhead


def bitstring_to_index(bits: str) -> int:
    """'1100' (qubit 1 first) -> amplitude index."""
    idx = 0
    for q, ch in enumerate(bits):
        if ch == "1":
            idx |= 1 << q
        elif ch != "0":
            raise ValueError(f"bad bit {ch!r}")
    return idx


def index_to_bitstring(index: int, n_qubits: int) -> str:
    return "".join("1" if (index >> q) & 1 else "0" for q in range(n_qubits))


class StateVector:
    """2^n complex amplitudes with unit norm."""

    __slots__ = ("n_qubits", "amps")

    def __init__(self, n_qubits: int, amps: np.ndarray):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}")
        if amps.shape != (1 << n_qubits,):
            raise ValueError("amplitude array has wrong length")
        self.n_qubits = n_qubits
        self.amps = amps

    @classmethod
    def zero_state(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amps, tol: float = 1e-10) -> "StateVector":
        a = np.asarray(amps, dtype=complex)
        n = int(round(math.log2(a.size)))
        if 1 << n != a.size:
            raise ValueError("length is not a power of two")
        if abs(np.linalg.norm(a) - 1.0) > tol:
            raise ValueError("amplitudes are not normalized")
        return cls(n, a.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def amplitude(self, bits: str) -> complex:
        return complex(self.amps[bitstring_to_index(bits)])

    def dump_amplitudes(self, tol: float = 1e-12) -> list[tuple[str, float, float]]:
        """(bitstring, re, im) rows for every amplitude above `tol`."""
        out = []
        for i in np.flatnonzero(np.abs(self.amps) > tol):
            a = self.amps[i]
            out.append((index_to_bitstring(int(i), self.n_qubits), float(a.real), float(a.imag)))
        return out


# -- gate kernels -----------------------------------------------------------
# `arr` is (dim,) or (dim, batch); axis 0 is the amplitude index.


def _halves(arr: np.ndarray, q: int):
    tail = arr.shape[1:]
    v = arr.reshape(-1, 2, (1 << q), *tail)
    return v[:, 0], v[:, 1]


def _apply_x(arr, q):
    a0, a1 = _halves(arr, q)
    tmp = a0.copy()
    a0[...] = a1
    a1[...] = tmp


def _apply_h(arr, q):
    a0, a1 = _halves(arr, q)
    t = (a0 - a1) * _INV_SQRT2
    a0 += a1
    a0 *= _INV_SQRT2
    a1[...] = t


def _apply_rx(arr, q, angle):
    a0, a1 = _halves(arr, q)
    c = math.cos(angle / 2.0)
    s = -1j * math.sin(angle / 2.0)
    t = s * a0 + c * a1
    a0 *= c
    a0 += s * a1
    a1[...] = t


def _apply_rz(arr, q, angle):
    a0, a1 = _halves(arr, q)
    a0 *= np.exp(-0.5j * angle)
    a1 *= np.exp(0.5j * angle)


def _apply_cx(arr, control, target):
    hi, lo = max(control, target), min(control, target)
    tail = arr.shape[1:]
    v = arr.reshape(-1, 2, 1 << (hi - lo - 1) if hi - lo > 1 else 1, 2, (1 << lo), *tail)
    if control == hi:
        sub0, sub1 = v[:, 1, :, 0], v[:, 1, :, 1]
    else:
        sub0, sub1 = v[:, 0, :, 1], v[:, 1, :, 1]
    tmp = sub0.copy()
    sub0[...] = sub1
    sub1[...] = tmp


if _HAVE_NUMBA:
    # In-place pair kernels over the flat amplitude array.  Index layout
    # for qubit q: i = hi*2^(q+1) + b*2^q + lo, so pairs are (base, base+2^q).

    @numba.njit(parallel=True, cache=True)
    def _nb_1q(amps, q, m00, m01, m10, m11):  # pragma: no cover - compiled
        stride = 1 << q
        half = amps.size >> 1
        for t in numba.prange(half):
            base = ((t >> q) << (q + 1)) | (t & (stride - 1))
            a0 = amps[base]
            a1 = amps[base + stride]
            amps[base] = m00 * a0 + m01 * a1
            amps[base + stride] = m10 * a0 + m11 * a1

    @numba.njit(parallel=True, cache=True)
    def _nb_cx(amps, c, t):  # pragma: no cover - compiled
        stride_c = 1 << c
        stride_t = 1 << t
        quarter = amps.size >> 2
        hi = max(c, t)
        lo = min(c, t)
        for k in numba.prange(quarter):
            # spread k over the indices with bit c = 1 and bit t = 0
            low = k & ((1 << lo) - 1)
            mid = (k >> lo) & ((1 << (hi - lo - 1)) - 1)
            top = k >> (hi - 1)
            base = (top << (hi + 1)) | (mid << (lo + 1)) | low | stride_c
            tmp = amps[base]
            amps[base] = amps[base + stride_t]
            amps[base + stride_t] = tmp


def _numpy_apply(arr: np.ndarray, gate: circ.Gate) -> None:
    kind = gate.kind
    if kind == circ.CX:
        _apply_cx(arr, gate.qubits[0], gate.qubits[1])
    elif kind == circ.X:
        _apply_x(arr, gate.qubits[0])
    elif kind == circ.H:
        _apply_h(arr, gate.qubits[0])
    elif kind == circ.RX:
        _apply_rx(arr, gate.qubits[0], gate.angle)
    elif kind == circ.RZ:
        _apply_rz(arr, gate.qubits[0], gate.angle)
    else:  # pragma: no cover
        raise ValueError(f"unknown gate kind {kind!r}")


_1Q_MATRICES = {
    circ.X: lambda _: (0.0 + 0j, 1.0 + 0j, 1.0 + 0j, 0.0 + 0j),
    circ.H: lambda _: (_INV_SQRT2 + 0j, _INV_SQRT2 + 0j, _INV_SQRT2 + 0j, -_INV_SQRT2 + 0j),
    circ.RX: lambda a: (
        math.cos(a / 2) + 0j,
        -1j * math.sin(a / 2),
        -1j * math.sin(a / 2),
        math.cos(a / 2) + 0j,
    ),
    circ.RZ: lambda a: (np.exp(-0.5j * a), 0j, 0j, np.exp(0.5j * a)),
}


def apply_gate(arr: np.ndarray, gate: circ.Gate) -> None:
    """Apply one gate in place; `arr` may carry a trailing batch axis."""
    if _HAVE_NUMBA and arr.ndim == 1 and arr.size >= _NUMBA_DIM:
        if gate.kind == circ.CX:
            _nb_cx(arr, gate.qubits[0], gate.qubits[1])
        else:
            m00, m01, m10, m11 = _1Q_MATRICES[gate.kind](gate.angle)
            _nb_1q(arr, gate.qubits[0], m00, m01, m10, m11)
        return
    _numpy_apply(arr, gate)


def run(c: circ.Circuit, initial: Optional[StateVector] = None) -> StateVector:
    """Apply a circuit to `initial` (all-zeros by default)."""
    if initial is None:
        psi = StateVector.zero_state(c.n_qubits)
    else:
        if initial.n_qubits != c.n_qubits:
            raise ValueError("qubit counts differ")
        psi = StateVector(c.n_qubits, initial.amps.copy())
    amps = psi.amps
    for g in c.gates:
        apply_gate(amps, g)
    if abs(np.linalg.norm(amps) - 1.0) > 1e-10:
        raise AssertionError("norm drifted past 1e-10")
    return psi


# -- expectations -----------------------------------------------------------

_PAR16 = np.array([bin(i).count("1") & 1 for i in range(1 << 16)], dtype=np.uint8)

if _HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _expect_kernel(amps, xs, zs, tops, out):  # pragma: no cover - compiled
        # masks fit in 24 bits (n_qubits <= 24), so two table lookups give
        # the parity; x != 0 terms enumerate Hermitian index pairs directly
        # by pinning the top set bit of x to zero
        for j in numba.prange(xs.size):
            x = xs[j]
            z = zs[j]
            acc = 0.0 + 0.0j
            if x == 0:
                for b in range(amps.size):
                    v = b & z
                    p = amps[b]
                    mag = p.real * p.real + p.imag * p.imag
                    if _PAR16[v & 0xFFFF] ^ _PAR16[v >> 16]:
                        acc -= mag
                    else:
                        acc += mag
            else:
                h = tops[j]
                low_mask = (1 << h) - 1
                for k in range(amps.size >> 1):
                    b = ((k >> h) << (h + 1)) | (k & low_mask)
                    v = b & z
                    term = np.conj(amps[b ^ x]) * amps[b]
                    if _PAR16[v & 0xFFFF] ^ _PAR16[v >> 16]:
                        acc -= term
                    else:
                        acc += term
            out[j] = acc


def _thread_cap() -> Optional[int]:
    raw = os.environ.get("CLIFFLOAD_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


def _parity_of_masked(indices: np.ndarray, mask: int) -> np.ndarray:
    v = indices & mask
    for shift in (16, 8, 4, 2, 1):
        v ^= v >> shift
    return (v & 1).astype(np.int8)


def _string_expectation(amps: np.ndarray, s: PauliString, indices: np.ndarray) -> complex:
    sign = 1.0 - 2.0 * _parity_of_masked(indices, s.z)
    if s.x == 0:
        val = np.sum((amps.real**2 + amps.imag**2) * sign)
    else:
        val = np.sum(np.conj(amps[indices ^ s.x]) * amps * sign)
    return complex(1j**s.e * val)


def expectation(h: PauliSum, psi: StateVector, tol: float = 1e-10) -> float:
    """<psi|h|psi> for a Hermitian Pauli sum.

    Evaluated term by term with index-mapped accumulation; terms are
    reduced in a fixed order so the result is deterministic.
    """
    if h.n_qubits != psi.n_qubits:
        raise ValueError("qubit counts differ")
    terms = h.terms()  # raises on non-Hermitian input
    if not terms:
        return 0.0
    amps = psi.amps
    if _HAVE_NUMBA and amps.size >= _NUMBA_DIM and len(terms) >= 8:
        cap = _thread_cap()
        if cap is not None:
            numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
        xs = np.array([s.x for _, s in terms], dtype=np.int64)
        zs = np.array([s.z for _, s in terms], dtype=np.int64)
        tops = np.array([max(s.x.bit_length() - 1, 0) for _, s in terms], dtype=np.int64)
        out = np.zeros(len(terms), dtype=complex)
        _expect_kernel(amps, xs, zs, tops, out)
        # off-diagonal kernels visit one member of each Hermitian index
        # pair, so their contribution is twice the real part
        coeffs = np.array([c for c, _ in terms])
        phases = np.array([1j**s.e for _, s in terms])
        factor = np.where(xs == 0, 1.0, 2.0)
        return float(np.sum(coeffs * factor * (phases * out).real))
    indices = np.arange(amps.size, dtype=np.int64)
    total = 0.0 + 0.0j
    for coeff, s in terms:
        total += coeff * _string_expectation(amps, s, indices)
    if abs(total.imag) >= tol:
        raise AssertionError(f"expectation has imaginary part {total.imag}")
    return float(total.real)


def particle_number_moments(psi: StateVector) -> tuple[float, float]:
    """Mean and variance of the total occupation sum_q (I - Z_q)/2."""
    probs = psi.amps.real**2 + psi.amps.imag**2
    indices = np.arange(probs.size, dtype=np.int64)
    occ = np.zeros(probs.size, dtype=np.int64)
    for q in range(psi.n_qubits):
        occ += (indices >> q) & 1
    mean = float(probs @ occ)
    var = float(probs @ (occ.astype(float) - mean) ** 2)
    return mean, var


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 (global-phase insensitive)."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit counts differ")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)
