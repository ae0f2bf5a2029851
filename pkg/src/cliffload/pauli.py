"""Signed Pauli-string algebra on bitmasks.

A string on n qubits is stored as a pair of bitmasks (x, z) plus a phase
exponent e, representing the operator

    i^e * X^x * Z^z

where bit q-1 of a mask refers to qubit q (1-based).  A qubit with both an
X and a Z bit carries the letter Y, since X Z = -i Y.  Keeping the phase as
an integer exponent of i makes products exact, so anti-commutator and
Hermiticity checks come out as literal zeros rather than small floats.
"""

from __future__ import annotations

import numpy as np

_PHASES = (1.0, 1j, -1.0, -1j)
_LETTER_FROM_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_FROM_LETTER = {v: k for k, v in _LETTER_FROM_BITS.items()}
_PHASE_TOKENS = {"+1": 0, "1": 0, "+i": 1, "i": 1, "-1": 2, "-i": 3}

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _popcount(v: int) -> int:
    return bin(v).count("1")


class PauliString:
    """An n-qubit Pauli string with a fourth-root-of-unity phase."""

    __slots__ = ("n_qubits", "x", "z", "e")

    def __init__(self, n_qubits: int, x: int = 0, z: int = 0, e: int = 0):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        mask = (1 << n_qubits) - 1
        if x & ~mask or z & ~mask:
            raise ValueError("mask exceeds qubit count")
        self.n_qubits = n_qubits
        self.x = x
        self.z = z
        self.e = e % 4

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def from_letters(cls, letters: str, phase: complex = 1) -> "PauliString":
        """Build from a letter string like "XIZY" (qubit 1 first)."""
        letters = letters.replace(" ", "")
        x = z = 0
        y_count = 0
        for q, ch in enumerate(letters):
            try:
                xb, zb = _BITS_FROM_LETTER[ch]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {ch!r}") from None
            x |= xb << q
            z |= zb << q
            y_count += xb & zb
        try:
            e0 = _PHASES.index(phase)
        except ValueError:
            raise ValueError("phase must be one of 1, -1, 1j, -1j") from None
        # displayed phase = i^(e - #Y); solve for the stored exponent
        return cls(len(letters), x, z, (e0 + y_count) % 4)

    @property
    def phase(self) -> complex:
        """The conventional phase in front of the letter string."""
        return _PHASES[(self.e - _popcount(self.x & self.z)) % 4]

    @property
    def letters(self) -> str:
        return "".join(
            _LETTER_FROM_BITS[((self.x >> q) & 1, (self.z >> q) & 1)]
            for q in range(self.n_qubits)
        )

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def is_diagonal(self) -> bool:
        return self.x == 0

    def canonical(self) -> "PauliString":
        """The same letter pattern with phase +1."""
        return PauliString(self.n_qubits, self.x, self.z, _popcount(self.x & self.z))

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        # Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        e = self.e + other.e + 2 * _popcount(self.z & other.x)
        return PauliString(self.n_qubits, self.x ^ other.x, self.z ^ other.z, e)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and self.n_qubits == other.n_qubits
            and self.x == other.x
            and self.z == other.z
            and self.e == other.e
        )

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.x, self.z, self.e))

    def __repr__(self) -> str:
        return f"PauliString({self.text()!r})"

    def text(self) -> str:
        """Debug form, phase then letters: '-i X I Z Y'."""
        p = self.phase
        tok = {1.0: "+1", -1.0: "-1", 1j: "+i", -1j: "-i"}[p]
        return tok + " " + " ".join(self.letters)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        parts = text.split()
        if not parts or parts[0] not in _PHASE_TOKENS:
            raise ValueError(f"bad Pauli text {text!r}")
        phase = _PHASES[_PHASE_TOKENS[parts[0]]]
        return cls.from_letters("".join(parts[1:]), phase)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n matrix; qubit 1 is the least-significant index bit."""
        if self.n_qubits > 12:
            raise ValueError("dense form limited to 12 qubits")
        m = np.array([[1.0 + 0j]])
        for ch in self.letters:  # later qubits go on the left of the kron
            m = np.kron(_SINGLE[ch], m)
        return self.phase * m


class PauliSum:
    """A real-coefficient sum of Pauli strings (Hermitian by construction).

    Terms are accumulated with complex coefficients against phase-+1
    canonical strings; `terms` exposes the real view and refuses sums whose
    imaginary parts have not cancelled.
    """

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        self.n_qubits = n_qubits
        self._terms: dict[tuple[int, int], complex] = {}

    @classmethod
    def from_terms(cls, n_qubits: int, terms) -> "PauliSum":
        s = cls(n_qubits)
        for coeff, string in terms:
            s.add(string, coeff)
        return s

    def add(self, string: PauliString, coeff: complex = 1.0) -> "PauliSum":
        if string.n_qubits != self.n_qubits:
            raise ValueError("qubit counts differ")
        delta = (string.e - _popcount(string.x & string.z)) % 4
        key = (string.x, string.z)
        self._terms[key] = self._terms.get(key, 0.0) + coeff * _PHASES[delta]
        return self

    def prune(self, tol: float = 1e-12) -> "PauliSum":
        self._terms = {k: v for k, v in self._terms.items() if abs(v) > tol}
        return self

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        out = PauliSum(self.n_qubits)
        out._terms = dict(self._terms)
        for k, v in other._terms.items():
            out._terms[k] = out._terms.get(k, 0.0) + v
        return out

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            out = PauliSum(self.n_qubits)
            out._terms = {k: v * other for k, v in self._terms.items()}
            return out
        if isinstance(other, PauliSum):
            if self.n_qubits != other.n_qubits:
                raise ValueError("qubit counts differ")
            out = PauliSum(self.n_qubits)
            for (x1, z1), c1 in self._terms.items():
                a = PauliString(self.n_qubits, x1, z1, _popcount(x1 & z1))
                for (x2, z2), c2 in other._terms.items():
                    b = PauliString(self.n_qubits, x2, z2, _popcount(x2 & z2))
                    out.add(a * b, c1 * c2)
            return out
        return NotImplemented

    __rmul__ = __mul__

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def add_scaled(self, other: "PauliSum", scale: complex) -> "PauliSum":
        """Accumulate scale * other into this sum, in place."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        for k, v in other._terms.items():
            self._terms[k] = self._terms.get(k, 0.0) + scale * v
        return self

    def identity_weight(self) -> complex:
        return self._terms.get((0, 0), 0.0)

    def pop_identity(self) -> complex:
        """Remove and return the identity term's coefficient."""
        return self._terms.pop((0, 0), 0.0)

    def abs_norm(self) -> float:
        """Sum of absolute coefficients; an upper bound on the operator norm."""
        return float(sum(abs(v) for v in self._terms.values()))

    def terms(self, tol: float = 1e-12):
        """Real (coefficient, canonical string) pairs.

        Raises if any coefficient retains an imaginary part above `tol`,
        which would make the sum non-Hermitian.
        """
        out = []
        for (x, z), c in self._terms.items():
            if abs(c.imag) > tol:
                raise ValueError(f"non-Hermitian term with coefficient {c}")
            if abs(c.real) <= tol:
                continue
            out.append((float(c.real), PauliString(self.n_qubits, x, z, _popcount(x & z))))
        out.sort(key=lambda t: (t[1].x, t[1].z))
        return out

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.n_qubits
        m = np.zeros((dim, dim), dtype=complex)
        for (x, z), c in self._terms.items():
            m += c * PauliString(self.n_qubits, x, z, _popcount(x & z)).to_matrix()
        return m


def p_operator(mu: int, L: int, n_qubits: int) -> PauliString:
    """Anti-commuting generator for block mu at correlation width L.

    Z on qubits L, 2L, ..., L*(mu-1) and X on the block
    L*(mu-1)+1 ... L*mu (1-based).  L=1 gives the familiar
    Z-chain-then-X Jordan-Wigner image of a_mu^dag + a_mu.
    """
    if L < 1 or n_qubits % L != 0:
        raise ValueError(f"L={L} must divide n_qubits={n_qubits}")
    if not 1 <= mu <= n_qubits // L:
        raise ValueError(f"mu={mu} out of range for {n_qubits // L} blocks")
    x = 0
    for q in range(L * (mu - 1) + 1, L * mu + 1):
        x |= 1 << (q - 1)
    z = 0
    for q in range(L, L * (mu - 1) + 1, L):
        z |= 1 << (q - 1)
    return PauliString(n_qubits, x, z, 0)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Letterwise Pauli product with exact phase accumulation."""
    return a * b


def anticommutator_norm(mu: int, nu: int, L: int, n_qubits: int) -> float:
    """Symbolic norm of {p_mu, p_nu} - 2*delta_mn*I.

    Returns the sum of absolute residual coefficients, which is zero
    exactly when the anti-commutation relation holds.
    """
    a = p_operator(mu, L, n_qubits)
    b = p_operator(nu, L, n_qubits)
    s = PauliSum(n_qubits)
    s.add(a * b, 1.0)
    s.add(b * a, 1.0)
    if mu == nu:
        s.add(PauliString.identity(n_qubits), -2.0)
    s.prune(0.0)
    return s.abs_norm()


def expectation_sign_table(s: PauliString, basis_state) -> int:
    """<b|s|b> for a computational basis state: +1, -1 or 0.

    `basis_state` is either an integer index or a bitstring whose first
    character is qubit 1's occupation.
    """
    if isinstance(basis_state, str):
        if len(basis_state) != s.n_qubits:
            raise ValueError("bitstring length mismatch")
        b = 0
        for q, ch in enumerate(basis_state):
            if ch == "1":
                b |= 1 << q
            elif ch != "0":
                raise ValueError(f"bad bit {ch!r}")
    else:
        b = int(basis_state)
    if s.x != 0:
        return 0
    val = _PHASES[s.e] * (-1) ** (_popcount(s.z & b) & 1)
    if val.imag != 0:
        raise ValueError("string with imaginary phase has no real diagonal")
    return int(val.real)
