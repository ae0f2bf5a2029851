"""Real orthonormal matrices and binary-tree Givens schedules.

The classical half of the loader synthesis lives here: reducing a unit
vector to +e1 with a log-depth tree of plane rotations, recording the
angles used, and evaluating determinants of row minors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple, Sequence

import numpy as np

ORTHO_TOL = 1e-12


class OrthonormalMatrix:
    """A real N x d matrix with orthonormal columns (d <= N)."""

    __slots__ = ("array",)

    def __init__(self, array, tol: float = ORTHO_TOL):
        a = np.array(array, dtype=float)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        n, d = a.shape
        if d > n:
            raise ValueError(f"more columns ({d}) than rows ({n})")
        gram = a.T @ a
        if np.max(np.abs(gram - np.eye(d))) > tol:
            raise ValueError("columns are not orthonormal")
        self.array = a

    @property
    def n_rows(self) -> int:
        return self.array.shape[0]

    @property
    def n_cols(self) -> int:
        return self.array.shape[1]

    def column(self, l: int) -> np.ndarray:
        """Column l (1-based) as a vector."""
        return self.array[:, l - 1].copy()

    def to_json(self) -> str:
        return json.dumps(
            {
                "rows": self.n_rows,
                "cols": self.n_cols,
                "data": [float(v) for v in self.array.reshape(-1)],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "OrthonormalMatrix":
        try:
            obj = json.loads(text)
            rows, cols = int(obj["rows"]), int(obj["cols"])
            data = [float(v) for v in obj["data"]]
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad matrix JSON: {exc}") from None
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        return cls(np.array(data).reshape(rows, cols))

    def __repr__(self) -> str:
        return f"OrthonormalMatrix({self.n_rows}x{self.n_cols})"


class GivensRotation(NamedTuple):
    mu: int  # 1-based
    nu: int  # 1-based, mu < nu
    theta: float  # radians


@dataclass
class GivensSchedule:
    """Rotation angles arranged by tree sublayer (s = 1 innermost)."""

    n: int
    layers: list[list[GivensRotation]]

    def all_rotations(self) -> list[GivensRotation]:
        return [r for layer in self.layers for r in layer]


def tree_index_sets(n: int) -> list[list[tuple[int, int]]]:
    """(mu, nu) pairs of each tree sublayer for n logical modes.

    Sublayer s holds the pairs (2^s (k-1) + 1, 2^(s-1) (2k-1) + 1); pairs
    whose nu exceeds n are clipped, so the reduction is complete for any n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    layers = []
    s = 1
    while 1 << (s - 1) < n:
        layer = []
        k = 1
        while True:
            mu = (1 << s) * (k - 1) + 1
            nu = (1 << (s - 1)) * (2 * k - 1) + 1
            if nu > n:
                break
            layer.append((mu, nu))
            k += 1
        layers.append(layer)
        s += 1
    return layers


def _rotate_pair(x: np.ndarray, mu: int, nu: int, theta: float) -> None:
    """Replay map: rotate coordinates (mu, nu) by 2*theta, in place."""
    c = math.cos(2.0 * theta)
    s = math.sin(2.0 * theta)
    xm, xn = x[mu - 1], x[nu - 1]
    x[mu - 1] = c * xm + s * xn
    x[nu - 1] = -s * xm + c * xn


def replay_schedule(schedule: GivensSchedule, x: Sequence[float]) -> np.ndarray:
    """Apply a schedule's rotations to a vector, sublayer by sublayer."""
    v = np.array(x, dtype=float)
    if v.shape != (schedule.n,):
        raise ValueError("vector length does not match schedule")
    for layer in schedule.layers:
        for mu, nu, theta in layer:
            _rotate_pair(v, mu, nu, theta)
    return v


def compute_angles(x: Sequence[float]) -> GivensSchedule:
    """Angles that reduce a unit vector to +e1 along the tree schedule.

    Each pair takes theta = arctan(x_nu / x_mu) / 2, computed with the
    two-argument arctangent and normalized into (-pi/4, pi/4], which zeroes
    x_nu while preserving the sign of x_mu.  If the reduction ends at -e1
    the root angle gets an extra pi/2, flipping the residual sign so the
    replay lands exactly on +e1.
    """
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("expected a vector")
    n = v.size
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("input vector is not normalized")
    layers: list[list[GivensRotation]] = []
    for pairs in tree_index_sets(n):
        layer = []
        for mu, nu in pairs:
            xm, xn = v[mu - 1], v[nu - 1]
            theta = 0.5 * math.atan2(xn, xm)
            if theta > math.pi / 4:
                theta -= math.pi / 2
            elif theta <= -math.pi / 4:
                theta += math.pi / 2
            _rotate_pair(v, mu, nu, theta)
            v[nu - 1] = 0.0
            layer.append(GivensRotation(mu, nu, theta))
        layers.append(layer)
    if layers and v[0] < 0.0:
        mu, nu, theta = layers[-1][0]
        layers[-1][0] = GivensRotation(mu, nu, theta + math.pi / 2)
        v[0] = -v[0]
    return GivensSchedule(n=n, layers=layers)


def minor_determinant(m: OrthonormalMatrix, rows: Sequence[int]) -> float:
    """det of the square minor with rows restricted to an ordered index set.

    Uses the exact Leibniz expansion for up to 4 columns and pivoted
    Gaussian elimination above that.
    """
    d = m.n_cols
    idx = list(rows)
    if len(idx) != d:
        raise ValueError(f"need exactly {d} row indices")
    if any(not 1 <= r <= m.n_rows for r in idx):
        raise ValueError("row index out of range")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("row indices must be strictly increasing")
    sub = m.array[[r - 1 for r in idx], :]
    if d <= 4:
        return _leibniz_det(sub)
    return _pivoted_det(sub)


def _leibniz_det(a: np.ndarray) -> float:
    d = a.shape[0]
    if d == 1:
        return float(a[0, 0])
    if d == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    total = 0.0
    for perm in permutations(range(d)):
        sign = _perm_sign(perm)
        prod = 1.0
        for i, j in enumerate(perm):
            prod *= a[i, j]
        total += sign * prod
    return float(total)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _pivoted_det(a: np.ndarray) -> float:
    a = a.copy()
    d = a.shape[0]
    det = 1.0
    for col in range(d):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            return 0.0
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            det = -det
        det *= a[col, col]
        a[col + 1 :, col:] -= np.outer(a[col + 1 :, col] / a[col, col], a[col, col:])
    return float(det)


def random_orthonormal(n_rows: int, n_cols: int, seed: int) -> OrthonormalMatrix:
    """Seeded random point on the Stiefel manifold via Gram-Schmidt."""
    if n_cols > n_rows:
        raise ValueError(f"more columns ({n_cols}) than rows ({n_rows})")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_rows, n_cols))
    # two modified Gram-Schmidt passes to hit the 1e-12 invariant
    for _ in range(2):
        for j in range(n_cols):
            for i in range(j):
                a[:, j] -= (a[:, i] @ a[:, j]) * a[:, i]
            norm = np.linalg.norm(a[:, j])
            if norm < 1e-10:
                raise ValueError("degenerate random draw")
            a[:, j] /= norm
    return OrthonormalMatrix(a)
