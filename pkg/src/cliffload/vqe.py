"""Variational optimization of the correlated-ansatz parameter matrix.

The trainable object is the orthonormal matrix itself, parameterized as a
product of classical plane rotations applied to identity columns (a
Stiefel-manifold chart whose zero point is the Hartree-Fock reference).
Gradients are central finite differences: the map from these parameters to
circuit angles runs through the tree-angle extraction and is nonlinear, so
parameter-shift rules do not apply.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .chem import MolecularHamiltonian, fci_ground_energy, hf_energy
from .loader import LadderStyle, prepare_state_circuit
from .ortho import OrthonormalMatrix
from .sim import expectation, run

FD_STEP = 1e-5
LBFGS_MEMORY = 10


def n_parameters(n_modes: int, n_cols: int) -> int:
    return n_cols * n_modes - n_cols * (n_cols + 1) // 2


def rotation_pairs(n_modes: int, n_cols: int) -> list[tuple[int, int]]:
    """Row pairs (0-based) of the plane rotations, one angle each."""
    return [(i, j) for i in range(n_cols) for j in range(i + 1, n_modes)]


@dataclass
class StiefelParams:
    """Rotation angles for an n_modes x n_cols orthonormal matrix."""

    n_modes: int
    n_cols: int
    angles: np.ndarray

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        expected = n_parameters(self.n_modes, self.n_cols)
        if self.angles.shape != (expected,):
            raise ValueError(f"expected {expected} angles, got {self.angles.shape}")

    @classmethod
    def zeros(cls, n_modes: int, n_cols: int) -> "StiefelParams":
        return cls(n_modes, n_cols, np.zeros(n_parameters(n_modes, n_cols)))

    def replaced(self, angles: np.ndarray) -> "StiefelParams":
        return StiefelParams(self.n_modes, self.n_cols, angles)


def params_to_matrix(params: StiefelParams) -> OrthonormalMatrix:
    """Rotate the first n_cols identity columns by the angle sequence.

    All-zero angles give the identity columns, i.e. the reference
    determinant occupying the first blocks.
    """
    e = np.eye(params.n_modes)[:, : params.n_cols]
    for (i, j), angle in zip(rotation_pairs(params.n_modes, params.n_cols), params.angles):
        c, s = math.cos(angle), math.sin(angle)
        row_i = c * e[i] - s * e[j]
        row_j = s * e[i] + c * e[j]
        e[i], e[j] = row_i, row_j
    return OrthonormalMatrix(e)


def objective(
    params: StiefelParams,
    h: MolecularHamiltonian,
    L: int,
    style: LadderStyle,
) -> float:
    """Energy of the prepared ansatz state for the given parameters."""
    m = params_to_matrix(params)
    if L * m.n_rows != h.n_qubits:
        raise ValueError("parameter shape does not match the Hamiltonian")
    psi = run(prepare_state_circuit(m, L, style))
    return expectation(h.pauli, psi) + h.constant


def finite_difference_gradient(
    fun: Callable[[np.ndarray], float], x: np.ndarray, step: float = FD_STEP
) -> np.ndarray:
    grad = np.zeros_like(x)
    for i in range(x.size):
        probe = x.copy()
        probe[i] = x[i] + step
        f_plus = fun(probe)
        probe[i] = x[i] - step
        f_minus = fun(probe)
        grad[i] = (f_plus - f_minus) / (2.0 * step)
    return grad


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool
    trace: list[tuple[int, float, float]] = field(default_factory=list)


def lbfgs_minimize(
    fun: Callable[[np.ndarray], float],
    x0: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 200,
    memory: int = LBFGS_MEMORY,
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    fd_step: float = FD_STEP,
) -> MinimizeResult:
    """Limited-memory BFGS with two-loop recursion and backtracking search.

    Convergence when the gradient infinity norm drops below `tol` or the
    energy change falls below tol*(1+|E|).  Accepted steps always satisfy
    the Armijo decrease condition; curvature pairs that would break the
    positive-definiteness of the implicit Hessian are skipped rather than
    forced, which plays the role of the Wolfe curvature safeguard.
    """
    if grad is None:
        def grad(v: np.ndarray) -> np.ndarray:
            return finite_difference_gradient(fun, v, fd_step)

    x = np.asarray(x0, dtype=float).copy()
    f = fun(x)
    g = grad(x)
    s_hist: list[np.ndarray] = []
    y_hist: list[np.ndarray] = []
    rho_hist: list[float] = []
    trace = [(0, f, float(np.max(np.abs(g))))]
    converged = False
    iterations = 0
    c1 = 1e-4
    for k in range(1, max_iter + 1):
        iterations = k
        if np.max(np.abs(g)) < tol:
            converged = True
            break
        d = -_two_loop(g, s_hist, y_hist, rho_hist)
        slope = float(g @ d)
        if slope >= 0.0:  # not a descent direction; restart from steepest
            d = -g
            slope = float(g @ d)
            s_hist, y_hist, rho_hist = [], [], []
        alpha = 1.0
        f_new = g_new = None
        for _ in range(50):
            x_new = x + alpha * d
            f_try = fun(x_new)
            if f_try <= f + c1 * alpha * slope:
                g_try = grad(x_new)
                f_new, g_new = f_try, g_try
                break
            alpha *= 0.5
        if f_new is None:  # line search stalled at a flat point
            converged = True
            break
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        # s.y > 0 is the curvature content of the weak Wolfe condition;
        # pairs failing it are skipped, not forced
        if sy > 1e-12 * float(np.linalg.norm(s) * np.linalg.norm(y)):
            s_hist.append(s)
            y_hist.append(y)
            rho_hist.append(1.0 / sy)
            if len(s_hist) > memory:
                s_hist.pop(0)
                y_hist.pop(0)
                rho_hist.pop(0)
        delta = f - f_new
        x, f, g = x_new, f_new, g_new
        trace.append((k, f, float(np.max(np.abs(g)))))
        if delta < tol * (1.0 + abs(f)):
            converged = True
            break
    return MinimizeResult(x=x, fun=f, iterations=iterations, converged=converged, trace=trace)


def _two_loop(
    g: np.ndarray,
    s_hist: Sequence[np.ndarray],
    y_hist: Sequence[np.ndarray],
    rho_hist: Sequence[float],
) -> np.ndarray:
    q = g.copy()
    alphas = []
    for s, y, rho in zip(reversed(s_hist), reversed(y_hist), reversed(rho_hist)):
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    if s_hist:
        s, y = s_hist[-1], y_hist[-1]
        q *= float(s @ y) / float(y @ y)
    for (s, y, rho), a in zip(zip(s_hist, y_hist, rho_hist), reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return q


def correlation_fraction(e_hf: float, e_opt: float, e_fci: float) -> float:
    """(E_HF - E_opt) / (E_HF - E_FCI); NaN flags a vanishing denominator."""
    if e_hf < e_fci - 1e-12:
        raise ValueError("E_HF below E_FCI violates the variational ordering")
    denom = e_hf - e_fci
    if denom < 1e-12:
        return float("nan")
    return (e_hf - e_opt) / denom


@dataclass
class VqeResult:
    energy: float
    params: StiefelParams
    e_hf: float
    e_fci: float
    e_pair: float
    fraction: float
    iterations: int
    converged: bool
    trace: list[tuple[int, float, float]]

    def to_json(self) -> str:
        return json.dumps(
            {
                "energy": self.energy,
                "e_hf": self.e_hf,
                "e_fci": self.e_fci,
                "e_pair": self.e_pair,
                "fraction": self.fraction,
                "iterations": self.iterations,
                "converged": self.converged,
                "n_modes": self.params.n_modes,
                "n_cols": self.params.n_cols,
                "angles": [float(a) for a in self.params.angles],
            },
            indent=2,
        )

    def trace_csv(self) -> str:
        lines = ["iter,energy,grad_norm"]
        for it, en, gn in self.trace:
            lines.append(f"{it},{en:.12f},{gn:.3e}")
        return "\n".join(lines) + "\n"


def run_vqe(
    h: MolecularHamiltonian,
    d: int,
    L: int,
    style: LadderStyle = LadderStyle.LOGTREE,
    tol: float = 1e-9,
    max_iter: int = 200,
    init_perturbation: float = 0.0,
    seed: int = 0,
) -> VqeResult:
    """Minimize the ansatz energy from the Hartree-Fock starting point."""
    if h.n_qubits % L or d % L:
        raise ValueError(f"L={L} must divide both n_qubits={h.n_qubits} and d={d}")
    n_modes = h.n_qubits // L
    n_cols = d // L
    x0 = np.zeros(n_parameters(n_modes, n_cols))
    if init_perturbation:
        x0 += init_perturbation * np.random.default_rng(seed).standard_normal(x0.size)
    template = StiefelParams.zeros(n_modes, n_cols)

    def fun(x: np.ndarray) -> float:
        return objective(template.replaced(x), h, L, style)

    res = lbfgs_minimize(fun, x0, tol=tol, max_iter=max_iter)
    e_hf = hf_energy(h, d)
    e_fci = fci_ground_energy(h, d)
    return VqeResult(
        energy=res.fun,
        params=template.replaced(res.x),
        e_hf=e_hf,
        e_fci=e_fci,
        e_pair=e_hf - res.fun,
        fraction=correlation_fraction(e_hf, res.fun, e_fci),
        iterations=res.iterations,
        converged=res.converged,
        trace=res.trace,
    )
