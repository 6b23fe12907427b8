"""Decomposition of 3x3 unitaries into subspace rotations.

Any SU(3) matrix factors as three Z-Y-Z sandwiches, one per two-level
subspace: a 02 sandwich, then a 01 sandwich, then a 12 sandwich (as a matrix
product; temporally the 12 block acts first).  Eight angles suffice because
the first-column reduction leaves no phase freedom on the middle step.  A U(3)
matrix adds one global phase, a third of the determinant's argument.

The parameter extraction reads angles off matrix entries with atan2 on moduli
(no divisions, no arccos), so it is stable at the boundaries.  When the first
column is concentrated in the middle entry the generic read-off degenerates;
the decomposition then falls back to closed-form candidates and keeps whichever
reconstructs best.  Callers should rely on the reconstruction residual, never
on particular angle values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, rotation
from .gates import frobenius_distance, is_unitary, phase_matrix, rotation_matrix

__all__ = [
    "Su3Params",
    "U3Decomposition",
    "decompose_su3",
    "reconstruct_su3",
    "params_to_circuit",
    "decompose_u3",
    "decompose_diagonal",
    "decompose_special_diagonal",
]

# Below this modulus an entry's phase is unconstrained and is pinned to 0.
_PHASE_EPS = 1e-12


@dataclass(frozen=True)
class Su3Params:
    theta1: float
    phi1: float
    psi1: float
    theta2: float
    psi2: float
    theta3: float
    phi3: float
    psi3: float


@dataclass(frozen=True)
class U3Decomposition:
    alpha: float
    su3: Su3Params


def reconstruct_su3(p: Su3Params) -> np.ndarray:
    """Multiply out the nine-rotation factorization of the parameters."""
    return (
        rotation_matrix("Z02", (-p.phi1 + p.psi1) / 2)
        @ rotation_matrix("Y02", -p.theta1)
        @ rotation_matrix("Z02", (-p.phi1 - p.psi1) / 2)
        @ rotation_matrix("Z01", p.psi2 / 2)
        @ rotation_matrix("Y01", -p.theta2)
        @ rotation_matrix("Z01", -p.psi2 / 2)
        @ rotation_matrix("Z12", (-p.phi3 + p.psi3) / 2)
        @ rotation_matrix("Y12", -p.theta3)
        @ rotation_matrix("Z12", (-p.phi3 - p.psi3) / 2)
    )


def params_to_circuit(p: Su3Params, wire: int) -> Circuit:
    """Nine-rotation circuit on one wire realizing reconstruct_su3(p)."""
    gates = (
        rotation("Z12", (-p.phi3 - p.psi3) / 2, wire),
        rotation("Y12", -p.theta3, wire),
        rotation("Z12", (-p.phi3 + p.psi3) / 2, wire),
        rotation("Z01", -p.psi2 / 2, wire),
        rotation("Y01", -p.theta2, wire),
        rotation("Z01", p.psi2 / 2, wire),
        rotation("Z02", (-p.phi1 - p.psi1) / 2, wire),
        rotation("Y02", -p.theta1, wire),
        rotation("Z02", (-p.phi1 + p.psi1) / 2, wire),
    )
    return Circuit(wire, gates)


def _arg(z: complex) -> float:
    return float(np.angle(z)) if abs(z) > _PHASE_EPS else 0.0


def _generic_params(u: np.ndarray) -> Su3Params:
    theta2 = np.arctan2(abs(u[1, 0]), np.hypot(abs(u[0, 0]), abs(u[2, 0])))
    theta1 = np.arctan2(abs(u[2, 0]), abs(u[0, 0]))
    theta3 = np.arctan2(abs(u[1, 2]), abs(u[1, 1]))
    return Su3Params(
        theta1=float(theta1),
        phi1=-_arg(u[0, 0]),
        psi1=-_arg(u[2, 0]),
        theta2=float(theta2),
        psi2=-_arg(u[1, 0]),
        theta3=float(theta3),
        phi3=-_arg(u[1, 1]),
        psi3=_arg(-u[1, 2]),
    )


def _middle_row_params(u: np.ndarray) -> Su3Params:
    # First column concentrated in u21: put all the work in the 12 sandwich.
    return Su3Params(
        theta1=0.0,
        phi1=0.0,
        psi1=0.0,
        theta2=np.pi / 2,
        psi2=-_arg(u[1, 0]),
        theta3=float(np.arctan2(abs(u[2, 1]), abs(u[2, 2]))),
        phi3=_arg(u[2, 2]),
        psi3=-_arg(u[2, 1]),
    )


def _antidiagonal_params(u: np.ndarray) -> Su3Params:
    # All three thetas at a quarter turn; covers anti-diagonal upper blocks.
    return Su3Params(
        theta1=np.pi / 2,
        phi1=0.0,
        psi1=_arg(-u[0, 1]),
        theta2=np.pi / 2,
        psi2=-_arg(u[1, 0]),
        theta3=np.pi / 2,
        phi3=0.0,
        psi3=0.0,
    )


def decompose_su3(u: np.ndarray) -> Su3Params:
    """Extract the eight rotation angles of a special unitary 3x3 matrix.

    Tries the generic entry read-off plus two degenerate-case closed forms and
    returns whichever parameters reconstruct ``u`` with least residual.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (3, 3):
        raise ValueError("input must be a 3x3 matrix")
    if not is_unitary(u, tol=1e-8):
        defect = frobenius_distance(u @ u.conj().T, np.eye(3))
        raise ValueError(f"input is not unitary (defect {defect:.3e})")
    if abs(np.linalg.det(u) - 1) > 1e-8:
        raise ValueError("input must have unit determinant; use decompose_u3")
    best, best_res = None, np.inf
    for extract in (_generic_params, _middle_row_params, _antidiagonal_params):
        p = extract(u)
        res = frobenius_distance(reconstruct_su3(p), u)
        if res < best_res:
            best, best_res = p, res
    return best


def decompose_u3(u: np.ndarray) -> U3Decomposition:
    """Split a 3x3 unitary into a global phase and an SU(3) part.

    alpha is a third of the principal argument of the determinant, so the
    original matrix is exp(i alpha) times the reconstructed SU(3) factor.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (3, 3):
        raise ValueError("input must be a 3x3 matrix")
    if not is_unitary(u, tol=1e-8):
        defect = frobenius_distance(u @ u.conj().T, np.eye(3))
        raise ValueError(f"input is not unitary (defect {defect:.3e})")
    alpha = float(np.angle(np.linalg.det(u)) / 3)
    return U3Decomposition(alpha=alpha, su3=decompose_su3(u * np.exp(-1j * alpha)))


def reconstruct_u3(d: U3Decomposition) -> np.ndarray:
    return np.exp(1j * d.alpha) * reconstruct_su3(d.su3)


def decompose_diagonal(alpha: float, beta: float, zeta: float) -> tuple[float, tuple[Gate, Gate]]:
    """Write diag(e^{ia}, e^{ib}, e^{iz}) as a global phase and two Z rotations.

    Returns the phase angle and (R_Z01, R_Z12) gates on wire 1; the matrix is
    phase * Z01 * Z12 (diagonal factors commute, so order is moot).
    """
    phase = (alpha + beta + zeta) / 3
    g01 = rotation("Z01", (2 * alpha - beta - zeta) / 3, 1)
    g12 = rotation("Z12", (alpha + beta - 2 * zeta) / 3, 1)
    return phase, (g01, g12)


def decompose_special_diagonal(alpha: float, beta: float, variant: int = 1) -> tuple[Gate, Gate]:
    """Two-rotation forms of diag(e^{ia}, e^{ib}, e^{-i(a+b)}).

    Three equivalent variants exist; all three reconstruct the same matrix.
    """
    if variant == 1:
        pair = rotation("Z01", alpha, 1), rotation("Z12", alpha + beta, 1)
    elif variant == 2:
        pair = rotation("Z02", alpha, 1), rotation("Z12", beta, 1)
    elif variant == 3:
        pair = rotation("Z02", alpha + beta, 1), rotation("Z01", -beta, 1)
    else:
        raise ValueError(f"variant must be 1, 2 or 3, got {variant!r}")
    return pair


def diagonal_phase_matrix(phase: float, gates: tuple[Gate, Gate]) -> np.ndarray:
    """Dense matrix of a decompose_diagonal result (for checks and tests)."""
    m = phase_matrix(phase)
    for g in gates:
        m = m @ rotation_matrix(g.axis, g.angle)
    return m
