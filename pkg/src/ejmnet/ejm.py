"""Generalized Elegant Joint Measurement (EJM) bases.

For ``theta`` in ``[0, pi/2]`` the four two-qubit states

    |Phi_b> = (sqrt3 + e^{i theta})/(2 sqrt2) |m_b, -m_b>
            + (sqrt3 - e^{i theta})/(2 sqrt2) |-m_b, m_b>

interpolate between the elegant basis (theta = 0) and a Bell basis
(theta = pi/2). ``m_b`` runs over the vertices of a regular tetrahedron.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import qmath

THETA_MAX = np.pi / 2

_TETRAHEDRON = np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
)


def tetrahedron_vectors() -> np.ndarray:
    """The four vertices m_1..m_4 as rows, each of length sqrt(3)."""
    return _TETRAHEDRON.copy()


def qubit_state(m: np.ndarray) -> np.ndarray:
    """Pure qubit pointing along Bloch direction ``m`` (any nonzero length).

    Uses the symmetric phase convention
    ``sqrt((1+eta)/2) e^{-i phi/2}|0> + sqrt((1-eta)/2) e^{i phi/2}|1>``
    with ``eta = z/|m|`` and ``phi = atan2(y, x)``.
    """
    m = np.asarray(m, dtype=float)
    norm = np.linalg.norm(m)
    if norm == 0:
        raise ValueError("qubit_state needs a nonzero Bloch vector")
    eta = m[2] / norm
    phi = np.arctan2(m[1], m[0])
    return np.array(
        [
            np.sqrt((1 + eta) / 2) * np.exp(-0.5j * phi),
            np.sqrt(max(0.0, (1 - eta) / 2)) * np.exp(0.5j * phi),
        ]
    )


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not (0.0 <= theta <= THETA_MAX + 1e-15):
        raise ValueError(f"theta={theta} outside [0, pi/2]")
    return min(theta, THETA_MAX)


def ejm_states(theta: float, vertices: np.ndarray | None = None) -> np.ndarray:
    """Rows are |Phi_b^theta>, b = 1..4, in the order of ``vertices``."""
    theta = _check_theta(theta)
    if vertices is None:
        vertices = _TETRAHEDRON
    phase = np.exp(1j * theta)
    c_plus = (np.sqrt(3) + phase) / (2 * np.sqrt(2))
    c_minus = (np.sqrt(3) - phase) / (2 * np.sqrt(2))
    rows = []
    for m in vertices:
        up, down = qubit_state(m), qubit_state(-np.asarray(m))
        rows.append(c_plus * np.kron(up, down) + c_minus * np.kron(down, up))
    return np.array(rows)


@dataclass(frozen=True, eq=False)
class EjmBasis:
    theta: float
    states: np.ndarray
    projectors: np.ndarray

    def overlap_matrix(self) -> np.ndarray:
        return self.states.conj() @ self.states.T

    def completeness_error(self) -> float:
        return float(np.max(np.abs(self.projectors.sum(axis=0) - np.eye(4))))

    def orthonormality_error(self) -> float:
        return float(np.max(np.abs(self.overlap_matrix() - np.eye(4))))

    def marginal(self, b: int, slot: int) -> np.ndarray:
        """Reduced state of qubit ``slot`` (0 or 1) of basis state ``b`` (0-based)."""
        return qmath.partial_trace(self.projectors[b], {slot})


@lru_cache(maxsize=4096)
def _cached_basis(theta: float) -> EjmBasis:
    states = ejm_states(theta)
    projectors = np.einsum("bi,bj->bij", states, states.conj())
    states.setflags(write=False)
    projectors.setflags(write=False)
    return EjmBasis(theta=theta, states=states, projectors=projectors)


def ejm_basis(theta: float) -> EjmBasis:
    return _cached_basis(_check_theta(theta))


def basis_entanglement(theta: float) -> float:
    """Entanglement entropy (bits) shared by all four basis states at ``theta``."""
    basis = ejm_basis(theta)
    values = [qmath.entropy(basis.marginal(b, 0)) for b in range(4)]
    if max(values) - min(values) > qmath.TOL.equality:
        raise ArithmeticError(f"basis states differ in entanglement: {values}")
    return values[0]
