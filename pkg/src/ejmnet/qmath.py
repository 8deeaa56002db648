"""Dense complex linear algebra on qubit registers.

States are plain numpy arrays: a 1-d array of length ``2**n`` is a state
vector, a square 2-d array of side ``2**n`` is a density matrix. Qubit 0 is
the most significant bit, so ``|101010>`` indexes amplitude ``0b101010``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_VECTOR_QUBITS = 24
MAX_DENSITY_QUBITS = 12


@dataclass(frozen=True)
class Tolerances:
    equality: float = 1e-12
    positivity: float = 1e-10


TOL = Tolerances()


class DimensionError(ValueError):
    pass


def n_qubits(x: np.ndarray) -> int:
    """Number of qubits carried by a state vector or density matrix."""
    x = np.asarray(x)
    if x.ndim == 1:
        dim = x.shape[0]
    elif x.ndim == 2 and x.shape[0] == x.shape[1]:
        dim = x.shape[0]
    else:
        raise DimensionError(f"expected a vector or square matrix, got shape {x.shape}")
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def ket(bits: str) -> np.ndarray:
    """Computational basis state from a bit string, e.g. ``ket("01")``."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"invalid bit string {bits!r}")
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def normalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def dm(v: np.ndarray) -> np.ndarray:
    """Projector |v><v|."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product; ``a`` supplies the most significant qubits."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != b.ndim:
        raise DimensionError("kron needs two vectors or two density matrices")
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    it = iter(factors)
    out = np.asarray(next(it))
    for f in it:
        out = kron(out, f)
    return out


def _check_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permute_qubits(x: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Reorder qubits so that target position ``i`` holds source qubit ``perm[i]``."""
    x = np.asarray(x)
    n = n_qubits(x)
    perm = _check_perm(perm, n)
    if x.ndim == 1:
        return x.reshape((2,) * n).transpose(perm).reshape(-1)
    axes = perm + tuple(n + p for p in perm)
    return x.reshape((2,) * (2 * n)).transpose(axes).reshape(x.shape)


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or a.shape != b.shape:
        raise DimensionError(f"inner product of shapes {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep`` (kept in ascending order)."""
    rho = np.asarray(rho)
    if rho.ndim == 1:
        rho = dm(rho)
    n = n_qubits(rho)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep set {keep} invalid for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape((2,) * (2 * n))
    # move kept row/col axes first, traced axes last, then contract
    order = keep + [n + k for k in keep] + traced + [n + q for q in traced]
    t = t.transpose(order)
    dk, dt = 1 << len(keep), 1 << len(traced)
    t = t.reshape(dk, dk, dt, dt)
    return np.einsum("ijkk->ij", t)


def is_density_matrix(rho: np.ndarray, tol: Tolerances = TOL) -> bool:
    rho = np.asarray(rho)
    try:
        n_qubits(rho)
    except DimensionError:
        return False
    if rho.ndim != 2:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol.equality:
        return False
    if abs(np.trace(rho) - 1) > tol.equality:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -tol.positivity)


def entropy(rho: np.ndarray, tol: Tolerances = TOL) -> float:
    """Von Neumann entropy in bits."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or np.max(np.abs(rho - rho.conj().T)) > tol.equality:
        raise ValueError("entropy needs a Hermitian density matrix")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -tol.positivity:
        raise ValueError(f"negative eigenvalue {evals.min():.3e}")
    evals = np.clip(evals, 0.0, 1.0)
    nz = evals[evals > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Pauli expectation (x, y, z) of a one-qubit state or density matrix."""
    rho = np.asarray(rho)
    if rho.ndim == 1:
        rho = dm(rho)
    if rho.shape != (2, 2):
        raise DimensionError("bloch_vector needs a single qubit")
    return np.real(np.einsum("kij,ji->k", PAULI, rho))
