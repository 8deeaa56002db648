import itertools

import numpy as np
import pytest

from ejmnet import qmath
from ejmnet.ejm import (
    basis_entanglement,
    ejm_basis,
    ejm_states,
    qubit_state,
    tetrahedron_vectors,
)

THETAS = np.linspace(0, np.pi / 2, 50)
H0 = qmath.binary_entropy((1 + np.sqrt(3) / 2) / 2)


def test_tetrahedron_vertices():
    m = tetrahedron_vectors()
    np.testing.assert_array_equal(m[0], [1, 1, 1])
    np.testing.assert_array_equal(m, [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
    for i, j in itertools.combinations(range(4), 2):
        assert m[i] @ m[j] == -1
    np.testing.assert_array_equal(m.sum(axis=0), [0, 0, 0])
    np.testing.assert_allclose(np.linalg.norm(m, axis=1), np.sqrt(3))


def test_qubit_state_north_pole():
    np.testing.assert_allclose(qubit_state([0, 0, np.sqrt(3)]), [1, 0])


def test_qubit_state_pauli_expectation():
    m1 = tetrahedron_vectors()[0]
    psi = qubit_state(m1)
    direct = [np.real(np.conj(psi) @ s @ psi) for s in qmath.PAULI]
    np.testing.assert_allclose(direct, m1 / np.sqrt(3), atol=1e-12)


@pytest.mark.parametrize("m", list(tetrahedron_vectors()) + [[0.3, -2.0, 0.1], [0, 0, -1]])
def test_antipodes_orthogonal(m):
    m = np.asarray(m, dtype=float)
    assert abs(qmath.inner(qubit_state(m), qubit_state(-m))) < 1e-12


def test_qubit_state_zero_vector():
    with pytest.raises(ValueError):
        qubit_state([0, 0, 0])


def test_theta_zero_marginals():
    basis = ejm_basis(0.0)
    for b, m in enumerate(tetrahedron_vectors()):
        np.testing.assert_allclose(qmath.bloch_vector(basis.marginal(b, 0)), m / 2, atol=1e-12)
        np.testing.assert_allclose(qmath.bloch_vector(basis.marginal(b, 1)), -m / 2, atol=1e-12)
        # radius sqrt(3)/2
        assert np.linalg.norm(qmath.bloch_vector(basis.marginal(b, 0))) == pytest.approx(np.sqrt(3) / 2)


def test_theta_pi_half_is_maximally_entangled():
    basis = ejm_basis(np.pi / 2)
    for b in range(4):
        for slot in (0, 1):
            np.testing.assert_allclose(basis.marginal(b, slot), np.eye(2) / 2, atol=1e-12)


@pytest.mark.parametrize("theta", THETAS)
def test_orthonormal_and_complete(theta):
    basis = ejm_basis(theta)
    assert basis.orthonormality_error() < 1e-12
    assert basis.completeness_error() < 1e-12


@pytest.mark.parametrize("theta", THETAS[::7])
def test_marginal_law(theta):
    basis = ejm_basis(theta)
    for b, m in enumerate(tetrahedron_vectors()):
        expected = np.cos(theta) / 2 * m
        np.testing.assert_allclose(qmath.bloch_vector(basis.marginal(b, 0)), expected, atol=1e-12)
        np.testing.assert_allclose(qmath.bloch_vector(basis.marginal(b, 1)), -expected, atol=1e-12)


@pytest.mark.parametrize("theta", THETAS[::5])
def test_equal_entanglement_across_basis(theta):
    basis = ejm_basis(theta)
    values = [qmath.entropy(basis.marginal(b, 0)) for b in range(4)]
    assert max(values) - min(values) < 1e-12


def test_swap_equals_inverted_tetrahedron():
    # exchanging the two qubits of |Phi_b> gives the basis built on -m_b
    for theta in THETAS[::10]:
        swapped = ejm_states(theta).reshape(4, 2, 2).transpose(0, 2, 1).reshape(4, 4)
        inverted = ejm_states(theta, -tetrahedron_vectors())
        for b in range(4):
            np.testing.assert_allclose(qmath.dm(swapped[b]), qmath.dm(inverted[b]), atol=1e-12)


def test_entanglement_endpoints():
    assert basis_entanglement(np.pi / 2) == pytest.approx(1.0, abs=1e-12)
    assert basis_entanglement(0.0) == pytest.approx(H0, abs=1e-12)
    assert H0 == pytest.approx(0.35458, abs=1e-5)


def test_entanglement_monotone():
    grid = np.linspace(0, np.pi / 2, 100)
    values = np.array([basis_entanglement(t) for t in grid])
    assert np.all(np.diff(values) >= -1e-12)


def test_entanglement_matches_marginal_eigenvalues():
    # Bloch length cos(theta) sqrt(3)/2 fixes the eigenvalues of the marginal
    for theta in THETAS[::6]:
        r = np.cos(theta) * np.sqrt(3) / 2
        assert basis_entanglement(theta) == pytest.approx(qmath.binary_entropy((1 + r) / 2), abs=1e-12)


@pytest.mark.parametrize("theta", [-0.1, np.pi / 2 + 1e-6, 4.0])
def test_theta_out_of_range(theta):
    with pytest.raises(ValueError):
        ejm_basis(theta)


def test_basis_is_immutable_and_cached():
    a = ejm_basis(0.3)
    assert a is ejm_basis(0.3)
    with pytest.raises(ValueError):
        a.states[0, 0] = 0
