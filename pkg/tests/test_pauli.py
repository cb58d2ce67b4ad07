import numpy as np
import pytest

from eqptomo.pauli import (
    ETA,
    OUTCOMES,
    SINGLET,
    bloch_vector,
    correlations_from_density,
    density_from_correlations,
    eigenbasis_of,
    local_action,
    outcome_vector,
    pauli_matrices,
    pauli_matrix,
    two_qubit_state,
)
from conftest import random_state, random_unitary


def test_algebra_is_cyclic():
    x, y, z = (pauli_matrix(w) for w in "xyz")
    assert np.allclose(x @ y, 1j * z)
    assert np.allclose(y @ z, 1j * x)
    assert np.allclose(z @ x, 1j * y)
    for s in (x, y, z):
        assert np.allclose(s @ s, np.eye(2))


def test_polarization_basis_labels():
    assert OUTCOMES == ("H", "V", "D", "A", "R", "L")
    for w, (p, m) in zip("xyz", ("HV", "DA", "RL")):
        s = pauli_matrix(w)
        for label, sign in ((p, 1), (m, -1)):
            v = outcome_vector(label)
            assert np.allclose(s @ v, sign * v)


def test_eigenbasis_is_orthonormal():
    for w in "xyz":
        plus, minus = eigenbasis_of(w)
        assert abs(np.vdot(plus, minus)) < 1e-15
        assert np.isclose(np.vdot(plus, plus).real, 1)


def test_singlet_correlations():
    C = correlations_from_density(two_qubit_state(SINGLET))
    assert np.allclose(C, np.diag([1, -1, -1, -1]))


def test_correlation_roundtrip(rng):
    for _ in range(20):
        rho = random_state(rng)
        C = correlations_from_density(rho)
        assert np.allclose(density_from_correlations(C), rho, atol=1e-14)
        assert C[0, 0] == pytest.approx(1)


def test_bloch_vector_matches_expectations(rng):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi /= np.linalg.norm(psi)
    b = bloch_vector(psi)
    want = [np.vdot(psi, s @ psi).real for s in pauli_matrices()[1:]]
    assert np.allclose(b, want)
    assert np.linalg.norm(b) == pytest.approx(1)


def test_local_unitary_acts_as_rotation(rng):
    U = random_unitary(rng)
    L = local_action(U)
    assert np.allclose(L[0], [1, 0, 0, 0])
    R = L[1:, 1:]
    assert np.allclose(R @ R.T, np.eye(3))
    assert np.linalg.det(R) == pytest.approx(1)


def test_local_action_is_representation(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.allclose(local_action(A @ B), local_action(A) @ local_action(B))


def test_local_operation_on_correlations(rng):
    rho = random_state(rng)
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    T = np.kron(A, B)
    C_new = correlations_from_density(T @ rho @ T.conj().T)
    C = correlations_from_density(rho)
    assert np.allclose(C_new, local_action(A) @ C @ local_action(B).T)


def test_hermitian_filter_is_lorentz():
    r, w = 0.7, np.array([0.6, 0.0, 0.8])
    F = np.cosh(r / 2) * np.eye(2) + np.sinh(r / 2) * np.einsum("k,kab->ab", w, pauli_matrices()[1:])
    L = local_action(F)
    assert np.allclose(L @ ETA @ L.T, ETA)
    assert L[0, 0] == pytest.approx(np.cosh(r))
    assert np.allclose(L[1:, 0], np.sinh(r) * w)
