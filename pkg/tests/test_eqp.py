import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqptomo.diagnostics import pt_min_eigenvalue
from eqptomo.eqp import (
    WEIGHT_LABELS,
    decompose,
    negativity_summary,
    reassemble_state,
    std_eqp,
    transform_eqp,
)
from eqptomo.errors import SingularTransformation
from eqptomo.pauli import correlations_from_density, density_from_correlations
from conftest import random_state, random_unitary

corr = st.floats(-1, 1)


def test_singlet_weights():
    std = std_eqp(-1, -1, -1)
    assert std.q == -2
    w = np.sort(std.weights)
    assert np.allclose(w[:6], -1 / 6, atol=1e-15)
    assert np.allclose(w[6:], 1 / 3, atol=1e-15)
    assert np.all(std.matrix[~std.mask] == 0)


@given(corr, corr, corr)
def test_std_eqp_sums_to_one(x, y, z):
    std = std_eqp(x, y, z)
    assert std.weights.sum() == pytest.approx(1, abs=1e-12)


@given(corr, corr, corr)
def test_std_eqp_reproduces_state(x, y, z):
    d = transform_eqp(std_eqp(x, y, z), np.eye(2), np.eye(2))
    assert np.allclose(reassemble_state(d), density_from_correlations(np.diag([1, x, y, z])), atol=1e-12)


@given(corr, corr, corr)
def test_negativity_iff_q_negative(x, y, z):
    std = std_eqp(x, y, z)
    if abs(std.q) > 1e-12:
        assert (std.weights.min() < 0) == (std.q < 0)
        # the most negative entry is q/12 whenever q < 0
        if std.q < 0:
            assert std.weights.min() == pytest.approx(std.q / 12)


def test_min_weight_sign_matches_partial_transpose():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(100_000):
        x, y, z = rng.uniform(-1, 1, size=3)
        rho = density_from_correlations(np.diag([1, x, y, z]))
        if np.linalg.eigvalsh(rho).min() < 0:
            continue
        std = std_eqp(x, y, z)
        if abs(std.q) > 1e-8:
            assert (std.weights.min() < 0) == (pt_min_eigenvalue(rho) < 0)
            checked += 1
    assert checked > 10_000


def test_local_transformation_reassembles(rng):
    for _ in range(20):
        T_A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        T_B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        std = std_eqp(*rng.uniform(-0.5, 0.5, size=3))
        d = transform_eqp(std, T_A, T_B)
        T = np.kron(T_A, T_B)
        rho_std = reassemble_state(transform_eqp(std, np.eye(2), np.eye(2)))
        assert np.allclose(reassemble_state(d), T @ rho_std @ T.conj().T, atol=1e-12)


def test_singular_transformation():
    T = np.array([[1, 0], [0, 0]], dtype=complex)
    with pytest.raises(SingularTransformation):
        transform_eqp(std_eqp(-1, -1, -1), T, np.eye(2))


def test_decompose_random_states(rng):
    for _ in range(50):
        rho = random_state(rng)
        sf, d = decompose(correlations_from_density(rho))
        assert d.weights.sum() == pytest.approx(1, abs=1e-10)
        assert np.allclose(reassemble_state(d), rho, atol=1e-8)
        assert np.allclose(np.linalg.norm(d.bloch_a, axis=1), 1)
        assert np.allclose(np.linalg.norm(d.bloch_b, axis=1), 1)


def test_sorted_weights_invariant_under_local_unitaries(rng):
    for _ in range(20):
        rho = random_state(rng)
        U = np.kron(random_unitary(rng), random_unitary(rng))
        _, d0 = decompose(correlations_from_density(rho))
        _, d1 = decompose(correlations_from_density(U @ rho @ U.conj().T))
        assert np.allclose(np.sort(d0.weights), np.sort(d1.weights), atol=1e-8)


def test_negativity_summary():
    _, d = decompose(np.diag([1.0, -1, -1, -1]))
    s = negativity_summary(d)
    assert s.negative and s.min_weight == pytest.approx(-1 / 6)
    assert s.significance == np.inf
    s = negativity_summary(d.with_errors(np.full(12, 1 / 60)))
    assert s.significance == pytest.approx(10)
    assert s.label in WEIGHT_LABELS
    _, d = decompose(np.diag([1.0, 0.2, 0.1, 0.0]))
    assert np.isnan(negativity_summary(d).significance)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0))
def test_werner_weights_closed_form(p):
    from eqptomo.synthgen import werner

    _, d = decompose(correlations_from_density(werner(p)))
    assert d.weights.min() == pytest.approx((1 - 3 * p) / 12, abs=1e-9)
