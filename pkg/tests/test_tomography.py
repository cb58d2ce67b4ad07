import numpy as np
import pytest

from eqptomo.errors import InsufficientCounts, NonFiniteInput
from eqptomo.pauli import SINGLET, correlations_from_density, two_qubit_state
from eqptomo.synthgen import expected_counts
from eqptomo.tomography import assemble_density, sample_correlations, setting_matrix, validate_counts
from conftest import random_state


def test_setting_matrix():
    S = setting_matrix()
    assert S.shape == (4, 6)
    assert np.array_equal(S[0], np.ones(6))
    assert np.array_equal(S[1], [1, -1, 0, 0, 0, 0])


def test_expected_counts_recover_state(rng):
    for _ in range(10):
        rho = random_state(rng)
        C, dC = sample_correlations(expected_counts(rho, 1000.0))
        assert np.allclose(C, correlations_from_density(rho), atol=1e-12)
        assert np.allclose(assemble_density(C), rho, atol=1e-12)
        assert dC[0, 0] == 0


def test_perfect_correlations_have_zero_error():
    C, dC = sample_correlations(expected_counts(two_qubit_state(SINGLET), 500))
    assert np.allclose(np.diag(C), [1, -1, -1, -1])
    # |C| = 1 entries carry no binomial spread
    assert np.allclose(np.diag(dC)[1:], 0, atol=1e-6)


def test_error_is_binomial():
    E = np.zeros((6, 6))
    E[0, 0], E[0, 1], E[1, 0], E[1, 1] = 30, 10, 10, 50
    C, dC = sample_correlations(E + 1.0)
    N = E[:2, :2].sum() + 4
    c = C[1, 1]
    assert dC[1, 1] == pytest.approx(np.sqrt((1 - c**2) / (N - 1)))


def test_insufficient_counts():
    E = np.ones((6, 6))
    E[0:2, 0:2] = 0
    E[0, 0] = 1
    with pytest.raises(InsufficientCounts):
        sample_correlations(E)


def test_rejects_bad_input():
    E = np.ones((6, 6))
    E[2, 3] = np.nan
    with pytest.raises(NonFiniteInput):
        validate_counts(E)
    with pytest.raises((ValueError, NonFiniteInput)):
        validate_counts(np.ones((5, 6)))
    E = np.ones((6, 6))
    E[1, 1] = -1
    with pytest.raises((ValueError, NonFiniteInput)):
        validate_counts(E)
