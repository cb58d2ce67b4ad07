import numpy as np
import pytest

from eqptomo.errors import UnphysicalState
from eqptomo.pauli import correlations_from_density
from eqptomo.synthgen import (
    PRESETS,
    SimulationConfig,
    expected_counts,
    outcome_probabilities,
    preset_state,
    product,
    sample_counts,
    singlet,
)
from eqptomo.tomography import sample_correlations


def test_blocks_are_distributions():
    for name in PRESETS:
        P = outcome_probabilities(preset_state(name, 0.5))
        blocks = P.reshape(3, 2, 3, 2).sum(axis=(1, 3))
        assert np.allclose(blocks, 1)


def test_singlet_anticorrelated():
    P = outcome_probabilities(singlet())
    for k in range(3):
        assert P[2 * k, 2 * k] == pytest.approx(0, abs=1e-15)
        assert P[2 * k, 2 * k + 1] == pytest.approx(0.5)


def test_total_counts_convention():
    E = expected_counts(singlet(), 30_000)
    assert E.sum() == pytest.approx(1.08e6)
    assert E[:2, :2].sum() == pytest.approx(120_000)


def test_seeded_sampling():
    cfg = SimulationConfig(product(), 1000, seed=5)
    a, b = sample_counts(cfg), sample_counts(cfg)
    assert np.array_equal(a, b)
    assert np.all(a == np.round(a))


def test_noise_free_recovers_state():
    E = sample_counts(SimulationConfig(product(), 100, noise_free=True))
    C, _ = sample_correlations(E)
    assert np.allclose(C, correlations_from_density(product()), atol=1e-12)


def test_poisson_mean_and_variance():
    cfg = SimulationConfig(singlet(), 50, seed=1)
    draws = np.array([sample_counts(SimulationConfig(singlet(), 50, seed=s)) for s in range(400)])
    mean = expected_counts(cfg.state, 50)
    assert np.allclose(draws.mean(0), mean, atol=4 * np.sqrt(mean.max() / 400))
    assert np.allclose(draws[:, 0, 2].var(ddof=1), mean[0, 2], rtol=0.25)


def test_rejects_bad_input():
    with pytest.raises(UnphysicalState):
        outcome_probabilities(np.diag([1.2, 0, 0, -0.2]))
    with pytest.raises(ValueError):
        preset_state("werner")
    with pytest.raises(ValueError):
        preset_state("ghz")
    with pytest.raises(ValueError):
        SimulationConfig(singlet(), 0)
