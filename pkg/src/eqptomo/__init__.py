"""Reconstruction of entanglement quasiprobabilities from two-qubit polarization data."""

__version__ = "0.1.0"

from .eqp import (
    EQPDecomposition,
    StdEQP,
    decompose,
    negativity_summary,
    reassemble_state,
    std_eqp,
    transform_eqp,
)
from .montecarlo import MonteCarloConfig, UncertaintyReport, propagate
from .pauli import (
    correlations_from_density,
    density_from_correlations,
    eigenbasis_of,
    outcome_vector,
    pauli_matrix,
)
from .pipeline import Reconstruction, reconstruct, reconstruct_counts
from .standard_form import to_standard_form
from .synthgen import SimulationConfig, outcome_probabilities, preset_state, sample_counts
from .tomography import assemble_density, sample_correlations, setting_matrix
