"""Synthetic coincidence counts from a known two-qubit state.

Convention: each of the 36 outcome pairs (s, t) is its own measurement
setting. ``pairs_per_setting`` N is the mean coincidence count of a setting,
so a setting with Born probability p(s, t) (normalized within its 2x2 basis
block) records Poisson(4 N p(s, t)) events. A block then holds 4N events on
average and the whole matrix 36N, e.g. 1.08 million for N = 30 000.
"""

from dataclasses import dataclass

import numpy as np

from .errors import UnphysicalState
from .pauli import OUTCOMES, SINGLET, outcome_vector, two_qubit_state

DEFAULT_PAIRS_PER_SETTING = 30_000


def singlet():
    return two_qubit_state(SINGLET)


def product():
    """(|H> + |V>)/sqrt(2) (x) |H>."""
    return two_qubit_state(np.kron(outcome_vector("D"), outcome_vector("H")))


def werner(p):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner mixing parameter must lie in [0, 1], got {p}")
    return p * singlet() + (1.0 - p) * np.eye(4) / 4


def maximally_mixed():
    return np.eye(4, dtype=complex) / 4


PRESETS = {
    "singlet": singlet,
    "product": product,
    "werner": werner,
    "mixed": maximally_mixed,
}


def preset_state(name, p=None):
    try:
        make = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    if name == "werner":
        if p is None:
            raise ValueError("the werner preset needs a mixing parameter p")
        return make(p)
    return make()


@dataclass
class SimulationConfig:
    state: np.ndarray
    pairs_per_setting: float = DEFAULT_PAIRS_PER_SETTING
    seed: int = None
    noise_free: bool = False
    efficiency: float = 1.0

    def __post_init__(self):
        self.state = np.asarray(self.state, dtype=complex)
        if self.pairs_per_setting <= 0:
            raise ValueError("pairs_per_setting must be positive")
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in (0, 1]")


_VECS = np.array([outcome_vector(s) for s in OUTCOMES])


def outcome_probabilities(rho):
    """p(s, t) = <s, t| rho |s, t> over the six polarization outcomes per side."""
    rho = np.asarray(rho, dtype=complex)
    ev = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if ev[0] < -1e-8:
        raise UnphysicalState(f"state has negative eigenvalue {ev[0]:.3g}")
    kets = np.einsum("sa,tb->stab", _VECS, _VECS).reshape(6, 6, 4)
    return np.einsum("sti,ij,stj->st", kets.conj(), rho, kets).real


def expected_counts(rho, pairs_per_setting=DEFAULT_PAIRS_PER_SETTING, efficiency=1.0):
    return 4.0 * pairs_per_setting * efficiency * outcome_probabilities(rho)


def sample_counts(cfg):
    """Coincidence matrix for ``cfg``: Poisson draws, or exact expectations if noise-free."""
    mean = expected_counts(cfg.state, cfg.pairs_per_setting, cfg.efficiency)
    mean = np.clip(mean, 0.0, None)
    if cfg.noise_free:
        return mean
    rng = np.random.default_rng(cfg.seed)
    return rng.poisson(mean).astype(float)
