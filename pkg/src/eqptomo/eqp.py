"""Entanglement quasiprobabilities of standard-form states and their local transforms."""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import SingularTransformation
from .pauli import bloch_vector, eigenbasis_of

EIGEN_LABELS = ("x+", "x-", "y+", "y-", "z+", "z-")

# (axis, alice sign, bob sign) for the 12 entries that solve the separability problem
WEIGHT_INDEX = tuple(
    (axis, a, b) for axis in range(3) for a in (0, 1) for b in (0, 1)
)
WEIGHT_LABELS = tuple(
    (EIGEN_LABELS[2 * axis + a], EIGEN_LABELS[2 * axis + b]) for axis, a, b in WEIGHT_INDEX
)

#: negative weights smaller than this in magnitude count as zero
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class StdEQP:
    """6x6 quasiprobability over (x+, x-, y+, y-, z+, z-) for Alice and Bob.

    Entries outside the three same-axis 2x2 blocks are structural zeros and
    are flagged by ``mask`` (True on the 12 meaningful entries).
    """

    matrix: np.ndarray
    mask: np.ndarray
    q: float

    @property
    def weights(self):
        """The 12 meaningful entries in block order."""
        return np.array([self.matrix[2 * w + a, 2 * w + b] for w, a, b in WEIGHT_INDEX])


@dataclass
class EQPDecomposition:
    weights: np.ndarray
    states_a: np.ndarray
    states_b: np.ndarray
    bloch_a: np.ndarray
    bloch_b: np.ndarray
    std: StdEQP = None
    errors: np.ndarray = None
    labels: tuple = field(default=WEIGHT_LABELS)

    def with_errors(self, errors):
        return replace(self, errors=np.asarray(errors, dtype=float))


def _block_mask():
    mask = np.zeros((6, 6), dtype=bool)
    for w in range(3):
        mask[2 * w : 2 * w + 2, 2 * w : 2 * w + 2] = True
    mask.setflags(write=False)
    return mask


_MASK = _block_mask()


def std_eqp(rho_x, rho_y, rho_z, rho_0=1.0):
    """Closed-form EQP of the standard-form state diag(rho_0, rho_x, rho_y, rho_z).

    Each axis w contributes the block::

        [[q/12 + (|r|+r)/4, q/12 + (|r|-r)/4],
         [q/12 + (|r|-r)/4, q/12 + (|r|+r)/4]]     r = rho_w

    with q = rho_0 - |rho_x| - |rho_y| - |rho_z|.
    """
    rho = (float(rho_x), float(rho_y), float(rho_z))
    q = float(rho_0) - sum(abs(r) for r in rho)
    P = np.zeros((6, 6))
    for w, r in enumerate(rho):
        diag = q / 12 + (abs(r) + r) / 4
        off = q / 12 + (abs(r) - r) / 4
        P[2 * w : 2 * w + 2, 2 * w : 2 * w + 2] = [[diag, off], [off, diag]]
    return StdEQP(P, _MASK, q)


def _eigvecs():
    out = []
    for w in "xyz":
        out.extend(eigenbasis_of(w))
    return np.array(out)


_EIGVECS = _eigvecs()


def transform_eqp(std, T_A, T_B):
    """Carry a standard-form EQP through rho = (T_A x T_B) rho_std (T_A x T_B)^dag.

    Weights pick up the norms <w|T^dag T|w> of the transformed eigenvectors;
    the states are the normalized images ``T|w>``.
    """
    T_A = np.asarray(T_A, dtype=complex)
    T_B = np.asarray(T_B, dtype=complex)
    img_a = _EIGVECS @ T_A.T
    img_b = _EIGVECS @ T_B.T
    norm_a = np.einsum("ij,ij->i", img_a.conj(), img_a).real
    norm_b = np.einsum("ij,ij->i", img_b.conj(), img_b).real
    if norm_a.min() < 1e-14 or norm_b.min() < 1e-14:
        raise SingularTransformation("local transformation annihilates a separability eigenvector")
    img_a /= np.sqrt(norm_a)[:, None]
    img_b /= np.sqrt(norm_b)[:, None]

    n = len(WEIGHT_INDEX)
    weights = np.empty(n)
    states_a = np.empty((n, 2), dtype=complex)
    states_b = np.empty((n, 2), dtype=complex)
    for i, (w, a, b) in enumerate(WEIGHT_INDEX):
        ia, ib = 2 * w + a, 2 * w + b
        weights[i] = std.matrix[ia, ib] * norm_a[ia] * norm_b[ib]
        states_a[i] = img_a[ia]
        states_b[i] = img_b[ib]
    return EQPDecomposition(
        weights, states_a, states_b, bloch_vector(states_a), bloch_vector(states_b), std=std
    )


def reassemble_state(d):
    """sum_i P_i |a_i, b_i><a_i, b_i|."""
    kets = np.einsum("ia,ib->iab", d.states_a, d.states_b).reshape(-1, 4)
    return np.einsum("i,ia,ib->ab", d.weights, kets, kets.conj())


@dataclass(frozen=True)
class NegativitySummary:
    min_weight: float
    error: float
    significance: float
    index: int

    @property
    def negative(self):
        return self.min_weight < -ZERO_TOL

    @property
    def label(self):
        return WEIGHT_LABELS[self.index]


def negativity_summary(d):
    """Most negative weight, its standard error and -min/error.

    Without Monte Carlo errors the error is NaN and any negative minimum gets
    infinite significance. Significance is NaN when the minimum is not
    negative.
    """
    i = int(np.argmin(d.weights))
    m = float(d.weights[i])
    err = float(d.errors[i]) if d.errors is not None else math.nan
    if m >= -ZERO_TOL:
        sig = math.nan
    elif math.isnan(err) or err == 0.0:
        sig = math.inf
    else:
        sig = -m / err
    return NegativitySummary(m, err, sig, i)


def decompose(C, **kwargs):
    """Standard form and EQP decomposition of a correlation matrix.

    Keyword arguments go to :func:`to_standard_form`.
    """
    from .standard_form import to_standard_form

    sf = to_standard_form(C, **kwargs)
    std = std_eqp(*sf.diagonal[1:])
    return sf, transform_eqp(std, sf.local_a, sf.local_b)
