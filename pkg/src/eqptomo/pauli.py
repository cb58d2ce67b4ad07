"""Polarization qubit basis and the Pauli-operator convention used throughout.

The operator labels follow the polarization measurement bases rather than the
textbook naming::

    label   this package          textbook    eigenbasis
    x       diag(1, -1)           Z           H, V
    y       [[0, 1], [1, 0]]      X           D, A
    z       [[0, -i], [i, 0]]     Y           R, L

The relabeling is cyclic, so ``sigma_x @ sigma_y == 1j * sigma_z`` still
holds and all SU(2)/SO(3) identities carry over unchanged.

Two-qubit matrices use the basis order ``HH, HV, VH, VV`` and correlation
matrices are indexed ``(0, x, y, z)`` on both axes.
"""

import numpy as np

OUTCOMES = ("H", "V", "D", "A", "R", "L")
PAULI_LABELS = ("0", "x", "y", "z")

_S2 = 1.0 / np.sqrt(2.0)

_VECTORS = {
    "H": np.array([1.0, 0.0], dtype=complex),
    "V": np.array([0.0, 1.0], dtype=complex),
    "D": np.array([_S2, _S2], dtype=complex),
    "A": np.array([_S2, -_S2], dtype=complex),
    "R": np.array([_S2, 1j * _S2], dtype=complex),
    "L": np.array([_S2, -1j * _S2], dtype=complex),
}

_PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[1, 0], [0, -1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
    ],
    dtype=complex,
)
_PAULI.setflags(write=False)

# sigma_k (x) sigma_l for all k, l; shape (4, 4, 4, 4)
PAULI_PRODUCTS = np.einsum("kab,lcd->klacbd", _PAULI, _PAULI).reshape(4, 4, 4, 4)
PAULI_PRODUCTS.setflags(write=False)

_EIGENBASIS = {"x": ("H", "V"), "y": ("D", "A"), "z": ("R", "L")}


def _index(w):
    if isinstance(w, str):
        try:
            return PAULI_LABELS.index(w)
        except ValueError:
            raise ValueError(f"unknown Pauli label {w!r}") from None
    w = int(w)
    if not 0 <= w <= 3:
        raise ValueError(f"Pauli index out of range: {w}")
    return w


def pauli_matrix(w):
    """Return the 2x2 Pauli operator for label ``w`` ('0', 'x', 'y', 'z' or 0..3)."""
    return _PAULI[_index(w)].copy()


def pauli_matrices():
    """All four operators stacked as an array of shape (4, 2, 2)."""
    return _PAULI.copy()


def outcome_vector(s):
    """State vector of the polarization outcome ``s`` in the {H, V} basis."""
    try:
        return _VECTORS[s].copy()
    except KeyError:
        raise ValueError(f"unknown outcome label {s!r}") from None


def eigenbasis_of(w):
    """Return ``(|w+>, |w->)``, the eigenvectors of sigma_w for eigenvalues +1, -1."""
    label = PAULI_LABELS[_index(w)]
    if label == "0":
        raise ValueError("the identity has no distinguished eigenbasis")
    plus, minus = _EIGENBASIS[label]
    return outcome_vector(plus), outcome_vector(minus)


def density_from_correlations(C):
    """Assemble rho = sum_kl C[k, l] sigma_k (x) sigma_l / 4."""
    C = np.asarray(C, dtype=float)
    if C.shape != (4, 4):
        raise ValueError(f"correlation matrix must be 4x4, got {C.shape}")
    return np.einsum("kl,klij->ij", C, PAULI_PRODUCTS) / 4.0


def correlations_from_density(rho):
    """C[k, l] = tr(rho sigma_k (x) sigma_l); real part of the exact trace."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {rho.shape}")
    # tr(A B) = sum_ij A_ij B_ji
    return np.einsum("ij,klji->kl", rho, PAULI_PRODUCTS).real


def bloch_vector(psi):
    """Coefficients (a_x, a_y, a_z) with |psi><psi| = (1 + a.sigma) / 2; vectorized over leading axes."""
    psi = np.asarray(psi, dtype=complex)
    return np.einsum("...a,kab,...b->...k", psi.conj(), _PAULI[1:], psi).real


def local_action(T):
    """4x4 real matrix Lambda with T sigma_k T^dag = sum_j Lambda[j, k] sigma_j.

    Conjugating a two-qubit state by ``A (x) B`` maps its correlation matrix
    to ``local_action(A) @ C @ local_action(B).T``.
    """
    T = np.asarray(T, dtype=complex)
    conj = np.einsum("ab,kbc,dc->kad", T, _PAULI, T.conj())
    # coefficient j of X is tr(sigma_j X) / 2
    return np.einsum("jba,kab->jk", _PAULI, conj).real / 2.0


def is_hermitian(M, atol=1e-12):
    M = np.asarray(M)
    return bool(np.allclose(M, M.conj().T, atol=atol, rtol=0))


def two_qubit_state(psi):
    """Projector onto a (normalized copy of a) 4-component state vector."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
SINGLET.setflags(write=False)
ETA = np.diag([1.0, -1.0, -1.0, -1.0])
ETA.setflags(write=False)
