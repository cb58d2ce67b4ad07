"""Coincidence counts -> Pauli correlation matrix, error matrix and density matrix."""

import warnings

import numpy as np

from .errors import InsufficientCounts, NonFiniteInput
from .pauli import density_from_correlations

# rows: Pauli operator (0, x, y, z); columns: outcome (H, V, D, A, R, L)
_SETTING = np.array(
    [
        [1, 1, 1, 1, 1, 1],
        [1, -1, 0, 0, 0, 0],
        [0, 0, 1, -1, 0, 0],
        [0, 0, 0, 0, 1, -1],
    ],
    dtype=int,
)
_SETTING.setflags(write=False)

# radicands down to this value are rounding noise and get clamped to zero
RADICAND_CLAMP = 1e-12


def setting_matrix():
    """The 4x6 sign matrix mapping outcome counts onto Pauli expectation values."""
    return _SETTING.copy()


def validate_counts(E):
    E = np.asarray(E, dtype=float)
    if E.shape != (6, 6):
        raise NonFiniteInput(f"coincidence matrix must be 6x6, got {E.shape}")
    if not np.all(np.isfinite(E)):
        raise NonFiniteInput("coincidence matrix contains NaN or infinite entries")
    if np.any(E < 0):
        raise NonFiniteInput("coincidence matrix contains negative counts")
    for i in range(3):
        for j in range(3):
            if E[2 * i : 2 * i + 2, 2 * j : 2 * j + 2].sum() == 0:
                warnings.warn(
                    f"basis block ({'xyz'[i]}, {'xyz'[j]}) has no counts",
                    RuntimeWarning,
                    stacklevel=3,
                )
    return E


def sample_correlations(E):
    """Estimate the correlation matrix C and its standard errors from counts.

    With S the setting matrix and N = |S| E |S|^T the number of counts
    entering each entry::

        C  = (S E S^T) / N
        dC = sqrt(((S^2 E S^2^T) / N - C * C) / (N - 1))

    where every division, product, square and root acts entry-wise. Counts may
    be non-integer (expected values).

    Returns:
        (C, dC): two 4x4 float arrays.
    """
    E = validate_counts(E)
    S = _SETTING.astype(float)
    absS = np.abs(S)
    numer = S @ E @ S.T
    norm = absS @ E @ absS.T
    # S**2 == |S| entrywise, so the second moment uses the normalizer itself
    second = (S * S) @ E @ (S * S).T

    C = np.empty((4, 4))
    dC = np.empty((4, 4))
    for k in range(4):
        for l in range(4):
            n = norm[k, l]
            if n < 2:
                raise InsufficientCounts(k, l, n)
            c = numer[k, l] / n
            radicand = (second[k, l] / n - c * c) / (n - 1)
            if radicand < 0:
                if radicand < -RADICAND_CLAMP:
                    raise NonFiniteInput(
                        f"negative variance {radicand:g} for correlation ({k},{l})"
                    )
                radicand = 0.0
            C[k, l] = c
            dC[k, l] = np.sqrt(radicand)
    C[0, 0] = 1.0
    dC[0, 0] = 0.0
    return C, dC


def assemble_density(C):
    """Density matrix corresponding to a sampled correlation matrix."""
    return density_from_correlations(C)
