"""Standard quality and entanglement metrics used to cross-check the EQP."""

import math
from dataclasses import dataclass

import numpy as np

from .pauli import SINGLET

ENTANGLED = "entangled"
SEPARABLE = "separable"
INCONCLUSIVE = "inconclusive"

#: |values| below this are treated as zero when comparing signs
SIGN_TOL = 1e-12


def partial_transpose(rho):
    """Transpose Bob's indices: ((i, j), (k, l)) -> ((i, l), (k, j))."""
    rho = np.asarray(rho)
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def purity(rho):
    rho = np.asarray(rho)
    return float(np.einsum("ij,ji->", rho, rho).real)


def fidelity_with_target(rho, psi=SINGLET):
    psi = np.asarray(psi, dtype=complex)
    return float(np.vdot(psi, np.asarray(rho) @ psi).real)


def eigenvalues(rho):
    """Real eigenvalues of a Hermitian matrix, descending."""
    rho = np.asarray(rho)
    return np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[::-1]


def pt_min_eigenvalue(rho):
    return float(eigenvalues(partial_transpose(rho))[-1])


@dataclass
class DiagnosticsReport:
    purity: float
    fidelity: float
    pt_negativity: float
    eigenvalues: np.ndarray
    physical: bool
    q: float
    verdict: str = INCONCLUSIVE
    eqp_verdict: str = INCONCLUSIVE
    pt_verdict: str = INCONCLUSIVE
    disagreement: bool = False


def diagnose(rho, q, target=SINGLET, physical_tol=1e-8):
    ev = eigenvalues(rho)
    return DiagnosticsReport(
        purity=purity(rho),
        fidelity=fidelity_with_target(rho, target) if target is not None else math.nan,
        pt_negativity=pt_min_eigenvalue(rho),
        eigenvalues=ev,
        physical=bool(ev[-1] >= -physical_tol),
        q=float(q),
    )


def verdict(summary, pt_negativity, q, threshold=3.0):
    """Combine the EQP result with the partial-transpose cross-check.

    Returns ``(verdict, eqp_verdict, pt_verdict, disagreement)``. The overall
    verdict is the EQP one: entangled when the most negative weight reaches
    ``threshold`` standard deviations, separable when every weight is
    nonnegative within one standard deviation and q > 0. A PT result that
    points the other way is flagged, never reconciled.
    """
    m, err, sig = summary.min_weight, summary.error, summary.significance
    if m < -SIGN_TOL and sig >= threshold:
        eqp = ENTANGLED
    else:
        slack = 0.0 if math.isnan(err) else err
        if m >= -max(slack, SIGN_TOL) and q > SIGN_TOL:
            eqp = SEPARABLE
        else:
            eqp = INCONCLUSIVE

    if pt_negativity < -SIGN_TOL:
        pt = ENTANGLED
    elif pt_negativity > SIGN_TOL:
        pt = SEPARABLE
    else:
        pt = INCONCLUSIVE
    disagree = {eqp, pt} == {ENTANGLED, SEPARABLE}
    return eqp, eqp, pt, disagree
