"""End-to-end reconstruction: counts or correlations -> EQP, errors, diagnostics, verdict."""

import math
from dataclasses import dataclass

import numpy as np

from . import diagnostics as dg
from .eqp import decompose, negativity_summary, reassemble_state
from .errors import TooManyFailures
from .montecarlo import MonteCarloConfig, propagate
from .pauli import SINGLET, density_from_correlations
from .tomography import sample_correlations


@dataclass
class Reconstruction:
    correlations: np.ndarray
    errors: np.ndarray
    density: np.ndarray
    standard_form: object
    decomposition: object
    summary: object
    diagnostics: object
    uncertainty: object = None
    threshold: float = 3.0
    mc_failed: bool = False

    @property
    def reassembly_deviation(self):
        """Largest entry deviation of the reassembled state from the input state."""
        return float(np.abs(reassemble_state(self.decomposition) - self.density).max())

    @property
    def effective_deviation(self):
        """Same, against the (possibly regularized) matrix actually decomposed."""
        rho = density_from_correlations(self.standard_form.effective)
        return float(np.abs(reassemble_state(self.decomposition) - rho).max())

    @property
    def verdict(self):
        return self.diagnostics.verdict


def reconstruct(C, dC=None, mc=None, target=SINGLET, threshold=3.0):
    """Run the full pipeline on a correlation matrix.

    Args:
        C: 4x4 correlation matrix with C[0, 0] == 1.
        dC: standard errors of C; required for Monte Carlo error bars.
        mc: :class:`MonteCarloConfig`, or None to skip error propagation.
        target: pure state for the fidelity diagnostic (None to skip).
        threshold: significance in standard deviations needed to call a
            negative weight entangled.
    """
    C = np.asarray(C, dtype=float)
    rho = density_from_correlations(C)
    sf, d = decompose(C)

    uncertainty = None
    mc_failed = False
    if mc is not None:
        if dC is None:
            raise ValueError("Monte Carlo propagation needs the correlation errors dC")
        try:
            uncertainty = propagate(C, dC, mc, target=target if target is not None else SINGLET)
        except TooManyFailures as exc:
            uncertainty = exc.report
            mc_failed = True
        d = d.with_errors(uncertainty.weights)

    summary = negativity_summary(d)
    diag = dg.diagnose(rho, sf.q, target)
    overall, eqp_v, pt_v, disagree = dg.verdict(summary, diag.pt_negativity, sf.q, threshold)
    diag.verdict, diag.eqp_verdict, diag.pt_verdict, diag.disagreement = (
        overall,
        eqp_v,
        pt_v,
        disagree,
    )
    return Reconstruction(
        correlations=C,
        errors=None if dC is None else np.asarray(dC, dtype=float),
        density=rho,
        standard_form=sf,
        decomposition=d,
        summary=summary,
        diagnostics=diag,
        uncertainty=uncertainty,
        threshold=threshold,
        mc_failed=mc_failed,
    )


def reconstruct_counts(E, mc=None, target=SINGLET, threshold=3.0):
    C, dC = sample_correlations(E)
    return reconstruct(C, dC, mc=mc, target=target, threshold=threshold)


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _matrix(M):
    return [[_finite(v) for v in row] for row in np.asarray(M, dtype=float)]


def _complex(M):
    M = np.asarray(M, dtype=complex)
    return {"real": _matrix(M.real), "imag": _matrix(M.imag)}


def eigen_coefficients(d):
    """Bloch coefficients per side in table layout: rows x+, x-, y+, y-, z+, z-."""
    rows_a = [4 * w + 2 * s for w in range(3) for s in (0, 1)]
    rows_b = [4 * w + s for w in range(3) for s in (0, 1)]
    return d.bloch_a[rows_a], d.bloch_b[rows_b]


def report_dict(rec, counts=None, provenance=None, config=None):
    """JSON-ready report of a reconstruction."""
    sf, d, dg_, u = rec.standard_form, rec.decomposition, rec.diagnostics, rec.uncertainty
    coeff_a, coeff_b = eigen_coefficients(d)
    errors = d.errors if d.errors is not None else np.full(len(d.weights), np.nan)

    def with_error(value, error):
        return {"value": _finite(value), "error": None if u is None else _finite(error)}

    out = {
        "schema": "eqptomo.report/1",
        "provenance": provenance or {},
        "config": config or {},
    }
    if counts is not None:
        out["counts"] = _matrix(counts)
    out["correlations"] = {
        "C": _matrix(rec.correlations),
        "dC": None if rec.errors is None else _matrix(rec.errors),
    }
    out["density"] = _complex(rec.density)
    out["standard_form"] = {
        "diagonal": [_finite(v) for v in sf.diagonal],
        "q": _finite(sf.q),
        "residual": _finite(sf.residual),
        "boost_residual": _finite(sf.boost_residual),
        "boost_passes": sf.passes,
        "regularization": sf.regularization,
        "scale": _finite(sf.scale),
        "boost_a": _matrix(sf.boost_a),
        "boost_b": _matrix(sf.boost_b),
        "rotation_a": _matrix(sf.rotation_a),
        "rotation_b": _matrix(sf.rotation_b),
        "local_a": _complex(sf.local_a),
        "local_b": _complex(sf.local_b),
    }
    out["eqp"] = {
        "labels": [list(pair) for pair in d.labels],
        "weights": [_finite(v) for v in d.weights],
        "errors": [_finite(v) for v in errors],
        "bloch_a": _matrix(d.bloch_a),
        "bloch_b": _matrix(d.bloch_b),
        "coefficients": {"alice": _matrix(coeff_a), "bob": _matrix(coeff_b)},
        "sum": _finite(d.weights.sum()),
        "reassembly_deviation": _finite(rec.reassembly_deviation),
        "effective_reassembly_deviation": _finite(rec.effective_deviation),
    }
    s = rec.summary
    out["negativity"] = {
        "min_weight": _finite(s.min_weight),
        "error": _finite(s.error),
        "significance": None if math.isnan(s.significance) else (
            "inf" if math.isinf(s.significance) else s.significance
        ),
        "label": list(s.label),
    }
    out["diagnostics"] = {
        "purity": with_error(dg_.purity, u.purity if u else None),
        "fidelity": with_error(dg_.fidelity, u.fidelity if u else None),
        "pt_negativity": with_error(dg_.pt_negativity, u.pt_negativity if u else None),
        "eigenvalues": [_finite(v) for v in dg_.eigenvalues],
        "physical": dg_.physical,
        "q": _finite(dg_.q),
    }
    out["monte_carlo"] = None if u is None else {
        "samples": u.samples,
        "failed": u.failed,
        "regularized": u.regularized,
        "failure_fraction": u.failure_fraction,
        "too_many_failures": rec.mc_failed,
    }
    out["verdict"] = {
        "overall": dg_.verdict,
        "eqp": dg_.eqp_verdict,
        "pt": dg_.pt_verdict,
        "disagreement": dg_.disagreement,
        "threshold": rec.threshold,
    }
    return out
