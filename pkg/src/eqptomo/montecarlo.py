"""Monte Carlo propagation of correlation-matrix errors through the EQP pipeline."""

import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eqp import WEIGHT_INDEX, decompose
from .errors import ReconstructionError, TooManyFailures
from .pauli import PAULI_PRODUCTS, SINGLET

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 50_000
CHUNK_SIZE = 500
MAX_FAILURE_FRACTION = 0.01
ALIGN_MODES = ("states", "diagonal", "none")
WORKERS_ENV = "EQPTOMO_WORKERS"


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class MonteCarloConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    workers: int = field(default_factory=default_workers)
    align: str = "states"

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least 2 Monte Carlo samples")
        if self.align not in ALIGN_MODES:
            raise ValueError(f"align must be one of {ALIGN_MODES}, got {self.align!r}")
        self.seed = int(self.seed) & (2**64 - 1)


@dataclass
class UncertaintyReport:
    weights: np.ndarray
    weight_mean: np.ndarray
    purity: float
    fidelity: float
    pt_negativity: float
    samples: int
    failed: int
    regularized: int

    @property
    def failure_fraction(self):
        return self.failed / self.samples


def _index(axis, a, b):
    return 4 * axis + 2 * a + b


def _relabel(perm, flip_a, flip_b):
    """Sample index feeding each reference weight under an axis relabeling."""
    return np.array(
        [_index(perm[w], a ^ flip_a[w], b ^ flip_b[w]) for w, a, b in WEIGHT_INDEX]
    )


_PERMS = list(itertools.permutations(range(3)))
_EVEN_FLIPS = [f for f in itertools.product((0, 1), repeat=3) if sum(f) % 2 == 0]


def _eigen_bloch(d):
    """Bloch vectors of each side's six transformed eigenstates (x+, x-, ..., z-)."""
    idx_a = [_index(w, s, 0) for w in range(3) for s in (0, 1)]
    idx_b = [_index(w, 0, s) for w in range(3) for s in (0, 1)]
    return d.bloch_a[idx_a], d.bloch_b[idx_b]


def align_by_states(d, ref):
    """Index map matching a sample's product states to the reference ones.

    Searches a common axis permutation for both sides and, per axis and side,
    whether the +/- labels are exchanged, maximizing the summed overlap of
    Bloch vectors with the reference states.
    """
    A, B = _eigen_bloch(d)
    RA, RB = _eigen_bloch(ref)
    OA = A @ RA.T
    OB = B @ RB.T
    best, best_score = None, -math.inf
    for perm in _PERMS:
        score = 0.0
        fa, fb = [], []
        for w, s in enumerate(perm):
            for O, flips in ((OA, fa), (OB, fb)):
                keep = O[2 * s, 2 * w] + O[2 * s + 1, 2 * w + 1]
                swap = O[2 * s + 1, 2 * w] + O[2 * s, 2 * w + 1]
                flips.append(int(swap > keep))
                score += max(keep, swap)
        if score > best_score:
            best, best_score = (perm, fa, fb), score
    return _relabel(*best)


def align_by_diagonal(diag, ref_diag, d=None, ref=None):
    """Index map from the signed axis permutation closest to the reference diagonal.

    Only relabelings reachable by proper rotations are considered: any axis
    permutation combined with an even number of sign changes. A sign change on
    an axis exchanges Bob's +/- labels in that block.
    """
    diag = np.asarray(diag)[1:]
    ref_diag = np.asarray(ref_diag)[1:]
    best, best_dist = None, math.inf
    for perm in _PERMS:
        for flips in _EVEN_FLIPS:
            signs = 1 - 2 * np.array(flips)
            dist = float(np.sum((signs * diag[list(perm)] - ref_diag) ** 2))
            if dist < best_dist - 1e-15:
                best, best_dist = (perm, (0, 0, 0), flips), dist
    return _relabel(*best)


_IDENTITY = np.arange(len(WEIGHT_INDEX))


def _align(mode, sf, d, ref_sf, ref):
    if mode == "states":
        return align_by_states(d, ref)
    if mode == "diagonal":
        return align_by_diagonal(sf.diagonal, ref_sf.diagonal)
    return _IDENTITY


def _diagnostic_samples(Cs, target):
    rho = np.einsum("nkl,klij->nij", Cs, PAULI_PRODUCTS) / 4.0
    purity = np.einsum("nij,nji->n", rho, rho).real
    fidelity = np.einsum("i,nij,j->n", target.conj(), rho, target).real
    pt = rho.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)
    neg = np.linalg.eigvalsh(pt)[:, 0]
    return purity, fidelity, neg


def _draw(C, dC, seed, chunk, n):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
    Cs = C + rng.standard_normal((n, 4, 4)) * dC
    Cs[:, 0, 0] = 1.0
    return Cs


def _run_chunk(args):
    C, dC, seed, chunk, n, mode, ref_sf, ref, target = args
    Cs = _draw(C, dC, seed, chunk, n)
    weights = np.full((n, len(WEIGHT_INDEX)), np.nan)
    regularized = 0
    for i, Ci in enumerate(Cs):
        try:
            sf, d = decompose(Ci)
        except ReconstructionError:
            continue
        regularized += sf.regularized
        weights[i] = d.weights[_align(mode, sf, d, ref_sf, ref)]
    return weights, _diagnostic_samples(Cs, target), regularized


def propagate(C, dC, cfg=None, target=SINGLET):
    """Standard deviations of the EQP weights and diagnostics under Gaussian errors.

    Every sample draws each correlation independently from N(C_kl, dC_kl)
    (C_00 stays 1), runs the full standard-form + EQP pipeline and is relabeled
    onto the point estimate before statistics are taken. Samples are processed
    in fixed chunks with their own seed substreams, so results do not depend
    on the worker count.

    Raises:
        TooManyFailures: more than 1% of the samples could not be decomposed;
            the report is attached to the exception.
    """
    cfg = cfg or MonteCarloConfig()
    C = np.asarray(C, dtype=float)
    dC = np.asarray(dC, dtype=float)
    target = np.asarray(target, dtype=complex)
    ref_sf, ref = decompose(C)

    sizes = [CHUNK_SIZE] * (cfg.samples // CHUNK_SIZE)
    if cfg.samples % CHUNK_SIZE:
        sizes.append(cfg.samples % CHUNK_SIZE)
    jobs = [
        (C, dC, cfg.seed, k, n, cfg.align, ref_sf, ref, target) for k, n in enumerate(sizes)
    ]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    else:
        results = [_run_chunk(job) for job in jobs]

    weights = np.concatenate([r[0] for r in results])
    purity, fidelity, neg = (np.concatenate([r[1][j] for r in results]) for j in range(3))
    regularized = sum(r[2] for r in results)
    ok = ~np.isnan(weights[:, 0])
    failed = int((~ok).sum())
    good = weights[ok]
    if len(good) >= 2:
        w_std = good.std(axis=0, ddof=1)
        w_mean = good.mean(axis=0)
    else:
        w_std = np.full(len(WEIGHT_INDEX), np.nan)
        w_mean = w_std.copy()
    report = UncertaintyReport(
        weights=w_std,
        weight_mean=w_mean,
        purity=float(purity.std(ddof=1)),
        fidelity=float(fidelity.std(ddof=1)),
        pt_negativity=float(neg.std(ddof=1)),
        samples=cfg.samples,
        failed=failed,
        regularized=int(regularized),
    )
    log.info(
        "Monte Carlo: %d samples, %d failed, %d regularized", cfg.samples, failed, regularized
    )
    if failed > MAX_FAILURE_FRACTION * cfg.samples:
        raise TooManyFailures(
            report, f"{failed} of {cfg.samples} Monte Carlo samples failed"
        )
    return report
