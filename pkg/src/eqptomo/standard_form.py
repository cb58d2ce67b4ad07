"""Local filtering of a two-qubit correlation matrix to its standard form.

A correlation matrix C transforms under local operations ``A (x) B`` as
``C -> Lambda_A C Lambda_B^T``. Hermitian filters ``cosh(r/2) + sinh(r/2) w.sigma``
act as Lorentz boosts on the Pauli 4-vector and unitaries act as spatial
rotations. Boosts remove the local Bloch components; an SVD of the remaining
3x3 block (with the determinant fixed to +1) diagonalizes the rest::

    C_std = (R_A L_A) C (L_B^T R_B^T) / s,   C_std = diag(1, rho_x, rho_y, rho_z)

and ``rho = (T_A (x) T_B) rho_std (T_A (x) T_B)^dag`` with
``T_S = (U_S T'_S)^{-1}`` (and sqrt(s) absorbed into T_A).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateState, NoRealRoot, NotConverged, NoValidBoost
from .pauli import ETA, pauli_matrices

log = logging.getLogger(__name__)

_SIGMA = pauli_matrices()

#: boost pass stops once the local components fall below this (relative to C_00)
LOCAL_TOL = 1e-10
MAX_BOOST_PASSES = 100
#: condition number of (lambda I - gamma) above which the input is treated as degenerate
MAX_CONDITION = 1e12
#: white-noise admixtures tried in turn when boosting fails; sampled matrices of
#: nearly pure states can miss the physical set by ~1e-3, far beyond 1e-9
REGULARIZATION_LADDER = (1e-9, 1e-6, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1)


@dataclass(frozen=True)
class MinkowskiGram:
    """Symmetric matrix M = [[alpha, beta^T], [beta, gamma]]."""

    matrix: np.ndarray

    @property
    def alpha(self):
        return float(self.matrix[0, 0])

    @property
    def beta(self):
        return self.matrix[1:, 0]

    @property
    def gamma(self):
        return self.matrix[1:, 1:]


@dataclass(frozen=True)
class BoostSolution:
    lam: float
    v: np.ndarray
    rapidity: float
    direction: np.ndarray
    lorentz: np.ndarray
    filter: np.ndarray
    condition: float = 1.0


@dataclass
class StandardFormResult:
    diagonal: np.ndarray
    rotation_a: np.ndarray
    rotation_b: np.ndarray
    boost_a: np.ndarray
    boost_b: np.ndarray
    local_a: np.ndarray
    local_b: np.ndarray
    scale: float
    residual: float
    boost_residual: float
    boosted: np.ndarray
    passes: int
    effective: np.ndarray = None
    regularization: float = 0.0
    boosts: list = field(default_factory=list, repr=False)

    @property
    def regularized(self):
        return self.regularization > 0

    @property
    def q(self):
        """1 - |rho_x| - |rho_y| - |rho_z|; negative exactly for entangled states."""
        return float(self.diagonal[0] - np.abs(self.diagonal[1:]).sum())

    @property
    def standard_matrix(self):
        return np.diag(self.diagonal)


def minkowski_gram(C, side):
    """C eta C^T for Alice ('A'), C^T eta C for Bob ('B')."""
    C = np.asarray(C, dtype=float)
    side = str(side).upper()[:1]
    if side == "A":
        M = C @ ETA @ C.T
    elif side == "B":
        M = C.T @ ETA @ C
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return MinkowskiGram(0.5 * (M + M.T))


def _secular(alpha, poles, weights):
    def f(lam):
        s = alpha + lam
        for p, b2 in zip(poles, weights):
            s += b2 / (lam - p)
        return s

    def df(lam):
        s = 1.0
        for p, b2 in zip(poles, weights):
            d = lam - p
            s -= b2 / (d * d)
        return s

    return f, df


def _step_off(f, pole, toward, want_positive):
    """A point between ``pole`` and ``toward`` where f has the sign a pole limit gives."""
    delta = (toward - pole) * 1e-3
    for _ in range(12):
        x = pole + delta
        if x == pole:
            return None
        fx = f(x)
        if math.isfinite(fx) and (fx > 0) == want_positive:
            return x
        delta *= 1e-3
    return None


# Chebyshev-clustered sample points on [0, 1], dense near the poles
_GRID = 0.5 * (1.0 - np.cos(np.pi * np.linspace(0.0, 1.0, 65)))


def _brent(f, a, b):
    return brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)


def _secular_data(M):
    M = M if isinstance(M, MinkowskiGram) else MinkowskiGram(np.asarray(M, float))
    g, O = np.linalg.eigh(M.gamma)
    bt = O.T @ M.beta
    return M.alpha, g, O, bt


def _poles(g, bt):
    """Merge coincident eigenvalues of gamma and drop poles with no weight."""
    scale = max(1.0, float(np.max(np.abs(g))))
    b2 = bt * bt
    wscale = max(float(b2.sum()), 1e-300)
    poles, weights = [], []
    for gi, wi in zip(g, b2):
        if poles and abs(gi - poles[-1]) <= 1e-14 * scale:
            weights[-1] += wi
        else:
            poles.append(float(gi))
            weights.append(float(wi))
    keep = [(p, w) for p, w in zip(poles, weights) if w > 1e-28 * wscale and w > 0]
    return [p for p, _ in keep], [w for _, w in keep]


def solve_lambda(M):
    """All real roots of alpha + lam + beta^T (lam - gamma)^{-1} beta = 0.

    Works in the eigenbasis of gamma, where the left-hand side is the rational
    function ``alpha + lam + sum_i bt_i^2 / (lam - g_i)``. Roots are bracketed
    between consecutive poles and, on the outer sides, between the poles and
    ``-alpha`` (beyond which the sum term has a fixed sign and no root exists).
    The outer pieces are convex/concave, so their extremum decides whether
    they hold two roots or none.

    Raises:
        NoRealRoot: if bracketing finds no root.
    """
    alpha, g, _, bt = _secular_data(M)
    poles, weights = _poles(g, bt)
    f, df = _secular(alpha, poles, weights)
    if not poles:
        return [-alpha]

    roots = []
    bound = -alpha
    first, last = poles[0], poles[-1]

    def tangent(x, fx):
        # |f| at the rounding level of its own terms: a double root
        size = abs(alpha) + abs(x) + sum(w / abs(x - p) for p, w in zip(poles, weights))
        return abs(fx) <= 8 * np.finfo(float).eps * size

    # left of all poles: f < 0 at -alpha and at first^-, concave in between
    if bound < first:
        hi = _step_off(df, first, bound, want_positive=False)
        if hi is not None and df(bound) > 0:
            peak = _brent(df, bound, hi)
            fp = f(peak)
            if tangent(peak, fp):
                roots.append(peak)
            elif fp > 0:
                roots.append(_brent(f, bound, peak))
                right = _step_off(f, first, peak, want_positive=False)
                if right is not None:
                    roots.append(_brent(f, peak, right))

    # between poles: f runs from +inf to -inf, one or three roots
    for p, q in zip(poles[:-1], poles[1:]):
        a = _step_off(f, p, q, want_positive=True)
        b = _step_off(f, q, p, want_positive=False)
        if a is None or b is None:
            continue
        grid = a + (b - a) * _GRID
        vals = alpha + grid + (np.asarray(weights)[:, None] / (grid - np.asarray(poles)[:, None])).sum(0)
        for x0, x1, f0, f1 in zip(grid[:-1].tolist(), grid[1:].tolist(), vals[:-1].tolist(), vals[1:].tolist()):
            if f0 == 0.0:
                roots.append(float(x0))
            elif f0 * f1 < 0:
                roots.append(_brent(f, x0, x1))

    # right of all poles: f > 0 at -alpha and at last^+, convex in between
    if bound > last:
        lo = _step_off(df, last, bound, want_positive=False)
        if lo is not None and df(bound) > 0:
            trough = _brent(df, lo, bound)
            ft = f(trough)
            if tangent(trough, ft):
                roots.append(trough)
            elif ft < 0:
                left = _step_off(f, last, trough, want_positive=True)
                if left is not None:
                    roots.append(_brent(f, left, trough))
                roots.append(_brent(f, trough, bound))

    if not roots:
        raise NoRealRoot("secular equation has no real root")
    return sorted(roots)


def _lorentz(v):
    """Boost matrix with velocity v (|v| < 1) and its 2x2 Hermitian filter."""
    speed = float(np.linalg.norm(v))
    if speed == 0.0:
        return np.eye(4), np.eye(2, dtype=complex), 0.0, np.array([0.0, 0.0, 1.0])
    w = v / speed
    r = math.atanh(speed)
    ch, sh = math.cosh(r), math.sinh(r)
    L = np.empty((4, 4))
    L[0, 0] = ch
    L[0, 1:] = sh * w
    L[1:, 0] = sh * w
    L[1:, 1:] = np.eye(3) + (ch - 1.0) * np.outer(w, w)
    T = math.cosh(r / 2) * _SIGMA[0] + math.sinh(r / 2) * np.einsum("i,iab->ab", w, _SIGMA[1:])
    return L, T, r, w


def boost_from_gram(M, max_condition=None):
    """Boost whose Lorentz matrix L makes L M L^T block diagonal.

    Among the secular roots whose velocity ``v = (lam - gamma)^{-1} beta`` is
    subluminal, the one with the smallest rapidity wins (ties: larger lam).

    Raises:
        NoValidBoost: if no root gives |v| < 1, or the selected root's
            ``lam - gamma`` is worse conditioned than ``max_condition``.
    """
    M = M if isinstance(M, MinkowskiGram) else MinkowskiGram(np.asarray(M, float))
    if not np.any(M.beta):
        L, T, r, w = _lorentz(np.zeros(3))
        return BoostSolution(float("nan"), np.zeros(3), 0.0, w, L, T)

    alpha, g, O, bt = _secular_data(M)
    best = None
    for lam in solve_lambda(M):
        d = lam - g
        with np.errstate(divide="ignore", invalid="ignore"):
            v = O @ np.where(bt == 0.0, 0.0, bt / d)
        speed = float(np.linalg.norm(v))
        if not speed < 1.0:
            continue
        if best is not None:
            if speed > best[0] + 1e-12 or (speed >= best[0] - 1e-12 and lam <= best[1]):
                continue
        ad = np.abs(d)
        cond = float(ad.max() / ad.min()) if ad.min() > 0 else math.inf
        best = (speed, lam, v, cond)
    if best is None:
        raise NoValidBoost("no secular root yields a subluminal boost")
    _, lam, v, cond = best
    if max_condition is not None and cond > max_condition:
        raise NoValidBoost(f"boost is ill-conditioned (condition {cond:.3g})")
    L, T, r, w = _lorentz(v)
    return BoostSolution(float(lam), v, r, w, L, T, cond)


def rotations_from_spatial(C_boosted):
    """Proper rotations (det +1) diagonalizing the 3x3 spatial block.

    Returns ``(R_A, R_B)`` with ``R_A K R_B^T`` diagonal, entries ordered by
    descending magnitude; a reflection in the SVD flips the sign of all three.
    """
    C_boosted = np.asarray(C_boosted, dtype=float)
    K = C_boosted[1:, 1:] if C_boosted.shape == (4, 4) else C_boosted
    U, _, Vt = np.linalg.svd(K)
    R_A = U.T / np.linalg.det(U)
    R_B = Vt / np.linalg.det(Vt)
    return R_A, R_B


def _quaternion(R):
    """Unit quaternion (x, y, z, w) of a proper rotation matrix (Shepperd's method)."""
    tr = R[0, 0] + R[1, 1] + R[2, 2]
    k = int(np.argmax([tr, R[0, 0], R[1, 1], R[2, 2]]))
    if k == 0:
        w = 0.5 * math.sqrt(max(1.0 + tr, 0.0))
        f = 0.25 / w
        q = ((R[2, 1] - R[1, 2]) * f, (R[0, 2] - R[2, 0]) * f, (R[1, 0] - R[0, 1]) * f, w)
    else:
        i = k - 1
        j, m = (i + 1) % 3, (i + 2) % 3
        d = 0.5 * math.sqrt(max(1.0 + R[i, i] - R[j, j] - R[m, m], 0.0))
        f = 0.25 / d
        vec = [0.0, 0.0, 0.0]
        vec[i] = d
        vec[j] = (R[j, i] + R[i, j]) * f
        vec[m] = (R[m, i] + R[i, m]) * f
        q = (vec[0], vec[1], vec[2], (R[m, j] - R[j, m]) * f)
    q = np.asarray(q)
    return q / np.linalg.norm(q)


def unitary_from_rotation(R):
    """SU(2) element U with U (m.sigma) U^dag = (R m).sigma."""
    x, y, z, w = _quaternion(R)
    return w * _SIGMA[0] - 1j * (x * _SIGMA[1] + y * _SIGMA[2] + z * _SIGMA[3])


def _local_components(C):
    return max(np.abs(C[0, 1:]).max(), np.abs(C[1:, 0]).max()) / abs(C[0, 0])


def _embed(R):
    out = np.eye(4)
    out[1:, 1:] = R
    return out


def _standard_form(C, tol, max_passes):
    cur = np.array(C, dtype=float)
    L_A = np.eye(4)
    L_B = np.eye(4)
    F_A = np.eye(2, dtype=complex)
    F_B = np.eye(2, dtype=complex)
    scale = 1.0
    boosts = []
    passes = 0
    while _local_components(cur) >= tol:
        if passes == max_passes:
            raise NotConverged(
                f"local components still {_local_components(cur):.3g} after {passes} boost passes"
            )
        bA = boost_from_gram(minkowski_gram(cur, "A"), MAX_CONDITION)
        bB = boost_from_gram(minkowski_gram(cur, "B"), MAX_CONDITION)
        if bA.rapidity == 0.0 and bB.rapidity == 0.0:
            # null Minkowski grams: local components no boost can remove
            raise DegenerateState("boosts are trivial but local components remain")
        cur = bA.lorentz @ cur @ bB.lorentz.T
        c00 = cur[0, 0]
        if not c00 > 0 or not np.all(np.isfinite(cur)):
            raise DegenerateState("boosted correlation matrix lost its normalization")
        cur /= c00
        scale *= c00
        L_A = bA.lorentz @ L_A
        L_B = bB.lorentz @ L_B
        F_A = bA.filter @ F_A
        F_B = bB.filter @ F_B
        boosts.append((bA, bB))
        passes += 1

    log.debug("local components removed after %d boost pass(es)", passes)
    boosted = cur
    R_A, R_B = rotations_from_spatial(boosted)
    std = _embed(R_A) @ boosted @ _embed(R_B).T
    off = std - np.diag(np.diag(std))
    U_A = unitary_from_rotation(R_A)
    U_B = unitary_from_rotation(R_B)
    T_A = np.linalg.inv(U_A @ F_A) * math.sqrt(scale)
    T_B = np.linalg.inv(U_B @ F_B)
    return StandardFormResult(
        diagonal=np.diag(std).copy(),
        rotation_a=R_A,
        rotation_b=R_B,
        boost_a=L_A,
        boost_b=L_B,
        local_a=T_A,
        local_b=T_B,
        scale=scale,
        residual=float(np.abs(off).max()),
        boost_residual=float(_local_components(boosted)),
        boosted=boosted,
        passes=passes,
        effective=np.array(C, dtype=float),
        boosts=boosts,
    )


def to_standard_form(C, tol=LOCAL_TOL, max_passes=MAX_BOOST_PASSES, regularization=REGULARIZATION_LADDER):
    """Standard form of a correlation matrix plus the local operators reaching it.

    Boost passes (Alice from C eta C^T, Bob from C^T eta C, applied jointly)
    repeat until the local components drop below ``tol``. If boosting fails
    or is ill-conditioned, the input is mixed with white noise,
    ``C -> (1 - eps) C + eps diag(1, 0, 0, 0)``, for each ``eps`` of
    ``regularization`` in turn until it succeeds; the result records the
    ``eps`` used. Pass ``regularization=()`` to disable.

    Raises:
        DegenerateState: boosting fails for every admixture tried.
        NotConverged: boosts do not converge within ``max_passes``.
    """
    C = np.asarray(C, dtype=float)
    if C.shape != (4, 4):
        raise ValueError(f"correlation matrix must be 4x4, got {C.shape}")
    if not np.all(np.isfinite(C)):
        raise DegenerateState("correlation matrix has non-finite entries")
    if abs(C[0, 0] - 1.0) > 1e-12:
        raise ValueError(f"C[0, 0] must be 1, got {C[0, 0]!r}")
    try:
        return _standard_form(C, tol, max_passes)
    except (NoRealRoot, NoValidBoost, DegenerateState) as exc:
        failure = exc
    for eps in regularization:
        mixed = (1.0 - eps) * C
        mixed[0, 0] = 1.0
        try:
            result = _standard_form(mixed, tol, max_passes)
        except (NoRealRoot, NoValidBoost, DegenerateState) as exc:
            failure = exc
            continue
        result.regularization = float(eps)
        return result
    raise DegenerateState(f"no valid standard form: {failure}") from failure
