"""Smallest generalized singular values of a matrix pair.

The stabilized method of particular solutions measures closeness to an
eigenvalue by

    s_lambda = inf_{v != 0} ||Q_lambda v|| / ||R_lambda v||,

the smallest generalized singular value of the pair (Q, R).  The pair can
be numerically rank-deficient in floating point, so the quotient is
restricted to the subspace where R is reliably nonsingular: factor
R = U S V^T, drop directions with singular value below tau * max(S),
and take an ordinary SVD of Q mapped onto the retained subspace.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import svd

__all__ = [
    "SingularCurve",
    "smallest_generalized_singulars",
    "scan",
    "refine_minimum",
    "multiplicity_estimate",
]

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class SingularCurve:
    """Samples (lambda, m smallest singular values) along a scan."""

    lambdas: np.ndarray
    sigmas: np.ndarray  # shape (n_samples, m), ascending within each row

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        self.sigmas = np.atleast_2d(np.asarray(self.sigmas, dtype=float))
        if np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("scan grid must be strictly increasing")
        if np.any(self.sigmas < 0):
            raise ValueError("singular values must be nonnegative")

    def local_minima(self):
        """Indices of strict local minima of sigma_1 (interior points)."""
        s = self.sigmas[:, 0]
        idx = np.nonzero((s[1:-1] < s[:-2]) & (s[1:-1] < s[2:]))[0] + 1
        return idx


def smallest_generalized_singulars(Q, R, m=6, tau=1e-12):
    """Return (sigma, V): the m smallest values of ||Qv||/||Rv|| and vectors.

    Q, R share the column count; tau in (0,1) is the relative truncation
    threshold for the column space of R.  The returned vectors satisfy
    ||R v_i|| = 1 and ||Q v_i|| = sigma_i.
    """
    Q = np.asarray(Q, dtype=float)
    R = np.asarray(R, dtype=float)
    if Q.shape[1] != R.shape[1]:
        raise ValueError(f"column mismatch: Q has {Q.shape[1]}, R has {R.shape[1]}")
    if not (0 < tau < 1):
        raise ValueError(f"tau must be in (0,1), got {tau}")
    _, s_r, vt_r = svd(R, full_matrices=False)
    if s_r.size == 0 or s_r[0] <= 0:
        raise np.linalg.LinAlgError("R is numerically zero")
    keep = s_r >= tau * s_r[0]
    if not np.any(keep):
        raise np.linalg.LinAlgError("R is numerically zero after truncation")
    # map coefficients onto the R-orthonormal subspace: v = Vk S^-1 w
    back = vt_r[keep].T / s_r[keep]
    W = Q @ back
    _, s_w, vt_w = svd(W, full_matrices=False)
    m_eff = min(m, s_w.size)
    order = np.argsort(s_w)[:m_eff]
    sigma = s_w[order]
    vectors = back @ vt_w[order].T
    return sigma, vectors


class _ScanTask:
    """Picklable per-lambda work unit (multiprocessing maps need a
    module-level callable; `builder` must itself be picklable, e.g. a
    bound method of a picklable object)."""

    def __init__(self, builder, m, tau):
        self.builder = builder
        self.m = m
        self.tau = tau

    def __call__(self, lam):
        Q, R = self.builder(lam)
        sigma, _ = smallest_generalized_singulars(Q, R, m=self.m, tau=self.tau)
        return sigma


def scan(lam_lo, lam_hi, step, builder, m=6, tau=1e-12, pool_map=None):
    """Evaluate the m smallest singular values on a lambda grid.

    builder(lam) -> (Q, R).  pool_map, if given, is a map() substitute
    (e.g. multiprocessing Pool.map); results are assembled in grid order
    regardless of evaluation order, so the output is deterministic.
    """
    if not lam_lo < lam_hi:
        raise ValueError("need lam_lo < lam_hi")
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(np.floor((lam_hi - lam_lo) / step + 1e-9)) + 1
    grid = lam_lo + step * np.arange(n)
    one = _ScanTask(builder, m, tau)
    mapper = pool_map if pool_map is not None else map
    rows = list(mapper(one, grid))
    m_min = min(len(r) for r in rows)
    sig = np.vstack([r[:m_min] for r in rows])
    return SingularCurve(grid, sig)


def refine_minimum(bracket, builder, tol_lam=1e-9, m=6, tau=1e-12):
    """Golden-section refinement of a bracketed minimum of sigma_1.

    bracket = (lam_a, lam_b, lam_c) with sigma(lam_b) below both ends.
    Never evaluates outside [lam_a, lam_c]; on exact ties keeps the left
    sub-bracket for determinism.  Returns (lam_star, sigmas_at_min).
    """
    lam_a, lam_b, lam_c = bracket
    if not (lam_a < lam_b < lam_c):
        raise ValueError(f"invalid bracket {bracket}")

    cache = {}

    def sig(lam):
        if lam not in cache:
            Q, R = builder(lam)
            cache[lam], _ = smallest_generalized_singulars(Q, R, m=m, tau=tau)
        return cache[lam]

    if not (sig(lam_b)[0] < sig(lam_a)[0] and sig(lam_b)[0] < sig(lam_c)[0]):
        raise ValueError("bracket does not enclose a minimum of sigma_1")

    a, c = lam_a, lam_c
    x1 = c - _GOLDEN * (c - a)
    x2 = a + _GOLDEN * (c - a)
    f1, f2 = sig(x1)[0], sig(x2)[0]
    while c - a > tol_lam:
        if f1 <= f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - _GOLDEN * (c - a)
            f1 = sig(x1)[0]
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (c - a)
            f2 = sig(x2)[0]
    lam_star = x1 if f1 <= f2 else x2
    return lam_star, sig(lam_star)


def multiplicity_estimate(sigmas, threshold):
    """Count singular values below threshold (eigenvalue multiplicity)."""
    sigmas = np.asarray(sigmas, dtype=float)
    if np.any(np.diff(sigmas) < 0):
        raise ValueError("sigma list must be ascending")
    return int(np.count_nonzero(sigmas < threshold))
