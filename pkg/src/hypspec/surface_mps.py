"""Collocation matrices and eigenvalue search on a surface decomposition.

For a spectral parameter lambda, each piece carries the mode basis
Phi_k(rho) * {cos, sin}(2 pi k t / ell), k = 0..N, with even and odd
radial factors: 2 (2N+1) real functions per piece.  At every interface
sample y_q with partner y~_q the matrices

    A  = values at y_q        A~ = values at y~_q
    B  = outward normal derivatives at y_q
    B~ = outward normal derivatives at y~_q

are stacked into Q = (A - A~) (+) (B + B~)  (the jump defects) and
R = A (+) A~ (+) B (+) B~ (the size proxy); the smallest generalized
singular value of (Q, R) dips at eigenvalues of the surface Laplacian.

Row weighting: every row carries sqrt(arclength weight); derivative rows
carry an extra 1 / sqrt(1 + lambda) to balance the two defect types.
Columns of (Q, R) are jointly normalized by the R column norms, which
leaves the singular values unchanged but keeps the wildly different mode
magnitudes from poisoning the floating-point SVD.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import gsvd
from .cylinder import solve_radial_family
from .geometry.surface import collocate

__all__ = [
    "BasisSpec",
    "EigenvalueRecord",
    "SystemBuilder",
    "default_density",
    "build_system",
    "sigma",
    "find_eigenvalues",
    "inclusion_interval",
    "jump_defect",
    "write_eigenvalue_csv",
    "read_eigenvalue_csv",
]


@dataclass(frozen=True)
class BasisSpec:
    """Max Fourier index per piece; dimension 2 (2N+1) per piece."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")

    def columns_per_piece(self):
        return 2 * (2 * self.n_max + 1)

    def total_columns(self, n_pieces):
        return self.columns_per_piece() * n_pieces


@dataclass
class EigenvalueRecord:
    lam: float
    multiplicity: int
    sigma_min: float
    basis_n: int
    density: float
    half_width: float = float("nan")  # NON-RIGOROUS unless eps/eta certified
    eps: float = float("nan")
    eta: float = float("nan")


def inclusion_interval(lam, eps, eta):
    """Eigenvalue inclusion interval [lam - h, lam + h] with
    h = ((1 + lam) eps + eta) / (1 - eps); requires eps < 1."""
    if not 0 <= eps < 1:
        raise ValueError(f"inclusion interval needs eps in [0, 1), got {eps}")
    if eta < 0:
        raise ValueError("eta must be >= 0")
    h = ((1.0 + lam) * eps + eta) / (1.0 - eps)
    return lam - h, lam + h


class SystemBuilder:
    """Precomputed collocation bookkeeping; build (Q, R) per lambda."""

    def __init__(self, dec, basis, coll, radial_rtol=1e-13):
        self.dec = dec
        self.basis = basis
        self.coll = coll
        self.radial_rtol = radial_rtol
        self.n_pieces = len(dec.pieces)
        self.cols_per_piece = basis.columns_per_piece()
        self.n_cols = self.cols_per_piece * self.n_pieces
        self.n_rows = len(coll)
        # per piece and side: row indices and sample data
        self._sides = []
        for p in range(self.n_pieces):
            for side in ("plus", "minus"):
                if side == "plus":
                    mask = coll.piece_plus == p
                    rho, t = coll.rho_plus[mask], coll.t_plus[mask]
                    nr, nt = coll.nrho_plus[mask], coll.nt_plus[mask]
                else:
                    mask = coll.piece_minus == p
                    rho, t = coll.rho_minus[mask], coll.t_minus[mask]
                    nr, nt = coll.nrho_minus[mask], coll.nt_minus[mask]
                rows = np.nonzero(mask)[0]
                if len(rows):
                    self._sides.append((p, side, rows, rho, t, nr, nt))
        self.sqrt_w = np.sqrt(coll.weight)
        # pieces sharing a core length share one radial family; solve it
        # out to the largest rho any of them needs
        self._rho_max_by_ell = {}
        for p in dec.pieces:
            key = round(p.core_length, 14)
            self._rho_max_by_ell[key] = max(
                self._rho_max_by_ell.get(key, 0.0), p.rho_max
            )

    def _piece_block(self, piece, lam, rho, t, nr, nt):
        """(values, normal derivatives) of all basis columns of `piece`
        at the given chart samples: arrays (n_samples, cols_per_piece)."""
        N = self.basis.n_max
        ell = piece.core_length
        rho_max = piece.rho_max
        fam_e = self._family(ell, "even", lam, rho_max)
        fam_o = self._family(ell, "odd", lam, rho_max)
        ks = np.arange(N + 1)
        omega = 2.0 * np.pi * ks / ell  # (N+1,)
        phase = omega[:, None] * t[None, :]  # (N+1, nq)
        cos_p, sin_p = np.cos(phase), np.sin(phase)
        vals = np.empty((len(rho), self.cols_per_piece))
        ders = np.empty_like(vals)
        col = 0
        for fam in (fam_e, fam_o):
            phi, dphi = fam.eval(rho)  # (N+1, nq)
            d_t_cos = -omega[:, None] * sin_p
            d_t_sin = omega[:, None] * cos_p
            for k in range(N + 1):
                vals[:, col] = phi[k] * cos_p[k]
                ders[:, col] = nr * (dphi[k] * cos_p[k]) + nt * (phi[k] * d_t_cos[k])
                col += 1
                if k > 0:
                    vals[:, col] = phi[k] * sin_p[k]
                    ders[:, col] = nr * (dphi[k] * sin_p[k]) + nt * (
                        phi[k] * d_t_sin[k]
                    )
                    col += 1
        return vals, ders

    def _family(self, ell, parity, lam, rho_max):
        ell_key = round(ell, 14)
        key = (ell_key, parity)
        cache = self._fam_cache if getattr(self, "_fam_lam", None) == lam else {}
        if key not in cache:
            cache[key] = solve_radial_family(
                ell,
                self.basis.n_max,
                parity,
                lam,
                self._rho_max_by_ell[ell_key],
                rtol=self.radial_rtol,
            )
        self._fam_cache, self._fam_lam = cache, lam
        return cache[key]

    def matrices(self, lam):
        """Raw (A, A~, B, B~) without row/column scaling."""
        shape = (self.n_rows, self.n_cols)
        A = np.zeros(shape)
        At = np.zeros(shape)
        B = np.zeros(shape)
        Bt = np.zeros(shape)
        for (p, side, rows, rho, t, nr, nt) in self._sides:
            vals, ders = self._piece_block(self.dec.pieces[p], lam, rho, t, nr, nt)
            c0 = p * self.cols_per_piece
            sl = slice(c0, c0 + self.cols_per_piece)
            if side == "plus":
                A[rows, sl] = vals
                B[rows, sl] = ders
            else:
                At[rows, sl] = vals
                Bt[rows, sl] = ders
        return A, At, B, Bt

    def weighted(self, lam):
        """Row-weighted jump and size matrices plus the column scaling.

        Returns (Q, R, col_norm): coefficient vectors for the normalized
        pair Q/col_norm, R/col_norm refer to basis functions divided by
        col_norm (divide by col_norm to get raw-basis coefficients)."""
        A, At, B, Bt = self.matrices(lam)
        sw = self.sqrt_w[:, None]
        dw = sw / math.sqrt(1.0 + abs(lam))
        Q = np.vstack([(A - At) * sw, (B + Bt) * dw])
        R = np.vstack([A * sw, At * sw, B * dw, Bt * dw])
        col_norm = np.linalg.norm(R, axis=0)
        col_norm[col_norm == 0] = 1.0
        return Q, R, col_norm

    def build(self, lam):
        """Weighted, column-normalized (Q, R) for one lambda."""
        Q, R, col_norm = self.weighted(lam)
        return Q / col_norm, R / col_norm


def default_density(dec, basis, lam_hi, oversample=1.5, wavelength_pts=4.0):
    """Collocation density: `wavelength_pts` points per boundary wavelength
    at the top of the search range, and at least `oversample` times the
    column count in interface samples."""
    n_cols = basis.total_columns(len(dec.pieces))
    length = dec.interface_length()
    nyquist = wavelength_pts * math.sqrt(max(lam_hi, 1.0)) / (2.0 * math.pi)
    return max(nyquist, oversample * n_cols / (2.0 * length))


def build_system(dec, basis, coll, lam):
    """One-shot (Q, R) assembly (see SystemBuilder for repeated use)."""
    return SystemBuilder(dec, basis, coll).build(lam)


def sigma(dec, basis, coll, lam, m=6, tau=1e-12, builder=None):
    """The m smallest generalized singular values at lambda."""
    b = builder if builder is not None else SystemBuilder(dec, basis, coll)
    Q, R = b.build(lam)
    sig, _ = gsvd.smallest_generalized_singulars(Q, R, m=m, tau=tau)
    return sig


@dataclass
class SearchConfig:
    m: int = 8
    tau: float = 1e-12
    tol_lam: float = 1e-9
    dip_rel: float = 0.35  # local minimum qualifies if below dip_rel * background
    accept_rel: float = 0.05  # refined minimum accepted if below accept_rel * bg
    mult_floor: float = 1e-12
    mult_rel: float = 0.005  # cluster members within mult_rel * bg count too
    density: float = 0.0  # 0 -> default_density
    oversample: float = 1.5
    wavelength_pts: float = 4.0


def find_eigenvalues(dec, basis, lam_lo, lam_hi, step, config=None, pool_map=None):
    """Scan sigma_1(lambda), refine dips, estimate multiplicities.

    Returns (records, curve).  lambda = 0 (constant eigenfunction,
    multiplicity 1) is reported whenever the range contains 0.
    """
    cfg = config or SearchConfig()
    density = cfg.density or default_density(
        dec, basis, lam_hi, cfg.oversample, cfg.wavelength_pts
    )
    coll = collocate(dec, density)
    builder = SystemBuilder(dec, basis, coll)
    build = builder.build  # bound method: picklable for process pools

    lo = max(lam_lo, 0.25 * step)  # the lambda = 0 dip is handled separately
    curve = gsvd.scan(lo, lam_hi, step, build, m=cfg.m, tau=cfg.tau,
                      pool_map=pool_map)
    bg = float(np.median(curve.sigmas[:, 0]))
    records = []
    if lam_lo <= 0.0 <= lam_hi:
        sig0 = sigma(dec, basis, coll, 0.0, m=cfg.m, tau=cfg.tau, builder=builder)
        records.append(
            EigenvalueRecord(
                lam=0.0,
                multiplicity=_auto_multiplicity(sig0, bg, cfg.mult_floor, cfg.mult_rel),
                sigma_min=float(sig0[0]),
                basis_n=basis.n_max,
                density=density,
            )
        )
    for i in curve.local_minima():
        if curve.sigmas[i, 0] > cfg.dip_rel * bg:
            continue
        bracket = (curve.lambdas[i - 1], curve.lambdas[i], curve.lambdas[i + 1])
        lam_star, sig_star = gsvd.refine_minimum(
            bracket, build, tol_lam=cfg.tol_lam, m=cfg.m, tau=cfg.tau
        )
        if sig_star[0] > cfg.accept_rel * bg:
            continue
        records.append(
            EigenvalueRecord(
                lam=float(lam_star),
                multiplicity=_auto_multiplicity(sig_star, bg, cfg.mult_floor, cfg.mult_rel),
                sigma_min=float(sig_star[0]),
                basis_n=basis.n_max,
                density=density,
            )
        )
    records.sort(key=lambda r: r.lam)
    return records, curve


def _auto_multiplicity(sigmas, background, floor, rel=0.005):
    """Count singular values dipped at lambda*.

    The threshold is the geometric mean of the dip depth and the scan
    background, but never below rel * background: members of a nearly
    degenerate cluster sit at |lambda_a - lambda_b| * slope above the
    deepest one, and the relative floor keeps them counted (a cluster
    tighter than ~rel * background / slope is reported as one eigenvalue
    with the summed multiplicity).
    """
    theta = math.sqrt(max(sigmas[0], floor) * max(background, 1e-300))
    theta = max(theta, rel * background)
    theta = min(max(theta, floor), 0.5 * background)
    return max(1, gsvd.multiplicity_estimate(sigmas, theta))


def jump_defect(dec, basis, coll, v, lam, builder=None,
                normalized_columns=True):
    """Discrete interface defect of the trial function with coefficients v.

    v is interpreted in the column-normalized convention of
    SystemBuilder.build (what the gsvd vectors refer to) unless
    normalized_columns=False.  It is rescaled so the weighted R rows (the
    interior-norm proxy) have unit norm; returns (eps_discrete, eta)
    where eps_discrete is the weighted L2(Sigma) norm of (D phi, D_n phi)
    at the collocation points and eta is the radial-solve tolerance times
    the coefficient norm (the PDE residual of the modes, reported rather
    than estimated sharply).
    """
    b = builder if builder is not None else SystemBuilder(dec, basis, coll)
    A, At, B, Bt = b.matrices(lam)
    sw = np.sqrt(coll.weight)[:, None]
    dw = sw / math.sqrt(1.0 + abs(lam))
    R = np.vstack([A * sw, At * sw, B * dw, Bt * dw])
    v = np.asarray(v, dtype=float)
    if normalized_columns:
        col_norm = np.linalg.norm(R, axis=0)
        col_norm[col_norm == 0] = 1.0
        v = v / col_norm
    scale = np.linalg.norm(R @ v)
    if scale == 0:
        raise ValueError("trial function vanishes on the interface proxy")
    v = v / scale
    jump_vals = (A - At) @ v
    jump_ders = (B + Bt) @ v
    w = coll.weight
    eps = math.sqrt(float(w @ (jump_vals**2) + w @ (jump_ders**2)))
    eta = b.radial_rtol * float(np.linalg.norm(v))
    return eps, eta


def write_eigenvalue_csv(path, records):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "multiplicity", "sigma_min", "half_width",
                         "basis_N"])
        for r in sorted(records, key=lambda r: r.lam):
            writer.writerow(
                [f"{r.lam:.15g}", r.multiplicity, f"{r.sigma_min:.6g}",
                 f"{r.half_width:.6g}", r.basis_n]
            )


def read_eigenvalue_csv(path):
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(
                EigenvalueRecord(
                    lam=float(row["lambda"]),
                    multiplicity=int(row["multiplicity"]),
                    sigma_min=float(row["sigma_min"]),
                    half_width=float(row["half_width"]),
                    basis_n=int(row["basis_N"]),
                    density=float("nan"),
                )
            )
    records.sort(key=lambda r: r.lam)
    return records
