"""Stabilized method of particular solutions for planar Dirichlet domains.

Trial functions are plane waves cos(k.x), sin(k.x) with |k| = sqrt(lambda),
so -Laplace u = lambda u holds exactly; the quotient

    ||u at boundary points|| / ||u at interior points||

is minimized over their span via the generalized-singular-value machinery.
A dip of the smallest quotient in lambda locates an eigenvalue, and the
classical a-posteriori bound

    |lambda - lambda_j| / lambda <= (sqrt(2) eps + eps^2) / (1 - eps^2),
    eps = sqrt(|Omega|) * sup_boundary |u| / ||u||_L2

turns a computed trial function into an eigenvalue inclusion.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from . import gsvd

__all__ = [
    "PlanarDomain",
    "ellipse_domain",
    "disk_domain",
    "plane_wave_basis",
    "planar_sigma",
    "planar_find_eigenvalues",
    "fhm_bound",
    "boundary_sup_estimate",
    "PlanarRecord",
]


class PlanarDomain:
    """Piecewise-smooth closed boundary curve + area + membership test.

    curve: theta in [0, 2 pi) -> (x, y); must close.  Boundary points are
    placed uniformly in arclength through a spline of the cumulative
    arclength.
    """

    def __init__(self, name, curve, area, inside, bbox):
        self.name = name
        self.curve = curve
        self.area = float(area)
        self.inside = inside
        self.bbox = bbox  # (xmin, xmax, ymin, ymax)
        thetas = np.linspace(0.0, 2.0 * np.pi, 4097)
        pts = np.array([curve(t) for t in thetas])
        if np.hypot(*(pts[0] - pts[-1])) > 1e-12:
            raise ValueError("boundary curve does not close")
        seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
        s_cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.perimeter = s_cum[-1]
        self._theta_of_s = CubicSpline(s_cum, thetas)

    def boundary_points(self, m):
        """m points uniform in arclength (midpoint offsets, no corners)."""
        s = (np.arange(m) + 0.5) * self.perimeter / m
        th = self._theta_of_s(s)
        return np.array([self.curve(t) for t in th])

    def interior_points(self, q, seed):
        """q pseudo-random interior points (fixed-seed rejection sampling)."""
        rng = np.random.default_rng(seed)
        xmin, xmax, ymin, ymax = self.bbox
        out = np.empty((q, 2))
        got = 0
        while got < q:
            cand = rng.uniform((xmin, ymin), (xmax, ymax), size=(4 * q, 2))
            keep = np.array([self.inside(x, y) for x, y in cand])
            take = cand[keep][: q - got]
            out[got : got + len(take)] = take
            got += len(take)
        return out


def ellipse_domain(a=2.0, b=1.0):
    return PlanarDomain(
        name=f"ellipse({a},{b})",
        curve=lambda t: (a * math.cos(t), b * math.sin(t)),
        area=math.pi * a * b,
        inside=lambda x, y: (x / a) ** 2 + (y / b) ** 2 < 1.0,
        bbox=(-a, a, -b, b),
    )


def disk_domain(radius=1.0):
    r = radius
    return PlanarDomain(
        name=f"disk({r})",
        curve=lambda t: (r * math.cos(t), r * math.sin(t)),
        area=math.pi * r * r,
        inside=lambda x, y: x * x + y * y < r * r,
        bbox=(-r, r, -r, r),
    )


def plane_wave_basis(lam, n_dir):
    """Directions theta_j uniform on [0, pi); wave vectors of length
    sqrt(lambda).  Returns the (2 n_dir, 2) array of wave vectors paired
    as (cos, sin) columns by `evaluate_basis`."""
    if lam <= 0:
        raise ValueError("plane-wave basis needs lambda > 0")
    theta = np.pi * np.arange(n_dir) / n_dir
    k = math.sqrt(lam) * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return k


def evaluate_basis(kvecs, pts):
    """Columns [cos(k_1.x), sin(k_1.x), cos(k_2.x), ...] at pts (n, 2)."""
    phase = pts @ kvecs.T  # (n_pts, n_dir)
    out = np.empty((pts.shape[0], 2 * kvecs.shape[0]))
    out[:, 0::2] = np.cos(phase)
    out[:, 1::2] = np.sin(phase)
    return out


def planar_matrices(domain, lam, n_dir, m_boundary, q_interior, seed):
    kvecs = plane_wave_basis(lam, n_dir)
    A = evaluate_basis(kvecs, domain.boundary_points(m_boundary))
    B = evaluate_basis(kvecs, domain.interior_points(q_interior, seed))
    return A, B


def planar_sigma(domain, lam, n_dir, m_boundary, q_interior, seed=0, m=4,
                 tau=1e-12):
    A, B = planar_matrices(domain, lam, n_dir, m_boundary, q_interior, seed)
    sig, _ = gsvd.smallest_generalized_singulars(A, B, m=m, tau=tau)
    return sig


def fhm_bound(lam, eps):
    """Relative inclusion half-width (sqrt(2) eps + eps^2) / (1 - eps^2).

    Vacuous (no information) when the returned value is >= 1.
    """
    if not 0 <= eps < 1:
        raise ValueError(f"bound requires eps in [0, 1), got {eps}")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return (math.sqrt(2.0) * eps + eps * eps) / (1.0 - eps * eps)


def boundary_sup_estimate(coeffs, domain, lam, n_dir, dense_factor=10,
                          m_boundary=200, q_mc=4000, seed=7):
    """NON-RIGOROUS estimate of eps = sqrt(|Omega|) sup_bdry |u| / ||u||_L2.

    The L2 norm comes from Monte-Carlo quadrature over interior samples
    (reported with its statistical error); the sup from a dense_factor
    denser boundary sampling plus a first-order Lipschitz margin with
    gradient scale sqrt(lambda).
    """
    kvecs = plane_wave_basis(lam, n_dir)
    coeffs = np.asarray(coeffs, dtype=float)
    mc_pts = domain.interior_points(q_mc, seed)
    u_mc = evaluate_basis(kvecs, mc_pts) @ coeffs
    mean_sq = float(np.mean(u_mc**2))
    l2 = math.sqrt(domain.area * mean_sq)
    mc_err = math.sqrt(domain.area) * float(np.std(u_mc**2)) / math.sqrt(q_mc) / (
        2.0 * max(math.sqrt(mean_sq), 1e-300)
    )
    n_dense = dense_factor * m_boundary
    u_b = evaluate_basis(kvecs, domain.boundary_points(n_dense)) @ coeffs
    sup = float(np.max(np.abs(u_b)))
    spacing = domain.perimeter / n_dense
    grad_scale = math.sqrt(lam) * float(np.sum(np.abs(coeffs)))
    sup += 0.5 * spacing * grad_scale  # Lipschitz safety margin
    eps = math.sqrt(domain.area) * sup / l2
    return eps, mc_err


@dataclass
class PlanarRecord:
    lam: float
    multiplicity: int
    sigma_min: float
    eps: float
    fhm_rel: float
    fhm_vacuous: bool


def planar_find_eigenvalues(domain, lam_lo, lam_hi, step, n_dir=24,
                            m_boundary=0, q_interior=0, seed=0, m=4,
                            tau=1e-12, tol_lam=1e-9, pool_map=None):
    """Scan + refine the sigma curve; attach FHM inclusion data."""
    m_boundary = m_boundary or 4 * 2 * n_dir
    q_interior = q_interior or 4 * 2 * n_dir

    def build(lam):
        return planar_matrices(domain, lam, n_dir, m_boundary, q_interior, seed)

    curve = gsvd.scan(lam_lo, lam_hi, step, build, m=m, tau=tau,
                      pool_map=pool_map)
    bg = float(np.median(curve.sigmas[:, 0]))
    records = []
    for i in curve.local_minima():
        if curve.sigmas[i, 0] > 0.35 * bg:
            continue
        bracket = (curve.lambdas[i - 1], curve.lambdas[i], curve.lambdas[i + 1])
        lam_star, sig_star = gsvd.refine_minimum(bracket, build,
                                                 tol_lam=tol_lam, m=m, tau=tau)
        if sig_star[0] > 0.05 * bg:
            continue
        A, B = build(lam_star)
        _, vecs = gsvd.smallest_generalized_singulars(A, B, m=m, tau=tau)
        eps, _ = boundary_sup_estimate(vecs[:, 0], domain, lam_star, n_dir,
                                       m_boundary=m_boundary)
        rel = fhm_bound(lam_star, eps) if eps < 1 else float("inf")
        theta = math.sqrt(max(sig_star[0], 1e-14) * bg)
        records.append(
            PlanarRecord(
                lam=float(lam_star),
                multiplicity=max(1, gsvd.multiplicity_estimate(sig_star, theta)),
                sigma_min=float(sig_star[0]),
                eps=eps,
                fhm_rel=rel,
                fhm_vacuous=not (rel < 1.0),
            )
        )
    records.sort(key=lambda r: r.lam)
    return records, curve
