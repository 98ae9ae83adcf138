"""Spectral functions built on the trace formula for hyperbolic surfaces.

For a closed hyperbolic surface the heat trace has the geometric
representation

    tr e^{t Lap} = Vol/(4 pi t) e^{-t/4} I(t)
                 + sum_{n>=1} sum_{gamma} e^{-t/4}/sqrt(4 pi t)
                   * l(gamma) e^{-n^2 l^2 / 4t} / (2 sinh(n l / 2)),

    I(t) = integral_0^inf pi e^{-r^2 t} sech^2(pi r) dr,

with gamma running over (oriented) primitive closed geodesics.  Splitting
the Mellin transform of tr e^{t Lap} - 1 at a point eps gives a numerical
analytic continuation of the spectral zeta function

    zeta(s) = (T1 + T2 + T3 + T4) / Gamma(s),

and differentiating at s = 0 yields the regularized determinant through
closed-form pieces L1 + L2 + L3 = zeta'(0), det = exp(-zeta'(0)).

The same identity powers two completeness checks for a computed
eigenvalue list: the heat-kernel remainder R_N(t) with the explicit
Tauberian bound F_T(t), and the Riesz mean of the counting function.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .specfun import (
    EULER_GAMMA,
    QuadratureSpec,
    exp_integral_e2,
    heat_moment,
    identity_term_integral,
    upper_gamma,
)

__all__ = [
    "SpectralInput",
    "ZetaEvaluation",
    "heat_trace_geometric",
    "heat_coefficients",
    "zeta",
    "log_det",
    "r_n_curve",
    "nu_constant",
    "f_t_bound",
    "completeness_certificate",
    "riesz_test",
    "weyl_check",
]


@dataclass(frozen=True)
class SpectralInput:
    """Volume, eigenvalue list (with multiplicities, lambda_0 = 0 first)
    and primitive length spectrum of one surface."""

    volume: float
    eigenvalues: tuple  # (lambda, multiplicity), ascending, lambda_0 = 0
    lengths: object  # LengthSpectrum

    def __post_init__(self):
        if self.volume <= 0:
            raise ValueError("volume must be positive")
        if not self.eigenvalues or abs(self.eigenvalues[0][0]) > 1e-12:
            raise ValueError("eigenvalue list must start at lambda_0 = 0")
        lam_prev = -1.0
        for lam, mult in self.eigenvalues:
            if lam <= lam_prev:
                raise ValueError("eigenvalues must be strictly ascending")
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")
            lam_prev = lam

    @property
    def systole(self):
        return self.lengths.systole

    def expanded_eigenvalues(self):
        """Eigenvalues repeated by multiplicity (ascending array)."""
        return np.concatenate(
            [np.full(int(m), lam) for lam, m in self.eigenvalues]
        )

    def lambda_max(self):
        return self.eigenvalues[-1][0]


@dataclass
class ZetaEvaluation:
    s: float
    value: float
    budget_spectral_tail: float
    budget_length_tail: float
    budget_quadrature: float
    budget_series: float
    params: dict

    @property
    def total_error(self):
        return (
            self.budget_spectral_tail
            + self.budget_length_tail
            + self.budget_quadrature
            + self.budget_series
        )

    def to_json(self):
        return json.dumps(
            {
                "s": self.s,
                "value": self.value,
                "budget": {
                    "spectral_tail": self.budget_spectral_tail,
                    "length_tail": self.budget_length_tail,
                    "quadrature": self.budget_quadrature,
                    "series": self.budget_series,
                    "total": self.total_error,
                },
                "params": self.params,
            },
            indent=2,
        )


# -- geometric heat trace ------------------------------------------------


def _geodesic_sum(spec_in, weight):
    """sum over windings n and primitive geodesics of
    weight(n l) * l / (2 sinh(n l / 2)); terminates on the exponential
    decay of `weight`."""
    total = 0.0
    for ell, mult in spec_in.lengths.entries:
        n = 1
        while 0.5 * n * ell < 700.0:  # sinh overflow guard
            term = mult * weight(n * ell) * ell / (2.0 * math.sinh(0.5 * n * ell))
            total += term
            if abs(term) <= 1e-300 + 1e-18 * abs(total):
                break
            n += 1
    return total


def _length_tail_bound(l_max, t, prefactor):
    """Bound on the omitted geodesic terms with l > l_max in the heat
    trace at time t: primitive lengths have density at most ~ e^l / l, and
    each term is below prefactor * l e^{-l^2/4t} e^{-l/2} / 0.9, so the
    tail is at most

        1.12 * prefactor * e^{phi(l_max)} / |phi'(l_max)|,
        phi(l) = l/2 - l^2/(4 t),

    valid while phi' < 0 at l_max (i.e. l_max > t)."""
    phi = 0.5 * l_max - l_max * l_max / (4.0 * t)
    dphi = 0.5 - l_max / (2.0 * t)
    if dphi >= -1e-9:
        return float("inf")
    return 1.12 * prefactor * math.exp(phi) / (-dphi)


def heat_trace_geometric(t, spec_in, quad_spec=QuadratureSpec(), rtol=1e-10):
    """Geometric-side heat trace at time t > 0.

    Returns (value, error_bound).  Raises when the truncation tail of the
    length spectrum cannot meet the tolerance (this happens for large t,
    where geodesics of length ~ t would be needed)."""
    if t <= 0:
        raise ValueError("t must be positive")
    ident, ierr = identity_term_integral(t, quad_spec)
    pref_t = spec_in.volume * math.exp(-0.25 * t) / (4.0 * math.pi * t)
    gauss = math.exp(-0.25 * t) / math.sqrt(4.0 * math.pi * t)
    geod = gauss * _geodesic_sum(spec_in, lambda L: math.exp(-L * L / (4.0 * t)))
    tail = _length_tail_bound(spec_in.lengths.l_max, t, gauss)
    value = pref_t * ident + geod
    err = pref_t * ierr + tail
    if err > rtol * max(abs(value), 1.0):
        raise RuntimeError(
            f"heat trace tolerance not met at t={t}: length tail {tail:.2e} "
            f"(l_max={spec_in.lengths.l_max}); geodesics of length ~ t are "
            "needed for large t"
        )
    return value, err


def heat_coefficients(volume, k_max, quad_spec=QuadratureSpec()):
    """a_k = Vol/(4 pi) (-1)^k / k! * m_k - delta_{k,1} from the moments
    m_k of the identity term."""
    out = []
    for k in range(k_max + 1):
        m_k, _ = heat_moment(k, quad_spec)
        a_k = volume / (4.0 * math.pi) * (-1.0) ** k / math.factorial(k) * m_k
        if k == 1:
            a_k -= 1.0
        out.append(a_k)
    return out


# -- zeta function -------------------------------------------------------


def _t1_sum(spec_in, s, eps, eigenvalue_tol=0.0):
    """T1 = sum lambda_i^{-s} Gamma(s, eps lambda_i) over nonzero
    eigenvalues, the Weyl tail bound of the omitted part, and the
    sensitivity of the sum to eigenvalue errors of size eigenvalue_tol."""
    total = 0.0
    sens = 0.0
    for lam, mult in spec_in.eigenvalues:
        if lam <= 1e-12:
            continue
        g = upper_gamma(s, eps * lam)
        total += mult * lam ** (-s) * g
        if eigenvalue_tol > 0:
            dterm = abs(-s * lam ** (-s - 1.0) * g
                        - lam ** (-s) * (eps * lam) ** (s - 1.0)
                        * math.exp(-eps * lam) * eps)
            sens += mult * dterm * eigenvalue_tol
    lam_top = spec_in.lambda_max()
    # Gamma(s, x) <~ x^{s-1} e^{-x}, so the omitted terms are below
    # eps^{s-1} e^{-eps lam} / lam; integrating against the Weyl density
    # Vol/(4 pi) gives eps^{s-1} * density * E1(eps lam_top), bounded by
    # e^{-x}/x (1 + 1/x); the factor 2 covers density fluctuation and the
    # Gamma-bound constant at moderate s
    x_top = eps * lam_top
    density = spec_in.volume / (4.0 * math.pi)
    tail = (
        2.0
        * density
        * eps ** (s - 1.0)
        * math.exp(-x_top)
        / max(x_top, 1.0)
        * (1.0 + 1.0 / max(x_top, 1.0))
    )
    return total, abs(tail) + sens


def _t4_sum(spec_in, s, eps):
    """T4: per-(n, gamma) integral int_0^eps t^{s-1} e^{-t/4} / sqrt(4 pi t)
    * l e^{-n^2 l^2/(4 t)} / (2 sinh(n l/2)) dt, plus its length tail."""
    pref = 1.0 / math.sqrt(4.0 * math.pi)

    def weight(L):
        c = L * L / 4.0
        val, _ = quad(
            lambda u: u ** (-s - 0.5) * math.exp(-c * u - 0.25 / u) * pref,
            1.0 / eps,
            np.inf,
        )
        return val

    total = _geodesic_sum(spec_in, weight)
    # envelope: integrand below t^{s-3/2} e^{-l^2/4t}; crude tail constant
    l_max = spec_in.lengths.l_max
    tail = _length_tail_bound(l_max, eps, pref * eps ** (s - 0.5))
    return total, abs(tail)


def _t3_integrand_series(s, x, n_heat):
    """J(s, q, eps) * q^... : computes sum_{k > N} (-q)^k eps^{s+k-1} /
    (k! (s+k-1)) given x = q*eps, returned as a function of eps power
    factored out by the caller.  Summation is stable for x <~ 30."""
    total = 0.0
    term = 1.0  # (-x)^k / k! at k = 0
    for k in range(1, n_heat + 1):
        term *= -x / k
    k = n_heat
    while True:
        k += 1
        term *= -x / k
        contrib = term / (s + k - 1.0)
        total += contrib
        if abs(term) < 1e-18 * (1.0 + abs(total)) and k > n_heat + 5:
            break
        if k > 500:
            raise RuntimeError(f"T3 series did not converge (x={x})")
    return total


def zeta(s, spec_in, eps=0.1, n_heat=8, quad_spec=QuadratureSpec(),
         eigenvalue_tol=1e-6):
    """Spectral zeta at real s via the eps-split representation.

    Valid for s > -n_heat away from s = 1 (genuine pole).  At s = 0 and
    negative integers the 1/Gamma(s) zero cancels the T2 pole; the limit
    zeta(-n) = (-1)^n n! a_{n+1} is returned there.

    eigenvalue_tol is the assumed accuracy of the input eigenvalues; its
    first-order effect on T1 is charged to the spectral-tail budget line.
    """
    s = float(s)
    if s <= -n_heat:
        raise ValueError(f"continuation valid only for s > -{n_heat}")
    a = heat_coefficients(spec_in.volume, n_heat, quad_spec)
    if abs(s - 1.0) < 1e-9:
        raise ZeroDivisionError("s = 1 is a pole of the spectral zeta")
    if s <= 0 and abs(s - round(s)) < 1e-12:
        n = int(round(-s))
        value = (-1.0) ** n * math.factorial(n) * a[n + 1]
        return ZetaEvaluation(
            s=s,
            value=value,
            budget_spectral_tail=0.0,
            budget_length_tail=0.0,
            budget_quadrature=1e-14 * abs(value),
            budget_series=0.0,
            params={"eps": eps, "n_heat": n_heat, "note": "analytic limit"},
        )

    t1, tail1 = _t1_sum(spec_in, s, eps, eigenvalue_tol)
    t2 = 0.0
    for k, a_k in enumerate(a[: n_heat + 1]):
        denom = s + k - 1.0
        if abs(denom) < 1e-9:
            raise ZeroDivisionError(
                f"s = {s} hits the T2 pole at k = {k} and does not cancel"
            )
        t2 += a_k * eps ** (s + k - 1.0) / denom

    vol_fac = spec_in.volume / (4.0 * math.pi)

    def t3_integrand(r):
        q = r * r + 0.25
        series = _t3_integrand_series(s, q * eps, n_heat)
        return (
            math.pi / math.cosh(math.pi * r) ** 2 * series * eps ** (s - 1.0)
        )

    upper = quad_spec.r_max
    t3_val, t3_err = quad(t3_integrand, 0.0, upper, epsabs=1e-13, limit=200)
    t3 = vol_fac * t3_val
    t3_tail = vol_fac * 4.0 * math.exp(-2.0 * math.pi * upper) * (
        abs(t3_integrand(upper)) + 1.0e-30
    )

    t4, tail4 = _t4_sum(spec_in, s, eps)

    gamma_s = math.gamma(s)
    value = (t1 + t2 + t3 + t4) / gamma_s
    return ZetaEvaluation(
        s=s,
        value=value,
        budget_spectral_tail=abs(tail1 / gamma_s),
        budget_length_tail=abs(tail4 / gamma_s),
        budget_quadrature=abs((t3_err + t3_tail) / gamma_s),
        budget_series=1e-15 * (abs(t1) + abs(t2) + abs(t3)) / abs(gamma_s),
        params={"eps": eps, "n_heat": n_heat,
                "n_eigen": len(spec_in.eigenvalues),
                "l_max": spec_in.lengths.l_max},
    )


def _l2_s_function(x):
    """S(x) = sum_{k>=2} (-x)^k / (k! (k-1)) =
    1 - E2(x) + x (gamma - 1 + log x); the series form avoids the
    cancellation of the closed form for small x."""
    if x <= 1.5:
        total = 0.0
        term = 1.0
        for k in range(1, 80):
            term *= -x / k
            if k >= 2:
                contrib = term / (k - 1.0)
                total += contrib
                if abs(contrib) < 1e-19:
                    break
        return total
    return 1.0 - exp_integral_e2(x) + x * (EULER_GAMMA - 1.0 + math.log(x))


def log_det(spec_in, eps=0.1, quad_spec=QuadratureSpec(), eigenvalue_tol=1e-6):
    """(det, zeta_prime_0, budget) of the Laplacian determinant.

    zeta'(0) = L1 + L2 + L3 with
      L1 = sum Gamma(0, eps lambda_i),
      L2 = -Vol/(4 pi eps) - (Vol/(12 pi) + 1)(gamma + log eps)
           + Vol/4 * int sech^2(pi r) S(eps (r^2 + 1/4)) / eps dr,
      L3 = geodesic integrals over (0, eps];
    det = exp(-zeta'(0)).
    """
    l1 = 0.0
    sens = 0.0
    for lam, mult in spec_in.eigenvalues:
        if lam <= 1e-12:
            continue
        l1 += mult * upper_gamma(0.0, eps * lam)
        # d E1(eps lam) / d lam = -exp(-eps lam) / lam
        sens += mult * math.exp(-eps * lam) / lam * eigenvalue_tol
    lam_top = spec_in.lambda_max()
    density = spec_in.volume / (4.0 * math.pi)
    # E1(x) <= e^{-x}/x tail over the Weyl density
    tail1 = 2.0 * density / eps * math.exp(-eps * lam_top) / (eps * lam_top)

    vol = spec_in.volume

    def integrand(r):
        q = r * r + 0.25
        return _l2_s_function(eps * q) / eps / math.cosh(math.pi * r) ** 2

    upper = quad_spec.r_max
    ival, ierr = quad(integrand, 0.0, upper, epsabs=1e-13, limit=200)
    i_tail = 4.0 * math.exp(-2.0 * math.pi * upper) * abs(integrand(upper) + 1e-30)
    l2 = (
        -vol / (4.0 * math.pi * eps)
        - (vol / (12.0 * math.pi) + 1.0) * (EULER_GAMMA + math.log(eps))
        + vol / 4.0 * ival
    )

    pref = 1.0 / (4.0 * math.sqrt(math.pi))

    def weight(L):
        c = L * L / 4.0
        val, _ = quad(
            lambda u: u ** (-0.5) * math.exp(-c * u - 0.25 / u) * 2.0 * pref,
            1.0 / eps,
            np.inf,
        )
        return val

    l3 = _geodesic_sum(spec_in, weight)
    tail3 = _length_tail_bound(spec_in.lengths.l_max, eps, pref * eps**0.5)

    zeta_prime_0 = l1 + l2 + l3
    det = math.exp(-zeta_prime_0)
    budget = {
        "spectral_tail": (abs(tail1) + sens) * det,
        "length_tail": abs(tail3) * det,
        "quadrature": (vol / 4.0 * (ierr + i_tail)) * det,
        "series": 1e-14 * (abs(l1) + abs(l2)) * det,
    }
    return det, zeta_prime_0, budget


# -- completeness diagnostics --------------------------------------------


def r_n_curve(spec_in, t_grid, n_terms=None, quad_spec=QuadratureSpec()):
    """R_N(t) = sum_{j<=N} e^{-lambda_j t} - Vol e^{-t/4}/(4 pi t) I(t)
    on a t grid, plus the index of the |R_N| minimum (crossover)."""
    lam = spec_in.expanded_eigenvalues()
    if n_terms is not None:
        if n_terms + 1 > len(lam):
            raise ValueError("n_terms exceeds available eigenvalues")
        lam = lam[: n_terms + 1]
    t_grid = np.asarray(t_grid, dtype=float)
    vals = np.empty_like(t_grid)
    for i, t in enumerate(t_grid):
        ident, _ = identity_term_integral(t, quad_spec)
        spectral = float(np.sum(np.exp(-lam * t)))
        vals[i] = spectral - spec_in.volume * math.exp(-0.25 * t) / (
            4.0 * math.pi * t
        ) * ident
    return vals, int(np.argmin(np.abs(vals)))


def nu_constant(tol=1e-14):
    """First positive root of cos(x) cosh(x) = 1 (approx 4.7300; the
    constant in the Tauberian heat-remainder bound)."""
    f = lambda x: math.cos(x) * math.cosh(x) - 1.0
    lo, hi = 3.0, 6.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def f_t_bound(spec_in, t, T, form="explicit", quad_spec=QuadratureSpec()):
    """Upper bound F_T(t) for the geodesic part of R_N(t), 0 < t < T.

    form="explicit": the closed Tauberian bound with the constant nu
    (used by the certificate; depends only on Vol and the systole).
    form="trace": sqrt(T/t) tr(e^{-Lap T}) e^{T/4 + l0^2/(4T)} e^{-l0^2/(4t)}
    with the trace evaluated from the geometric side (diagnostic).
    """
    l0 = spec_in.systole
    t_cap = math.sqrt(l0 * l0 + 1.0) - 1.0
    if not (0.0 < t < T < t_cap):
        raise ValueError(
            f"need 0 < t < T < sqrt(l0^2+1)-1 = {t_cap:.6f}, got t={t}, T={T}"
        )
    if form == "trace":
        tr, _ = heat_trace_geometric(T, spec_in, quad_spec, rtol=1e-2)
        return (
            math.sqrt(T / t)
            * tr
            * math.exp(0.25 * T + l0 * l0 / (4.0 * T) - l0 * l0 / (4.0 * t))
        )
    nu = nu_constant()
    bracket = (
        1.0 / math.sqrt(T)
        + (2.0 * nu * nu + nu * math.pi) / (math.sqrt(math.pi) * l0)
        + math.sqrt(T) * (4.0 * nu**3 + 2.0 * nu * nu * math.pi) / (math.pi * l0 * l0)
    )
    return (
        spec_in.volume
        / (4.0 * math.pi)
        / math.sqrt(t)
        * math.exp(0.25 * T + l0 * l0 / (4.0 * T) - l0 * l0 / (4.0 * t))
        * bracket
    )


def completeness_certificate(spec_in, t, T, quad_spec=QuadratureSpec()):
    """Certified eigenvalue-free-above threshold from a candidate list.

    Computes R~_N(t) from the list and the explicit bound F_T(t); when
    0 < F_T(t) - R~_N(t) < 1 the certificate asserts there are no
    eigenvalues missing in [0, lambda_max], lambda_max =
    -log(F_T(t) - R~_N(t)) / t.  Returns (lambda_max, details) or raises
    on parameter violations; returns (None, details) when the log
    argument is not in (0, 1)."""
    f_t = f_t_bound(spec_in, t, T, form="explicit")
    vals, _ = r_n_curve(spec_in, [t], quad_spec=quad_spec)
    r_n = float(vals[0])
    arg = f_t - r_n
    details = {"t": t, "T": T, "F_T": f_t, "R_N": r_n, "argument": arg}
    if not (0.0 < arg < 1.0):
        return None, details
    lam_max = -math.log(arg) / t
    details["lambda_max"] = lam_max
    return lam_max, details


def riesz_test(spec_in, t_grid):
    """F_test(t) = (1/t) sum_{sqrt(mu_j) <= t} (t - sqrt(mu_j))
    - Vol/(12 pi) (t^2 - 1), exact piecewise evaluation of the first
    Riesz mean of the counting function minus its hyperbolic main term."""
    roots = np.sqrt(spec_in.expanded_eigenvalues())
    t_grid = np.asarray(t_grid, dtype=float)
    out = np.empty_like(t_grid)
    c = spec_in.volume / (12.0 * math.pi)
    for i, t in enumerate(t_grid):
        below = roots[roots <= t]
        mean = float(np.sum(t - below)) / t if t > 0 else 0.0
        out[i] = mean - c * (t * t - 1.0)
    return out


def weyl_check(spec_in, top_fraction=0.5):
    """Least-squares slope of N(lambda) vs lambda over the top of the
    list, against the Weyl constant Vol/(4 pi)."""
    lam = spec_in.expanded_eigenvalues()
    if len(lam) < 50:
        raise ValueError("need at least 50 eigenvalues for the Weyl check")
    n_of_lam = np.arange(1, len(lam) + 1, dtype=float)
    start = int(len(lam) * (1.0 - top_fraction))
    x, y = lam[start:], n_of_lam[start:]
    slope = float(np.polyfit(x, y, 1)[0])
    expected = spec_in.volume / (4.0 * math.pi)
    return slope, expected
