"""Radial mode solutions on a hyperbolic cylinder.

In Fermi coordinates (rho, t) the cylinder of core length ell carries the
metric d rho^2 + cosh^2(rho) dt^2.  Separating Phi(rho, t) =
Phi_k(rho) * trig(2 pi k t / ell) reduces the eigenvalue equation
(-Laplace - lambda) Phi = 0 to the radial ODE

    Phi'' + tanh(rho) Phi' + (lambda - mu_k^2 sech^2(rho)) Phi = 0,
    mu_k = 2 pi k / ell.

The even/odd fundamental system is normalized by initial data at rho = 0:
even (1, 0), odd (0, 1).  The primary evaluator integrates the ODE
numerically with dense output; the hypergeometric closed forms serve as a
cross-check in the tests.

Solutions for all k = 0..N of one parity are integrated as a single
stacked system (shared adaptive steps), which is what the surface
assembly uses; `solve_radial` wraps the single-mode case.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "ModeIndex",
    "RadialSolution",
    "RadialFamily",
    "solve_radial",
    "solve_radial_family",
    "mode_value_and_gradient",
    "directional_normal_derivative",
]


@dataclass(frozen=True)
class ModeIndex:
    """(Fourier index k, radial parity, angular factor).

    parity in {"even", "odd"} selects the radial fundamental solution;
    angular in {"cos", "sin"} selects the circle factor.  k = 0 admits
    only "cos".
    """

    fourier_k: int
    parity: str
    angular: str = "cos"

    def __post_init__(self):
        if self.fourier_k < 0:
            raise ValueError("fourier_k must be >= 0")
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be even/odd, got {self.parity!r}")
        if self.angular not in ("cos", "sin"):
            raise ValueError(f"angular must be cos/sin, got {self.angular!r}")
        if self.fourier_k == 0 and self.angular != "cos":
            raise ValueError("k = 0 admits only the cos angular part")


class RadialFamily:
    """Dense radial solutions Phi_k(rho), k = 0..N, of one parity.

    Stores one adaptive dense-output integration of the stacked system on
    [0, rho_max]; negative rho is evaluated through the parity symmetry
    Phi(-rho) = +-Phi(rho).
    """

    def __init__(self, ell, n_max, parity, lam, rho_max, rtol=1e-13):
        if ell <= 0:
            raise ValueError("core length must be positive")
        if rho_max <= 0:
            raise ValueError("rho_max must be positive")
        self.ell = float(ell)
        self.n_max = int(n_max)
        self.parity = parity
        self.lam = float(lam)
        self.rho_max = float(rho_max)
        n = self.n_max + 1
        mu2 = (2.0 * np.pi * np.arange(n) / self.ell) ** 2

        def rhs(rho, y):
            phi, dphi = y[:n], y[n:]
            ddphi = -np.tanh(rho) * dphi + (mu2 / np.cosh(rho) ** 2 - lam) * phi
            return np.concatenate([dphi, ddphi])

        if parity == "even":
            y0 = np.concatenate([np.ones(n), np.zeros(n)])
        elif parity == "odd":
            y0 = np.concatenate([np.zeros(n), np.ones(n)])
        else:
            raise ValueError(f"parity must be even/odd, got {parity!r}")
        sol = solve_ivp(
            rhs,
            (0.0, self.rho_max),
            y0,
            method="DOP853",
            rtol=rtol,
            atol=1e-30,
            dense_output=True,
        )
        if not sol.success:
            raise RuntimeError(
                f"radial integration failed at rho={sol.t[-1]}: {sol.message}"
            )
        self._sol = sol.sol
        self._n = n

    def eval(self, rho):
        """(values, derivatives), each shaped (n_max+1, len(rho))."""
        rho = np.atleast_1d(np.asarray(rho, dtype=float))
        if np.any(np.abs(rho) > self.rho_max * (1 + 1e-12) + 1e-12):
            raise ValueError("rho outside the solved range")
        y = self._sol(np.abs(rho))
        phi, dphi = y[: self._n], y[self._n :]
        neg = rho < 0
        if np.any(neg):
            phi = phi.copy()
            dphi = dphi.copy()
            if self.parity == "even":
                dphi[:, neg] = -dphi[:, neg]
            else:
                phi[:, neg] = -phi[:, neg]
        return phi, dphi

    def single(self, k):
        mode = ModeIndex(k, self.parity)
        return RadialSolution(self.ell, mode, self.lam, self.rho_max, self, k)


@dataclass(frozen=True)
class RadialSolution:
    """One radial solution (value and rho-derivative) as a dense interpolant."""

    ell: float
    mode: ModeIndex
    lam: float
    rho_max: float
    family: RadialFamily
    _k: int

    def eval(self, rho):
        """(Phi_k(rho), Phi_k'(rho)) for scalar or array rho."""
        phi, dphi = self.family.eval(rho)
        if np.ndim(rho) == 0:
            return phi[self._k, 0], dphi[self._k, 0]
        return phi[self._k], dphi[self._k]


def solve_radial(ell, mode, lam, rho_max, rtol=1e-13):
    """Initial-value-normalized radial solution for one mode index."""
    fam = RadialFamily(ell, mode.fourier_k, mode.parity, lam, rho_max, rtol=rtol)
    return fam.single(mode.fourier_k)


def solve_radial_family(ell, n_max, parity, lam, rho_max, rtol=1e-13):
    return RadialFamily(ell, n_max, parity, lam, rho_max, rtol=rtol)


def mode_value_and_gradient(sol, rho, t):
    """(value, d_rho, d_t) of Phi_k(rho) * trig(2 pi k t / ell).

    The derivatives are coordinate partials in the Fermi chart (not yet
    contracted with any metric normal).
    """
    phi, dphi = sol.eval(rho)
    k = sol.mode.fourier_k
    omega = 2.0 * np.pi * k / sol.ell
    phase = omega * np.asarray(t, dtype=float)
    if sol.mode.angular == "cos":
        ang, dang = np.cos(phase), -omega * np.sin(phase)
    else:
        ang, dang = np.sin(phase), omega * np.cos(phase)
    return phi * ang, dphi * ang, phi * dang


def directional_normal_derivative(sol, point, unit_normal, tol=1e-10):
    """Directional derivative along a Fermi-metric unit normal.

    unit_normal = (n_rho, n_t) must satisfy n_rho^2 + cosh^2(rho) n_t^2 = 1;
    the result is n_rho * d_rho Phi + n_t * d_t Phi.
    """
    rho, t = point
    n_rho, n_t = unit_normal
    norm2 = n_rho * n_rho + np.cosh(rho) ** 2 * n_t * n_t
    if abs(norm2 - 1.0) > tol:
        raise ValueError(f"normal not unit in the Fermi metric: |n|^2 = {norm2}")
    _, d_rho, d_t = mode_value_and_gradient(sol, rho, t)
    return n_rho * d_rho + n_t * d_t
