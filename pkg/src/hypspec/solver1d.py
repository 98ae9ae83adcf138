"""High-accuracy 1D Dirichlet eigenvalue solver by shooting.

For -u'' + V u = lambda u on [-L, L] with u(+-L) = 0, integrate the
initial value problem u(-L) = 0, u'(-L) = 1 and find the zeros of
lambda -> u_lambda(L).  The miss function is entire in lambda, so the
secant iteration converges superlinearly; 1D Dirichlet eigenvalues are
simple, so sign changes bracket every eigenvalue.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

__all__ = ["Problem1D", "shoot", "eigenvalues_1d", "potential_by_name"]


@dataclass(frozen=True)
class Problem1D:
    L: float
    V: Callable[[float], float]
    tol: float = 1e-12

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("L must be positive")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


def potential_by_name(name, coeffs=None):
    """Built-in potentials: 'zero', 'parabolic5' (= 5 (1 - x^2)), or
    'poly' with a coefficient list c0 + c1 x + c2 x^2 + ...."""
    if name == "zero":
        return lambda x: 0.0
    if name == "parabolic5":
        return lambda x: 5.0 * (1.0 - x * x)
    if name == "poly":
        c = np.asarray(coeffs if coeffs is not None else [0.0], dtype=float)
        return lambda x: float(np.polynomial.polynomial.polyval(x, c))
    raise ValueError(f"unknown potential {name!r}")


def shoot(problem, lam):
    """Integrate from -L with u(-L)=0, u'(-L)=1; return (u(L), u'(L))."""

    def rhs(x, y):
        return [y[1], (problem.V(x) - lam) * y[0]]

    sol = solve_ivp(
        rhs,
        (-problem.L, problem.L),
        [0.0, 1.0],
        method="DOP853",
        rtol=problem.tol,
        atol=problem.tol * 1e-2,
    )
    if not sol.success:
        raise RuntimeError(f"integrator failed at x={sol.t[-1]}: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def _secant(f, x0, x1, f0, f1, xtol, max_iter=80):
    for _ in range(max_iter):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        x0, f0, x1 = x1, f1, x2
        f1 = f(x2)
        if abs(x1 - x0) <= xtol * max(1.0, abs(x1)):
            return x1, f1
    raise RuntimeError(f"secant refinement did not converge near lambda={x1}")


def eigenvalues_1d(problem, lam_lo, lam_hi, step):
    """All eigenvalues in [lam_lo, lam_hi], ascending.

    Brackets sign changes of u_lambda(L) on the grid and refines each by
    the secant method to relative lambda accuracy ~1e-12.  A grid point
    where |u| has a non-sign-changing near-zero minimum is reported via a
    warning (cannot be an eigenvalue for a 1D Dirichlet problem).
    """
    if not lam_lo < lam_hi:
        raise ValueError("need lam_lo < lam_hi")
    n = int(np.floor((lam_hi - lam_lo) / step)) + 1
    grid = lam_lo + step * np.arange(n)
    if grid[-1] < lam_hi:
        grid = np.append(grid, lam_hi)
    miss = np.array([shoot(problem, lam)[0] for lam in grid])

    roots = []
    for i in range(len(grid) - 1):
        f0, f1 = miss[i], miss[i + 1]
        if f0 == 0.0:
            roots.append(grid[i])
            continue
        if f0 * f1 < 0:
            lam, _ = _secant(
                lambda lam: shoot(problem, lam)[0],
                grid[i],
                grid[i + 1],
                f0,
                f1,
                xtol=1e-13,
            )
            roots.append(lam)
    if miss[-1] == 0.0:
        roots.append(grid[-1])
    return sorted(roots)
