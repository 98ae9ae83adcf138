"""Upper half-plane model primitives.

Points are complex numbers z = x + iy with y > 0, metric (dx^2 + dy^2)/y^2.
Geodesics are Euclidean semicircles centered on the real axis or vertical
lines.  Isometries are SL(2, R) matrices acting by Moebius transformations.

The Fermi chart of a hyperbolic cylinder sits on top of this model: the
core geodesic lifts to the y-axis, and

    (rho, t)  <->  z = e^t (tanh(rho) + i sech(rho)),
    rho = arcsinh(x / y),   t = log|z|.

rho is the signed distance from the y-axis and t is arclength along it.
"""

import math

import numpy as np

__all__ = [
    "fermi_to_halfplane",
    "halfplane_to_fermi",
    "tangent_to_fermi",
    "dist",
    "dist_chart",
    "trans_matrix",
    "rot_matrix",
    "apply_mobius",
    "Geodesic",
    "geodesic_through",
]


def fermi_to_halfplane(rho, t):
    return math.exp(t) * complex(math.tanh(rho), 1.0 / math.cosh(rho))


def halfplane_to_fermi(z):
    if z.imag <= 0:
        raise ValueError(f"point {z} not in the upper half-plane")
    return math.asinh(z.real / z.imag), math.log(abs(z))


def tangent_to_fermi(z, dz):
    """Push a half-plane tangent vector dz at z to (d_rho, d_t)."""
    az = abs(z)
    d_rho = (dz.real - (z.real / z.imag) * dz.imag) / az
    d_t = (z.real * dz.real + z.imag * dz.imag) / (az * az)
    return d_rho, d_t


def dist(z1, z2):
    """Hyperbolic distance between half-plane points."""
    q = 1.0 + abs(z1 - z2) ** 2 / (2.0 * z1.imag * z2.imag)
    return math.acosh(max(q, 1.0))


def dist_chart(p1, p2, ell):
    """Distance between Fermi-chart points of a cylinder with core length
    ell, valid when the t-offset is shorter than half the core."""
    rho1, t1 = p1
    rho2, t2 = p2
    dt = (t2 - t1 + 0.5 * ell) % ell - 0.5 * ell
    return dist(fermi_to_halfplane(rho1, 0.0), fermi_to_halfplane(rho2, dt))


def trans_matrix(d):
    """Translation by distance d along the y-axis (i -> e^d i)."""
    e = math.exp(0.5 * d)
    return np.array([[e, 0.0], [0.0, 1.0 / e]])


def rot_matrix(theta):
    """Rotation by theta about i (counterclockwise in the tangent space)."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, s], [-s, c]])


def apply_mobius(m, z):
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    return (a * z + b) / (c * z + d)


class Geodesic:
    """Complete geodesic with a unit-speed parameterization.

    Circle form:  z(s) = c + r (tanh s + i sech s)  (s increasing c-r -> c+r)
    Line form:    z(s) = c + i e^s
    """

    def __init__(self, center, radius=None):
        self.center = float(center)
        self.radius = None if radius is None else float(radius)
        if self.radius is not None and self.radius <= 0:
            raise ValueError("geodesic radius must be positive")

    @property
    def is_line(self):
        return self.radius is None

    def point(self, s):
        if self.is_line:
            return complex(self.center, math.exp(s))
        return self.center + self.radius * complex(
            math.tanh(s), 1.0 / math.cosh(s)
        )

    def tangent(self, s):
        """dz/ds (has unit hyperbolic norm)."""
        if self.is_line:
            return complex(0.0, math.exp(s))
        sech = 1.0 / math.cosh(s)
        return self.radius * sech * complex(sech, -math.tanh(s))

    def param_of(self, z, tol=1e-9):
        """Arclength parameter of a point on the geodesic."""
        if self.is_line:
            if abs(z.real - self.center) > tol * max(1.0, z.imag):
                raise ValueError(f"{z} not on vertical geodesic x={self.center}")
            return math.log(z.imag)
        w = z - self.center
        if abs(abs(w) - self.radius) > tol * self.radius:
            raise ValueError(f"{z} not on geodesic (c={self.center}, r={self.radius})")
        theta = math.atan2(w.imag, w.real)
        return -math.log(math.tan(0.5 * theta))

    def side(self, z):
        """Signed side indicator (sign convention fixed per geodesic)."""
        if self.is_line:
            return z.real - self.center
        return abs(z - self.center) ** 2 - self.radius**2

    def rho_extrema(self, s0, s1):
        """Max |rho| (Fermi coordinate) over the arc s in [s0, s1]."""
        cands = [s0, s1]
        if not self.is_line and abs(self.center) > self.radius:
            # d/ds of sinh(rho) = (c/r) cosh s + sinh s vanishes here
            sc = math.atanh(-self.radius / self.center)
            if min(s0, s1) < sc < max(s0, s1):
                cands.append(sc)
        vals = []
        for s in cands:
            z = self.point(s)
            vals.append(abs(math.asinh(z.real / z.imag)))
        return max(vals)


def geodesic_through(z1, z2, tol=1e-12):
    """The unique geodesic through two distinct half-plane points."""
    if abs(z1 - z2) < tol:
        raise ValueError("points coincide")
    if abs(z1.real - z2.real) < tol * max(1.0, abs(z1 - z2)):
        return Geodesic(0.5 * (z1.real + z2.real), None)
    c = (abs(z1) ** 2 - abs(z2) ** 2) / (2.0 * (z1.real - z2.real))
    return Geodesic(c, abs(z1 - c))
