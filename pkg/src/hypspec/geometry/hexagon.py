"""Right-angled hexagons and pairs of pants.

A right-angled geodesic hexagon with alternating sides a1, a2, a3 (every
second side) is unique up to isometry; the connecting sides follow the
hexagon trigonometry

    cosh b_k = (cosh a_k + cosh a_i cosh a_j) / (sinh a_i sinh a_j),

for {i, j, k} = {1, 2, 3}.  Two copies glued along the b-sides form a pair
of pants with geodesic boundary lengths 2 a1, 2 a2, 2 a3 and area 2 pi.

The hexagon is realized explicitly in the half-plane by walking the sides
in the cyclic order (a1, b3, a2, b1, a3, b2) with right-angle turns,
starting with side a1 going up the y-axis from i.  The walk is verified to
close; this guards the trigonometric derivation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .halfplane import (
    Geodesic,
    apply_mobius,
    dist,
    geodesic_through,
    rot_matrix,
    trans_matrix,
)

__all__ = ["connecting_sides", "Hexagon", "right_angled_hexagon", "Pants",
           "pants_from_lengths"]


def connecting_sides(a1, a2, a3):
    """(b1, b2, b3) with b_k joining the a_i and a_j sides."""
    if min(a1, a2, a3) <= 0:
        raise ValueError("hexagon sides must be positive")
    ch = [math.cosh(a) for a in (a1, a2, a3)]
    sh = [math.sinh(a) for a in (a1, a2, a3)]
    b = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        b.append(math.acosh((ch[k] + ch[i] * ch[j]) / (sh[i] * sh[j])))
    return tuple(b)


@dataclass(frozen=True)
class Hexagon:
    """Embedded right-angled hexagon.

    vertices v1..v6 in the half-plane, side s_i from v_i to v_{i+1},
    side lengths in cyclic order (a1, b3, a2, b1, a3, b2); side a1 lies
    on the y-axis from i to e^{a1} i, and the hexagon sits in x >= 0.
    """

    a: tuple
    b: tuple
    vertices: tuple  # 6 half-plane points
    side_geodesics: tuple  # 6 Geodesic objects
    interior_signs: tuple  # sign of Geodesic.side() on the interior

    @property
    def side_lengths(self):
        a1, a2, a3 = self.a
        b1, b2, b3 = self.b
        return (a1, b3, a2, b1, a3, b2)

    def contains(self, z, margin=1e-12):
        return all(
            sgn * geo.side(z) >= -margin
            for geo, sgn in zip(self.side_geodesics, self.interior_signs)
        )

    def area(self):
        # Gauss-Bonnet: (6-2) pi - 6 * pi/2
        return math.pi


def right_angled_hexagon(a1, a2, a3, tol=1e-10):
    """Construct and verify the right-angled hexagon with alternating
    sides (a1, a2, a3); the walk must close to within tol."""
    b = connecting_sides(a1, a2, a3)
    lengths = (a1, b[2], a2, b[0], a3, b[1])
    g = np.eye(2)
    verts = [complex(0.0, 1.0)]
    frames = [g]
    turn = rot_matrix(-0.5 * math.pi)  # interior on the right of travel
    for length in lengths:
        g = g @ trans_matrix(length)
        verts.append(apply_mobius(g, 1j))
        g = g @ turn
        frames.append(g)
    closure = dist(verts[6], verts[0])
    if closure > tol:
        raise RuntimeError(f"hexagon walk failed to close: gap {closure:.2e}")
    vertices = tuple(verts[:6])

    geos = []
    for i in range(6):
        geos.append(geodesic_through(vertices[i], vertices[(i + 1) % 6]))
    # interior side of each full geodesic: take the sign at the remaining
    # vertices (convexity makes them unanimous)
    signs = []
    for i, geo in enumerate(geos):
        others = [vertices[j] for j in range(6) if j not in (i, (i + 1) % 6)]
        vals = [geo.side(z) for z in others]
        if max(vals) < 0 < -min(vals):
            signs.append(-1.0)
        elif min(vals) > 0:
            signs.append(1.0)
        else:
            raise RuntimeError("hexagon is not convex; construction bug")
    return Hexagon(
        a=(a1, a2, a3),
        b=b,
        vertices=vertices,
        side_geodesics=tuple(geos),
        interior_signs=tuple(signs),
    )


@dataclass(frozen=True)
class Pants:
    """Pair of pants: two mirror hexagons glued along the b-sides.

    Boundary geodesic k has length ell_k = 2 a_k; the seam joining
    boundaries i and j has length b_k and meets both perpendicularly.
    """

    boundary_lengths: tuple
    hexagon: Hexagon

    @property
    def seam_lengths(self):
        return self.hexagon.b

    def area(self):
        return 2.0 * math.pi


def pants_from_lengths(ell1, ell2, ell3):
    if min(ell1, ell2, ell3) <= 0:
        raise ValueError("boundary lengths must be positive")
    hexagon = right_angled_hexagon(0.5 * ell1, 0.5 * ell2, 0.5 * ell3)
    return Pants(boundary_lengths=(ell1, ell2, ell3), hexagon=hexagon)
