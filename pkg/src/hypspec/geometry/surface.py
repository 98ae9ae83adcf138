"""Cylinder pieces, Fenchel-Nielsen gluing, and interface collocation.

A genus-g surface is glued from 2g-2 pairs of pants; cutting each pants
along the seam joining two of its boundary circles unfolds it into an
annular subset of a hyperbolic cylinder whose core is the remaining
boundary circle.  Every piece therefore lives in its own Fermi chart
(rho, t), t periodic with the core length.

Piece layout in the chart (a1 = core length / 2):

  * the hexagon H sits in 0 <= t <= a1, rho >= 0, with vertices
      v1 = (0, 0)       v2 = (0, a1)      v3 = (b3, a1)
      v6 = (b2, 0)      v4, v5 from the explicit half-plane walk;
  * its mirror image (rho, t) -> (rho, -t) fills t in [-a1, 0], so the
    piece is H union mirror(H) with t taken mod 2 a1.

The piece boundary consists of the core circle rho = 0, the two cut-open
boundary circles (arcs through v3 and v6, cut at the seam feet v4, v5),
and the two copies of the cut seam (v4-v5 and its mirror).

Gluing circles are parameterized by arclength with the piece interior on
the left and the base point at a seam foot; a gluing with twist fraction
tw identifies f_u(s) with f_w(delta - s), delta = (align0 + tw) * ell.
The global convention (align0, twist sign) is fixed so that the quoted
Fenchel-Nielsen coordinates of the Bolza surface reproduce its spectrum;
see the tests.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .halfplane import (
    dist,
    dist_chart,
    fermi_to_halfplane,
    geodesic_through,
    halfplane_to_fermi,
    tangent_to_fermi,
)
from .hexagon import pants_from_lengths

__all__ = [
    "FNEdge",
    "FenchelNielsen",
    "CylinderPiece",
    "PairingRecord",
    "SurfaceDecomposition",
    "CollocationSet",
    "cut_pants_to_cylinder_piece",
    "assemble_surface",
    "collocate",
    "fenchel_nielsen_from_config",
    "bolza_fenchel_nielsen",
]

# Gluing convention constants, calibrated on the Bolza spectrum: with all
# circle parameterizations running interior-on-the-left and based at seam
# feet, the quoted Fenchel-Nielsen tuples of the Bolza surface reproduce
# its lambda_1 (multiplicity 3) with twists entering as delta = -tw * ell.
ALIGN0_FRAC = 0.0
TWIST_SIGN = -1.0


@dataclass(frozen=True)
class FNEdge:
    u: int
    slot_u: int
    w: int
    slot_w: int
    length: float
    twist: float  # fraction of length, mod 1


@dataclass(frozen=True)
class FenchelNielsen:
    """Trivalent gluing graph with per-edge length and twist.

    vertices are 0..2g-3; each vertex's three slots must be covered by
    edge ends exactly once, slot 0 being the circle cut out as the
    cylinder core of that piece.
    """

    genus: int
    edges: tuple

    def __post_init__(self):
        g = self.genus
        if g < 2:
            raise ValueError("genus must be >= 2")
        n_v, n_e = 2 * g - 2, 3 * g - 3
        if len(self.edges) != n_e:
            raise ValueError(f"need {n_e} edges for genus {g}")
        seen = set()
        for e in self.edges:
            for v, slot in ((e.u, e.slot_u), (e.w, e.slot_w)):
                if not (0 <= v < n_v and 0 <= slot < 3):
                    raise ValueError(f"bad edge end ({v}, {slot})")
                if (v, slot) in seen:
                    raise ValueError(f"slot ({v}, {slot}) used twice")
                seen.add((v, slot))
            if e.length <= 0:
                raise ValueError("edge lengths must be positive")
        if len(seen) != 3 * n_v:
            raise ValueError("every vertex needs exactly three edge ends")
        # connectivity
        adj = {v: set() for v in range(n_v)}
        for e in self.edges:
            adj[e.u].add(e.w)
            adj[e.w].add(e.u)
        reach, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in reach:
                    reach.add(w)
                    stack.append(w)
        if len(reach) != n_v:
            raise ValueError("gluing graph is not connected")

    def slot_lengths(self, v):
        out = [None, None, None]
        for e in self.edges:
            if e.u == v:
                out[e.slot_u] = e.length
            if e.w == v:
                out[e.slot_w] = e.length
        return tuple(out)


class _Arc:
    """Geodesic arc in a piece chart, through its half-plane lift.

    sigma in [0, length] is arclength from the start point; `mirrored`
    applies the chart mirror (rho, t) -> (rho, -t).  `normal_sign` chooses
    which of the two metric normals is outward for the piece.
    """

    def __init__(self, geo, s_start, s_end, mirrored=False):
        self.geo = geo
        self.s_start = s_start
        self.s_end = s_end
        self.length = abs(s_end - s_start)
        self.dir = 1.0 if s_end >= s_start else -1.0
        self.mirrored = mirrored
        self.normal_sign = 1.0  # set by the piece after a membership probe

    def _lift_param(self, sigma):
        return self.s_start + self.dir * sigma

    def point(self, sigma):
        z = self.geo.point(self._lift_param(sigma))
        rho, t = halfplane_to_fermi(z)
        return (rho, -t) if self.mirrored else (rho, t)

    def point_and_normal(self, sigma):
        s = self._lift_param(sigma)
        z = self.geo.point(s)
        dz = self.geo.tangent(s)
        rho, t = halfplane_to_fermi(z)
        t_rho, t_t = tangent_to_fermi(z, dz)
        t_rho, t_t = self.dir * t_rho, self.dir * t_t
        # rotate the unit tangent by -90 deg in the Fermi metric
        ch = math.cosh(rho)
        n_rho, n_t = ch * t_t, -t_rho / ch
        n_rho, n_t = self.normal_sign * n_rho, self.normal_sign * n_t
        if self.mirrored:
            return (rho, -t), (n_rho, -n_t)
        return (rho, t), (n_rho, n_t)

    def max_abs_rho(self):
        return self.geo.rho_extrema(self.s_start, self.s_end)


class CylinderPiece:
    """Cut-open pair of pants inside its cylinder Fermi chart.

    slot 0 is the core circle (length ell_core = 2 a1); slots 1 and 2 are
    the other two pants circles, each appearing in the chart as one
    geodesic arc of full circle length, cut at the seam foot.
    """

    def __init__(self, piece_id, lengths):
        self.piece_id = piece_id
        self.lengths = tuple(float(x) for x in lengths)
        pants = pants_from_lengths(*self.lengths)
        self.pants = pants
        hx = pants.hexagon
        self.hexagon = hx
        self.a = hx.a
        self.b = hx.b
        self.core_length = 2.0 * hx.a[0]
        v = hx.vertices
        self.vertices_chart = tuple(halfplane_to_fermi(z) for z in v)

        # boundary arcs (unmirrored halves); side i runs v_{i+1} -> v_{i+2}
        def arc_between(z_from, z_to, mirrored=False):
            geo = geodesic_through(z_from, z_to)
            return _Arc(geo, geo.param_of(z_from), geo.param_of(z_to), mirrored)

        # circle slot 1: base at v3, towards v4 (sigma in [0, a2])
        self.circ_half = {1: arc_between(v[2], v[3]), 2: arc_between(v[5], v[4])}
        self.circ_half_m = {
            1: arc_between(v[2], v[3], mirrored=True),
            2: arc_between(v[5], v[4], mirrored=True),
        }
        # seam: v4 -> v5 and its mirror
        self.seam = arc_between(v[3], v[4])
        self.seam_m = arc_between(v[3], v[4], mirrored=True)
        self._orient_normals()
        rho_arcs = [self.circ_half[1], self.circ_half[2], self.seam]
        self.rho_max = max(a.max_abs_rho() for a in rho_arcs) + 0.1
        # normalize every glued-circle parameterization to run with the
        # piece interior on the left (slots 1, 2 flip into the mirrored
        # half first when the as-built arc runs the other way)
        self._circ_flip = {1: False, 2: False}
        for slot in (1, 2):
            self._circ_flip[slot] = not self._interior_left_probe(slot)
            if not self._interior_left_probe(slot):
                raise RuntimeError("circle orientation normalization failed")

    def _interior_left_probe(self, slot, frac=0.3, h=1e-6, eps=1e-5):
        s0 = frac * self.circle_length(slot)
        (r1, t1), _ = self.circle_point_and_normal(slot, s0)
        (r2, t2), _ = self.circle_point_and_normal(slot, s0 + h)
        dr, dt = r2 - r1, t2 - t1
        nrm = math.sqrt(dr * dr + math.cosh(r1) ** 2 * dt * dt)
        tr, tt = dr / nrm, dt / nrm
        # left normal = tangent rotated by +90 degrees in the Fermi metric
        lr, lt = -math.cosh(r1) * tt, tr / math.cosh(r1)
        return self.contains(r1 + eps * lr, t1 + eps * lt)

    def _orient_normals(self):
        # choose each arc's outward normal by probing membership just off
        # the arc midpoint
        for arc in (self.circ_half[1], self.circ_half[2], self.seam,
                    self.circ_half_m[1], self.circ_half_m[2], self.seam_m):
            (rho, t), (n_rho, n_t) = arc.point_and_normal(0.5 * arc.length)
            eps = 1e-6
            if self.contains(rho + eps * n_rho, t + eps * n_t):
                arc.normal_sign = -arc.normal_sign
            # verify: stepping inward must land inside
            (rho, t), (n_rho, n_t) = arc.point_and_normal(0.5 * arc.length)
            if not self.contains(rho - eps * n_rho, t - eps * n_t):
                raise RuntimeError("outward-normal orientation probe failed")

    def contains(self, rho, t, margin=1e-12):
        """Membership in the piece (t taken mod the core length)."""
        a1 = self.a[0]
        t = (t + a1) % (2.0 * a1) - a1  # into [-a1, a1)
        if t < 0:
            t = -t
        z = fermi_to_halfplane(rho, t)
        return self.hexagon.contains(z, margin=margin)

    def area_quadrature(self, n_nodes=64):
        """Area by Green's theorem: integral of sinh(rho) dt over the
        outer circuit v3 -> v4 -> v5 -> v6 and its mirror (the core circle
        contributes nothing at rho = 0, and the b2/b3 sides of the hexagon
        lie on t = const so they contribute nothing either).  The mirror
        half doubles the unmirrored circuit by symmetry."""
        nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
        total = 0.0
        # circuit direction: a2 (v3->v4), seam (v4->v5), a3 reversed (v5->v6)
        for arc, orient in (
            (self.circ_half[1], 1.0),
            (self.seam, 1.0),
            (self.circ_half[2], -1.0),
        ):
            s0, s1 = arc.s_start, arc.s_end
            sm, sr = 0.5 * (s0 + s1), 0.5 * (s1 - s0)
            for u, w in zip(nodes, weights):
                s = sm + sr * u
                z = arc.geo.point(s)
                dz = arc.geo.tangent(s)
                rho, _ = halfplane_to_fermi(z)
                _, dt = tangent_to_fermi(z, dz)
                total += orient * w * sr * math.sinh(rho) * dt
        return 2.0 * abs(total)

    # -- glued-circle parameterization ---------------------------------
    # f(s), s in [0, ell): arclength, piece interior on the left, base
    # point at a seam foot (slot 0: foot of the seam to slot 2 at t = 0;
    # slots 1, 2: the foot of the seam to the core circle).

    def circle_length(self, slot):
        return 2.0 * self.a[slot]

    def circle_point_and_normal(self, slot, s):
        ell = self.circle_length(slot)
        s = s % ell
        if slot == 0:
            t = (-s) % ell  # interior (rho > 0) on the left going -t
            return (0.0, t), (-1.0, 0.0)
        if getattr(self, "_circ_flip", {}).get(slot, False):
            s = (-s) % ell
        half = 0.5 * ell
        if s <= half:
            arc = self.circ_half[slot]
            return arc.point_and_normal(s)
        arc = self.circ_half_m[slot]
        return arc.point_and_normal(ell - s)

    def seam_point_and_normal(self, sigma, mirrored):
        arc = self.seam_m if mirrored else self.seam
        return arc.point_and_normal(sigma)


def cut_pants_to_cylinder_piece(pants, seam_choice, piece_id=0):
    """Cut a pants open along the seam opposite boundary `seam_choice`;
    that boundary becomes the cylinder core."""
    ells = pants.boundary_lengths
    if seam_choice not in (0, 1, 2):
        raise ValueError("seam_choice must be a boundary index 0..2")
    order = (seam_choice, (seam_choice + 1) % 3, (seam_choice + 2) % 3)
    return CylinderPiece(piece_id, tuple(ells[i] for i in order))


@dataclass
class PairingRecord:
    """One glued interface circle or seam, cut into smooth segments.

    kind is "circle" (side_plus/side_minus are (piece_index, slot)) or
    "seam" (both sides are the same piece's seam copies).  For circles the
    identification is f_plus(s) = f_minus(delta - s); segments is a list
    of (s_lo, s_hi) intervals between corner points.
    """

    kind: str
    side_plus: tuple
    side_minus: tuple
    length: float
    delta: float
    segments: list


class SurfaceDecomposition:
    def __init__(self, genus, pieces, pairings, fn=None):
        self.genus = genus
        self.pieces = pieces
        self.pairings = pairings
        self.fn = fn

    def total_area(self):
        return sum(p.area_quadrature() for p in self.pieces)

    @property
    def volume(self):
        return 4.0 * math.pi * (self.genus - 1)

    def interface_length(self):
        return sum(r.length for r in self.pairings)

    def check_invariants(self, tol_area=1e-8, tol_len=1e-10):
        area = self.total_area()
        expect = 4.0 * math.pi * (self.genus - 1)
        if abs(area - expect) > tol_area * expect:
            raise RuntimeError(f"area mismatch: {area} vs {expect}")
        for rec in self.pairings:
            if rec.kind == "circle":
                pu, su = rec.side_plus
                pw, sw = rec.side_minus
                lu = self.pieces[pu].circle_length(su)
                lw = self.pieces[pw].circle_length(sw)
                if abs(lu - lw) > tol_len:
                    raise RuntimeError(f"paired circle lengths differ: {lu} {lw}")
        return area


def _corner_partition(length, delta):
    """Cut the circle coordinate s in [0, ell) at the seam feet of both
    sides: {0, ell/2} from the plus side and {delta, delta - ell/2} from
    the minus side."""
    cs = {0.0, 0.5 * length, delta % length, (delta - 0.5 * length) % length}
    cs = sorted(cs)
    merged = []
    for c in cs:
        if not merged or c - merged[-1] > 1e-9:
            merged.append(c)
    if merged and (length - merged[-1]) + merged[0] < 1e-9:
        merged.pop()
    segments = []
    for i, lo in enumerate(merged):
        hi = merged[i + 1] if i + 1 < len(merged) else merged[0] + length
        segments.append((lo, hi))
    return segments


def assemble_surface(fn):
    """Build the SurfaceDecomposition for Fenchel-Nielsen data."""
    pieces = []
    for v in range(2 * fn.genus - 2):
        pieces.append(CylinderPiece(v, fn.slot_lengths(v)))
    pairings = []
    for e in fn.edges:
        ell = e.length
        delta = (ALIGN0_FRAC + TWIST_SIGN * e.twist) * ell
        side_plus, side_minus = (e.u, e.slot_u), (e.w, e.slot_w)
        if (e.w, e.slot_w) < (e.u, e.slot_u):
            side_plus, side_minus = side_minus, side_plus
            # f_u(s) = f_w(delta - s) is symmetric under swapping sides
        pairings.append(
            PairingRecord(
                kind="circle",
                side_plus=side_plus,
                side_minus=side_minus,
                length=ell,
                delta=delta,
                segments=_corner_partition(ell, delta),
            )
        )
    for p in pieces:
        pairings.append(
            PairingRecord(
                kind="seam",
                side_plus=(p.piece_id, "seam"),
                side_minus=(p.piece_id, "seam_mirror"),
                length=p.b[0],
                delta=0.0,
                segments=[(0.0, p.b[0])],
            )
        )
    dec = SurfaceDecomposition(fn.genus, pieces, pairings, fn=fn)
    dec.check_invariants()
    return dec


@dataclass
class CollocationSet:
    """Paired interface samples with outward normals and weights.

    Arrays are aligned: sample q lives on piece piece_plus[q] at
    (rho_plus[q], t_plus[q]) with outward unit normal
    (nrho_plus[q], nt_plus[q]), and identically for the minus side.
    weight[q] is the arclength weight of the midpoint rule.
    """

    piece_plus: np.ndarray
    rho_plus: np.ndarray
    t_plus: np.ndarray
    nrho_plus: np.ndarray
    nt_plus: np.ndarray
    piece_minus: np.ndarray
    rho_minus: np.ndarray
    t_minus: np.ndarray
    nrho_minus: np.ndarray
    nt_minus: np.ndarray
    weight: np.ndarray
    pairing_index: np.ndarray

    def __len__(self):
        return len(self.weight)


def collocate(dec, points_per_unit_length):
    """Midpoint samples on every interface segment (corners excluded)."""
    if points_per_unit_length <= 0:
        raise ValueError("collocation density must be positive")
    rows = {k: [] for k in (
        "pp", "rp", "tp", "np_r", "np_t", "pm", "rm", "tm", "nm_r", "nm_t",
        "w", "idx")}
    for i_rec, rec in enumerate(dec.pairings):
        for (lo, hi) in rec.segments:
            seg = hi - lo
            n_q = max(1, int(round(points_per_unit_length * seg)))
            h = seg / n_q
            for j in range(n_q):
                s = lo + (j + 0.5) * h
                if rec.kind == "circle":
                    pu, su = rec.side_plus
                    pw, sw = rec.side_minus
                    (rho_p, t_p), n_p = dec.pieces[pu].circle_point_and_normal(su, s)
                    (rho_m, t_m), n_m = dec.pieces[pw].circle_point_and_normal(
                        sw, rec.delta - s
                    )
                else:
                    p = rec.side_plus[0]
                    (rho_p, t_p), n_p = dec.pieces[p].seam_point_and_normal(s, False)
                    (rho_m, t_m), n_m = dec.pieces[p].seam_point_and_normal(s, True)
                    pu = pw = p
                rows["pp"].append(pu)
                rows["rp"].append(rho_p)
                rows["tp"].append(t_p)
                rows["np_r"].append(n_p[0])
                rows["np_t"].append(n_p[1])
                rows["pm"].append(pw)
                rows["rm"].append(rho_m)
                rows["tm"].append(t_m)
                rows["nm_r"].append(n_m[0])
                rows["nm_t"].append(n_m[1])
                rows["w"].append(h)
                rows["idx"].append(i_rec)
    return CollocationSet(
        piece_plus=np.array(rows["pp"], dtype=int),
        rho_plus=np.array(rows["rp"]),
        t_plus=np.array(rows["tp"]),
        nrho_plus=np.array(rows["np_r"]),
        nt_plus=np.array(rows["np_t"]),
        piece_minus=np.array(rows["pm"], dtype=int),
        rho_minus=np.array(rows["rm"]),
        t_minus=np.array(rows["tm"]),
        nrho_minus=np.array(rows["nm_r"]),
        nt_minus=np.array(rows["nm_t"]),
        weight=np.array(rows["w"]),
        pairing_index=np.array(rows["idx"], dtype=int),
    )


def fenchel_nielsen_from_config(cfg):
    """FenchelNielsen from a config dict: {"genus": g, "edges": [
    {"u": 0, "slot_u": 0, "w": 1, "slot_w": 0, "length": L, "twist": tw},
    ...]}."""
    edges = tuple(
        FNEdge(
            u=int(e["u"]),
            slot_u=int(e["slot_u"]),
            w=int(e["w"]),
            slot_w=int(e["slot_w"]),
            length=float(e["length"]),
            twist=float(e["twist"]),
        )
        for e in cfg["edges"]
    )
    return FenchelNielsen(genus=int(cfg["genus"]), edges=edges)


def bolza_fenchel_nielsen(variant="mw"):
    """Fenchel-Nielsen data of the Bolza surface.

    "mw": (2 arccosh(3 + 2 sqrt 2), 1/2; 2 arccosh(1 + sqrt 2), 0;
           2 arccosh(1 + sqrt 2), 0) on the theta graph.
    "symmetric": all lengths 2 arccosh(1 + sqrt 2), all twists
           arccosh(sqrt(2/7 (3 + sqrt 2))) / arccosh(1 + sqrt 2).
    """
    s2 = math.sqrt(2.0)
    if variant == "mw":
        l1 = 2.0 * math.acosh(3.0 + 2.0 * s2)
        l2 = 2.0 * math.acosh(1.0 + s2)
        data = [(l1, 0.5), (l2, 0.0), (l2, 0.0)]
    elif variant == "symmetric":
        ls = 2.0 * math.acosh(1.0 + s2)
        tw = math.acosh(math.sqrt(2.0 / 7.0 * (3.0 + s2))) / math.acosh(1.0 + s2)
        data = [(ls, tw)] * 3
    else:
        raise ValueError(f"unknown Bolza variant {variant!r}")
    edges = tuple(
        FNEdge(u=0, slot_u=i, w=1, slot_w=i, length=length, twist=tw)
        for i, (length, tw) in enumerate(data)
    )
    return FenchelNielsen(genus=2, edges=edges)
