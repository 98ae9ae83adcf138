import math

import numpy as np
import pytest

from hypspec.geometry import halfplane as hp
from hypspec.geometry.hexagon import (Pants, connecting_sides,
                                      pants_from_lengths,
                                      right_angled_hexagon)
from hypspec.geometry.surface import (CylinderPiece, FenchelNielsen, FNEdge,
                                      assemble_surface,
                                      bolza_fenchel_nielsen, collocate,
                                      cut_pants_to_cylinder_piece,
                                      fenchel_nielsen_from_config)

A_BOLZA = math.acosh(1.0 + math.sqrt(2.0))


# -- half-plane primitives ------------------------------------------------


def test_chart_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(50):
        rho, t = rng.uniform(-2, 2), rng.uniform(-3, 3)
        z = hp.fermi_to_halfplane(rho, t)
        rho2, t2 = hp.halfplane_to_fermi(z)
        assert abs(rho - rho2) < 1e-12 and abs(t - t2) < 1e-12


def test_tangent_pushforward_isometric():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rho, t = rng.uniform(-2, 2), rng.uniform(-3, 3)
        z = hp.fermi_to_halfplane(rho, t)
        dz = complex(*rng.uniform(-1, 1, 2))
        dr, dt = hp.tangent_to_fermi(z, dz)
        fermi_norm2 = dr * dr + math.cosh(rho) ** 2 * dt * dt
        hyper_norm2 = abs(dz) ** 2 / z.imag**2
        assert abs(fermi_norm2 - hyper_norm2) < 1e-11 * hyper_norm2


def test_geodesic_parameterization_unit_speed():
    for geo in (hp.Geodesic(0.7, 1.3), hp.Geodesic(-0.2, None)):
        s = np.linspace(-1.0, 1.0, 11)
        for s0, s1 in zip(s[:-1], s[1:]):
            d = hp.dist(geo.point(s0), geo.point(s1))
            assert abs(d - (s1 - s0)) < 1e-10


def test_geodesic_through_and_param():
    rng = np.random.default_rng(2)
    for _ in range(30):
        z1 = complex(rng.uniform(-2, 2), rng.uniform(0.2, 3.0))
        z2 = complex(rng.uniform(-2, 2), rng.uniform(0.2, 3.0))
        geo = hp.geodesic_through(z1, z2)
        s1, s2 = geo.param_of(z1), geo.param_of(z2)
        assert abs(abs(s2 - s1) - hp.dist(z1, z2)) < 1e-9


# -- hexagons and pants ---------------------------------------------------


def test_symmetric_hexagon_equal_sides():
    b = connecting_sides(0.8, 0.8, 0.8)
    assert abs(b[0] - b[1]) < 1e-14 and abs(b[1] - b[2]) < 1e-14


def test_bolza_hexagon_closure_and_sides():
    hexagon = right_angled_hexagon(A_BOLZA, A_BOLZA, A_BOLZA)
    assert abs(hexagon.b[0] - math.acosh(1.0 + math.sqrt(2.0) / 2.0)) < 1e-12
    for i in range(6):
        v0 = hexagon.vertices[i]
        v1 = hexagon.vertices[(i + 1) % 6]
        assert abs(hp.dist(v0, v1) - hexagon.side_lengths[i]) < 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_hexagon_right_angles(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.4, 2.5, 3)
    hexagon = right_angled_hexagon(*a)
    verts = hexagon.vertices
    for i in range(6):
        geo_in = hexagon.side_geodesics[(i - 1) % 6]
        geo_out = hexagon.side_geodesics[i]
        z = verts[i]
        t_in = geo_in.tangent(geo_in.param_of(z))
        t_out = geo_out.tangent(geo_out.param_of(z))
        # hyperbolic angle equals the Euclidean angle between tangents
        cosang = (t_in.real * t_out.real + t_in.imag * t_out.imag) / (
            abs(t_in) * abs(t_out)
        )
        assert abs(cosang) < 1e-10


def test_pants_area_and_boundary_lengths():
    pants = pants_from_lengths(1.3, 2.1, 0.7)
    assert abs(pants.area() - 2.0 * math.pi) < 1e-12
    assert pants.boundary_lengths == (1.3, 2.1, 0.7)
    # boundary length = twice the hexagon a-side by construction
    assert abs(2.0 * pants.hexagon.a[0] - 1.3) < 1e-14


def test_bolza_symmetric_pants_seams():
    ell = 2.0 * A_BOLZA
    pants = pants_from_lengths(ell, ell, ell)
    for b in pants.seam_lengths:
        assert abs(b - math.acosh(1.0 + math.sqrt(2.0) / 2.0)) < 1e-12


# -- cylinder pieces ------------------------------------------------------


def test_cut_pants_preserves_area():
    pants = pants_from_lengths(2.0, 2.5, 3.0)
    piece = cut_pants_to_cylinder_piece(pants, 0)
    assert abs(piece.area_quadrature() - 2.0 * math.pi) < 1e-10
    assert abs(piece.core_length - 2.0) < 1e-14


def test_cut_pants_core_choice():
    pants = pants_from_lengths(2.0, 2.5, 3.0)
    piece = cut_pants_to_cylinder_piece(pants, 2)
    assert abs(piece.core_length - 3.0) < 1e-14
    with pytest.raises(ValueError):
        cut_pants_to_cylinder_piece(pants, 5)


def test_piece_boundary_arcs_are_geodesic():
    # sampled chart points of every boundary arc lift onto the stored
    # half-plane circle (circle-orthogonality residual)
    piece = CylinderPiece(0, (2.0, 2.5, 3.0))
    for arc in (piece.circ_half[1], piece.circ_half[2], piece.seam):
        geo = arc.geo
        for sigma in np.linspace(0.0, arc.length, 9):
            rho, t = arc.point(sigma)
            z = hp.fermi_to_halfplane(rho, abs(t))
            assert abs(geo.side(z)) < 1e-10


def test_piece_outward_normals():
    piece = CylinderPiece(0, (2.0, 2.5, 3.0))
    eps = 1e-5
    for slot in (0, 1, 2):
        for s in np.linspace(0.1, piece.circle_length(slot) - 0.1, 7):
            (rho, t), (nr, nt) = piece.circle_point_and_normal(slot, s)
            norm2 = nr * nr + math.cosh(rho) ** 2 * nt * nt
            assert abs(norm2 - 1.0) < 1e-10
            assert not piece.contains(rho + eps * nr, t + eps * nt)
            assert piece.contains(rho - eps * nr, t - eps * nt)


def test_piece_circle_parameterization_arclength():
    # chart distance equals parameter increments away from the cut point
    # at s = ell/2 (where slots 1, 2 jump between the mirror halves; the
    # circle is continuous on the surface, not in the chart)
    piece = CylinderPiece(0, (2.0, 2.5, 3.0))
    from hypspec.geometry.halfplane import dist_chart

    for slot in (0, 1, 2):
        ell = piece.circle_length(slot)
        s_vals = np.linspace(0.0, ell, 41)
        for s0, s1 in zip(s_vals[:-1], s_vals[1:]):
            if slot != 0 and s0 <= 0.5 * ell <= s1:
                continue
            p0, _ = piece.circle_point_and_normal(slot, s0)
            p1, _ = piece.circle_point_and_normal(slot, s1)
            d = dist_chart(p0, p1, piece.core_length)
            assert abs(d - (s1 - s0)) < 1e-9


# -- Fenchel-Nielsen assembly ---------------------------------------------


def theta_graph(lengths, twists):
    edges = tuple(
        FNEdge(0, i, 1, i, lengths[i], twists[i]) for i in range(3)
    )
    return FenchelNielsen(genus=2, edges=edges)


def dumbbell_graph(lengths, twists):
    # one separating edge (slot 0 of both vertices), one self-loop at each
    edges = (
        FNEdge(0, 0, 1, 0, lengths[0], twists[0]),
        FNEdge(0, 1, 0, 2, lengths[1], twists[1]),
        FNEdge(1, 1, 1, 2, lengths[2], twists[2]),
    )
    return FenchelNielsen(genus=2, edges=edges)


def test_fenchel_nielsen_validation():
    with pytest.raises(ValueError):
        FenchelNielsen(genus=1, edges=())
    with pytest.raises(ValueError):
        theta_graph([1.0, 2.0, -0.5], [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        FenchelNielsen(
            genus=2,
            edges=(
                FNEdge(0, 0, 1, 0, 1.0, 0.0),
                FNEdge(0, 0, 1, 1, 1.0, 0.0),  # slot reused
                FNEdge(0, 2, 1, 2, 1.0, 0.0),
            ),
        )


@pytest.mark.parametrize("seed", range(20))
def test_random_genus2_area(seed):
    rng = np.random.default_rng(100 + seed)
    lengths = rng.uniform(1.2, 5.0, 3)
    twists = rng.uniform(0.0, 1.0, 3)
    fn = theta_graph(lengths, twists) if seed % 2 else dumbbell_graph(
        lengths, twists
    )
    dec = assemble_surface(fn)
    assert abs(dec.total_area() - 4.0 * math.pi) < 1e-8 * 4.0 * math.pi


def test_bolza_variants_assemble():
    for variant in ("mw", "symmetric"):
        dec = assemble_surface(bolza_fenchel_nielsen(variant))
        assert len(dec.pieces) == 2
        assert abs(dec.total_area() - 4.0 * math.pi) < 1e-8


def test_paired_arcs_equal_length():
    dec = assemble_surface(bolza_fenchel_nielsen("mw"))
    for rec in dec.pairings:
        if rec.kind == "circle":
            pu, su = rec.side_plus
            pw, sw = rec.side_minus
            assert abs(
                dec.pieces[pu].circle_length(su)
                - dec.pieces[pw].circle_length(sw)
            ) < 1e-10
    total = sum(r.length for r in dec.pairings)
    circles = sum(e.length for e in dec.fn.edges)
    seams = sum(p.b[0] for p in dec.pieces)
    assert abs(total - circles - seams) < 1e-10


def test_gluing_isometry_along_interface():
    from hypspec.geometry.halfplane import dist_chart

    rng = np.random.default_rng(7)
    dec = assemble_surface(bolza_fenchel_nielsen("symmetric"))
    worst = 0.0
    n_checked = 0
    for rec in dec.pairings:
        if rec.kind != "circle":
            continue
        pu, su = rec.side_plus
        pw, sw = rec.side_minus
        while n_checked < 400:
            # sample inside one smooth segment so neither side's chart
            # jumps across a corner between s and s + ds
            lo, hi = rec.segments[rng.integers(len(rec.segments))]
            ds = rng.uniform(1e-4, 0.02) * (hi - lo)
            s = rng.uniform(lo + 1e-6, hi - ds - 1e-6)
            a0, _ = dec.pieces[pu].circle_point_and_normal(su, s)
            a1, _ = dec.pieces[pu].circle_point_and_normal(su, s + ds)
            b0, _ = dec.pieces[pw].circle_point_and_normal(sw, rec.delta - s)
            b1, _ = dec.pieces[pw].circle_point_and_normal(
                sw, rec.delta - s - ds
            )
            d1 = dist_chart(a0, a1, dec.pieces[pu].core_length)
            d2 = dist_chart(b0, b1, dec.pieces[pw].core_length)
            worst = max(worst, abs(d1 - d2), abs(d1 - ds))
            n_checked += 1
        n_checked = 0
    assert worst < 1e-9


def test_collocation_contracts():
    dec = assemble_surface(bolza_fenchel_nielsen("mw"))
    coll = collocate(dec, 5.0)
    # total point count = sum over segments of round(length * density)
    expect = sum(
        max(1, round(5.0 * (hi - lo)))
        for rec in dec.pairings
        for (lo, hi) in rec.segments
    )
    assert len(coll) == expect
    # unit normals on both sides
    for rho, nt, nr in (
        (coll.rho_plus, coll.nt_plus, coll.nrho_plus),
        (coll.rho_minus, coll.nt_minus, coll.nrho_minus),
    ):
        norm2 = nr**2 + np.cosh(rho) ** 2 * nt**2
        assert np.max(np.abs(norm2 - 1.0)) < 1e-10
    # weights sum to the interface length
    assert abs(np.sum(coll.weight) - dec.interface_length()) < 1e-9
    with pytest.raises(ValueError):
        collocate(dec, -1.0)


def test_constant_function_has_no_jump():
    # D f = f(x+) - f(x-) = 0 and D_n f = 0 for f == 1
    dec = assemble_surface(bolza_fenchel_nielsen("mw"))
    coll = collocate(dec, 4.0)
    ones_plus = np.ones(len(coll))
    ones_minus = np.ones(len(coll))
    assert np.max(np.abs(ones_plus - ones_minus)) == 0.0


def test_config_round_trip():
    fn = theta_graph([2.0, 2.5, 3.0], [0.1, 0.2, 0.3])
    cfg = {
        "genus": 2,
        "edges": [
            {
                "u": e.u,
                "slot_u": e.slot_u,
                "w": e.w,
                "slot_w": e.slot_w,
                "length": e.length,
                "twist": e.twist,
            }
            for e in fn.edges
        ],
    }
    fn2 = fenchel_nielsen_from_config(cfg)
    assert fn2 == fn
