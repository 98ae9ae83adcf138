import math

import numpy as np
import pytest

from hypspec.geometry import bolza as bz

L0 = 2.0 * math.acosh(1.0 + math.sqrt(2.0))


def mobius(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def test_generators_are_su11_unit_det():
    for g in bz.bolza_generators():
        assert abs(np.linalg.det(g) - 1.0) < 1e-12
        assert abs(g[0, 0] - np.conj(g[1, 1])) < 1e-14
        assert abs(g[0, 1] - np.conj(g[1, 0])) < 1e-14


def test_side_pairing_maps_sides():
    gens = bz.bolza_generators()
    v = bz.octagon_vertices()
    for j in range(4):
        img0 = mobius(gens[j], v[(j + 4) % 8])
        img1 = mobius(gens[j], v[(j + 5) % 8])
        err = min(
            abs(img0 - v[j]) + abs(img1 - v[(j + 1) % 8]),
            abs(img0 - v[(j + 1) % 8]) + abs(img1 - v[j]),
        )
        assert err < 1e-10


def test_octagon_relator_is_identity():
    gens = bz.bolza_generators()
    m = np.eye(2, dtype=complex)
    for letter in (0, 5, 2, 7, 4, 1, 6, 3):
        m = m @ gens[letter]
    assert np.max(np.abs(m - np.eye(2))) < 1e-9


def test_generator_translation_length():
    gens = bz.bolza_generators()
    tr = abs((gens[0][0, 0] + gens[0][1, 1]).real)
    assert abs(2.0 * math.acosh(tr / 2.0) - L0) < 1e-12


def test_systole_and_certification():
    spec = bz.bolza_length_spectrum(4.0)
    assert spec.tail_certified
    assert abs(spec.systole - L0) < 1e-9
    # 12 unoriented systole geodesics, counted with both orientations
    assert spec.entries[0][1] == 24


def test_systole_multiplicity_small_word_oracle():
    # exhaustive words up to length 3 with |tr| = 2 + 2 sqrt2 and a
    # brute-force pairwise conjugation test over a matrix ball
    gens = bz.bolza_generators()
    target = 2.0 + 2.0 * math.sqrt(2.0)
    mats = []
    for n, words, mats_level in bz.bolza_group_elements(3):
        tr = np.abs(mats_level[:, 0, 0].real + mats_level[:, 1, 1].real)
        for w, m in zip(words[np.abs(tr - target) < 1e-9],
                        mats_level[np.abs(tr - target) < 1e-9]):
            mats.append(m)
    # ball of conjugators out to displacement 2 R_F + l0/2 + margin
    ball, ball_inv = bz._conjugator_ball(2.0 * bz._R_F + 0.5 * L0 + 0.4)
    keys = set()
    gp = [(g, gens[bz._inv_letter(i)]) for i, g in enumerate(gens)]
    for m in mats:
        keys.add(bz._conjugacy_canonical(m, L0, gp, ball, ball_inv))
    # single letters alone give 4 distinct unoriented classes; with the
    # length-3 words the full count is 12 (all systoles arise by length 3)
    assert len(keys) == 12


def test_lengths_below_6():
    spec = bz.bolza_length_spectrum(6.0)
    entries = dict(
        (round(ell, 6), mult) for ell, mult in spec.entries
    )
    # cosh(l/2) of the first distinct lengths: 1+s2, 3+2 s2, 5+3 s2
    s2 = math.sqrt(2.0)
    expected = {
        round(2 * math.acosh(1 + s2), 6): 24,
        round(2 * math.acosh(3 + 2 * s2), 6): 24,
        round(2 * math.acosh(5 + 3 * s2), 6): 48,
    }
    assert entries == expected


def test_imprimitive_powers_excluded():
    spec = bz.bolza_length_spectrum(6.5)
    # 2 * l0 = 6.114... is the square of the systole class; it must not
    # appear as a primitive entry
    for ell, _ in spec.entries:
        assert abs(ell - 2.0 * L0) > 1e-6


def test_non_hyperbolic_words_skipped():
    # elliptic/identity words contribute nothing: all entries have
    # genuine hyperbolic lengths
    spec = bz.bolza_length_spectrum(4.0)
    for ell, _ in spec.entries:
        assert ell > 3.0


def test_length_spectrum_validation():
    with pytest.raises(ValueError):
        bz.bolza_length_spectrum(-1.0)
    with pytest.raises(ValueError):
        bz.bolza_length_spectrum(13.0)
    with pytest.raises(ValueError):
        bz.LengthSpectrum(entries=((2.0, 2), (1.0, 2)), l_max=4.0,
                          tail_certified=True)


def test_file_round_trip(tmp_path):
    spec = bz.bolza_length_spectrum(5.0)
    path = tmp_path / "lengths.txt"
    bz.write_length_spectrum(path, spec)
    back = bz.read_length_spectrum(path)
    assert back.l_max == spec.l_max
    assert len(back.entries) == len(spec.entries)
    for (l1, m1), (l2, m2) in zip(back.entries, spec.entries):
        assert abs(l1 - l2) < 1e-10
        assert m1 == m2


def test_read_rejects_headerless_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3.0571 24\n")
    with pytest.raises(ValueError):
        bz.read_length_spectrum(path)
