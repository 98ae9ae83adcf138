"""Bolza surface group and primitive geodesic length spectrum.

The Bolza surface is the quotient of the hyperbolic plane by the Fuchsian
group generated by the four side-pairing translations of the regular
geodesic octagon with corners 2^(-1/4) exp(i pi k / 4) (opposite sides
identified).  In the disc model the generators are SU(1,1) matrices

    A_j = [[alpha, beta_j], [conj(beta_j), alpha]],
    alpha = 1 + sqrt(2),  beta_j = sqrt(2 + 2 sqrt 2) e^{i (pi/8 + j pi/4)},

translations by 2 arccosh(1 + sqrt 2) along the axes through the octagon
center perpendicular to the side pairs.

Closed geodesics correspond to conjugacy classes of hyperbolic elements;
the length satisfies 2 cosh(l/2) = |tr|.  Classes are enumerated as
cyclically reduced words, deduplicated by the lexicographically minimal
rotation of the word and its inverse, and then by half-relator swaps
(Dehn's conjugacy algorithm for this small-cancellation presentation).
Multiplicities count oriented classes: gamma and gamma^{-1} describe the
same geodesic with opposite orientations and both enter trace-formula
sums, so each unoriented word class contributes two.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LengthSpectrum",
    "bolza_generators",
    "octagon_vertices",
    "bolza_group_elements",
    "bolza_length_spectrum",
    "write_length_spectrum",
    "read_length_spectrum",
]

_ALPHA = 1.0 + math.sqrt(2.0)
_BETA_ABS = math.sqrt(2.0 + 2.0 * math.sqrt(2.0))


@dataclass(frozen=True)
class LengthSpectrum:
    """Primitive geodesic lengths with (oriented) multiplicities.

    entries: ascending list of (length, multiplicity); l_max is the
    enumeration cutoff; tail_certified means the word search terminated
    with its exhaustiveness margin satisfied below l_max.
    """

    entries: tuple
    l_max: float
    tail_certified: bool

    def __post_init__(self):
        prev = 0.0
        for ell, mult in self.entries:
            if ell <= prev:
                raise ValueError("lengths must be strictly increasing")
            if ell > self.l_max + 1e-9:
                raise ValueError("entry beyond l_max")
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")
            prev = ell

    @property
    def systole(self):
        return self.entries[0][0] if self.entries else float("inf")


def bolza_generators():
    """Eight letters: A_0..A_3 then their inverses (letter i+4)."""
    gens = []
    for j in range(4):
        phase = math.pi / 8.0 + j * math.pi / 4.0
        beta = _BETA_ABS * complex(math.cos(phase), math.sin(phase))
        gens.append(np.array([[_ALPHA, beta], [beta.conjugate(), _ALPHA]]))
    for j in range(4):
        a = gens[j]
        gens.append(np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]))
    return gens


def octagon_vertices():
    r = 2.0 ** (-0.25)
    return [r * complex(math.cos(k * math.pi / 4), math.sin(k * math.pi / 4))
            for k in range(8)]


def _inv_letter(i):
    return (i + 4) % 8


def _inverse_word(w):
    return tuple(_inv_letter(x) for x in reversed(w))


def _rotations(w):
    return [w[i:] + w[:i] for i in range(len(w))]


def _canonical(w):
    cands = _rotations(w) + _rotations(_inverse_word(w))
    return min(cands)


def _is_proper_power(w):
    n = len(w)
    for p in range(1, n):
        if n % p == 0 and w == w[p:] + w[:p]:
            return True
    return False


def _relator_swap_rules():
    """4-gram substitution rules u -> v with u v^{-1} a relator.

    The octagon relator r = A0 A1^-1 A2 A3^-1 A0^-1 A1 A2^-1 A3 (verified
    to be +-identity in the tests); every rotation of r and r^-1 splits
    into halves u v with u = v^{-1} in the group, giving the Dehn swap
    u -> reverse-invert(v)."""
    r = (0, 5, 2, 7, 4, 1, 6, 3)
    rules = {}
    for base in (r, _inverse_word(r)):
        for rot in _rotations(base):
            u, v = rot[:4], rot[4:]
            rules[u] = _inverse_word(v)
    return rules


_SWAP_RULES = _relator_swap_rules()


def _forbidden_gram_table():
    """Boolean table over 5-letter windows (base-8 codes): True when the
    window is 5 consecutive letters of a cyclic relator, i.e. more than
    half the octagon relation.  Words containing one are not Dehn-minimal
    (the window can be replaced by the complementary 3 letters), so their
    conjugacy classes are already represented by shorter words."""
    r = (0, 5, 2, 7, 4, 1, 6, 3)
    table = np.zeros(8**5, dtype=bool)
    for base in (r, _inverse_word(r)):
        doubled = base + base
        for i in range(8):
            gram = doubled[i : i + 5]
            code = 0
            for g in reversed(gram):
                code = code * 8 + g
            table[code] = True
    return table


_FORBIDDEN5 = _forbidden_gram_table()


def _gram_codes(words, positions):
    """Base-8 codes of the cyclic 5-windows starting at the given
    positions (array broadcasting over words)."""
    n = words.shape[1]
    codes = np.zeros((words.shape[0], len(positions)), dtype=np.int64)
    for j, p in enumerate(positions):
        code = np.zeros(words.shape[0], dtype=np.int64)
        for k in reversed(range(5)):
            code = code * 8 + words[:, (p + k) % n]
        codes[:, j] = code
    return codes


def _cyclically_irreducible(w):
    """True when the cyclic word is freely reduced and contains no window
    of more than half a relator (i.e. it is cyclically Dehn-minimal)."""
    n = len(w)
    for i in range(n):
        if w[(i + 1) % n] == _inv_letter(w[i]):
            return False
    if n >= 5:
        doubled = w + w
        for i in range(n):
            gram = doubled[i : i + 5]
            code = 0
            for g in reversed(gram):
                code = code * 8 + g
            if _FORBIDDEN5[code]:
                return False
    return True


def _swap_closure_canonical(w):
    """(canonical form, closure set, minimal flag) of the cyclic word.

    The closure is taken under rotations, inversion, and half-relator
    swaps (Dehn's conjugacy moves at constant length).  If any swap
    produces a word that cyclically cancels or acquires a more-than-half
    relator window, the class has a shorter minimal form elsewhere and
    the word is flagged non-minimal.

    Note: for words shorter than the relator these moves do not exhaust
    conjugacy (e.g. (0,2,5) ~ (0,5,2) in the group but not under swaps),
    so class deduplication uses the geometric orbit canonicalization
    below; the swap closure remains a cheap pre-merge."""
    seen = set()
    frontier = [_canonical(w)]
    best = frontier[0]
    minimal = True
    while frontier:
        cur = frontier.pop()
        if cur in seen:
            continue
        seen.add(cur)
        best = min(best, cur)
        n = len(cur)
        doubled = cur + cur
        for i in range(n):
            gram = doubled[i : i + 4]
            if gram in _SWAP_RULES:
                repl = _SWAP_RULES[gram]
                new = list(doubled[:n])
                for k in range(4):
                    new[(i + k) % n] = repl[k]
                new = tuple(new)
                if not _cyclically_irreducible(new):
                    minimal = False
                    continue
                cand = _canonical(new)
                if cand not in seen:
                    frontier.append(cand)
    return best, seen, minimal


def _matrix_key(m):
    """PSL(2)-invariant rounded key of an SU(1,1) matrix (sign-normalized
    lexicographically).  Entries of nearby group elements differ at the
    1e-3 scale, far above the 1e-7 rounding."""
    a, b = m[0, 0], m[0, 1]
    v = (a.real, a.imag, b.real, b.imag)
    neg = tuple(-x for x in v)
    if neg < v:
        v = neg
    return tuple(round(x, 7) for x in v)


# circumradius of the fundamental octagon
_R_F = 2.0 * math.atanh(2.0 ** (-0.25))


def _axis_distance(mat, ell):
    """Distance from the disc center to the translation axis, from
    cosh d(0, g.0) = 1 + (cosh l - 1) cosh^2(dist)."""
    cosh_d = 2.0 * abs(mat[0, 0]) ** 2 - 1.0
    v = (cosh_d - 1.0) / (math.cosh(ell) - 1.0)
    return math.acosh(math.sqrt(max(v, 1.0)))


def _conjugator_ball(radius):
    """All group elements with d(0, g.0) <= radius, with inverses."""
    gens = bolza_generators()
    cap = math.cosh(radius)
    seen = {}
    eye = np.eye(2, dtype=complex)
    seen[_matrix_key(eye)] = eye
    frontier = [eye]
    while frontier:
        new = []
        for m in frontier:
            for g in gens:
                mg = m @ g
                if 2.0 * abs(mg[0, 0]) ** 2 - 1.0 > cap:
                    continue
                k = _matrix_key(mg)
                if k not in seen:
                    seen[k] = mg
                    new.append(mg)
        frontier = new
    ball = np.stack(list(seen.values()))
    return ball, np.linalg.inv(ball)


def _reduce_to_corridor(mat, ell, gen_pairs, tol=0.05):
    """Greedy Dirichlet reduction: conjugate by generators until the axis
    passes within the octagon circumradius of the base point."""
    cur = mat
    dist = _axis_distance(cur, ell)
    while dist > _R_F + tol:
        best, best_dist = None, dist
        for g, gi in gen_pairs:
            cand = g @ cur @ gi
            d = _axis_distance(cand, ell)
            if d < best_dist - 1e-12:
                best, best_dist = cand, d
        if best is None:
            raise RuntimeError("axis-corridor reduction stalled")
        cur, dist = best, best_dist
    return cur


def _conjugacy_canonical(mat, ell, gen_pairs, ball, ball_inv, tol=0.05):
    """Canonical key of the (unoriented) conjugacy class of `mat`.

    Two conjugates whose axes pass within the octagon circumradius R_F of
    the base point are related by a conjugator of displacement at most
    2 R_F + ell/2 (map nearest axis point to nearest axis point, sliding
    by the primitive translation), so the minimum of the matrix key over
    ball conjugates restricted to that axis corridor is a class invariant.
    """
    best = None
    inv = np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]])
    cap = 1.0 + (math.cosh(ell) - 1.0) * math.cosh(_R_F + tol) ** 2
    for start in (mat, inv):
        start = _reduce_to_corridor(start, ell, gen_pairs, tol)
        conj = np.einsum("nab,bc,ncd->nad", ball, start, ball_inv)
        keep = 2.0 * np.abs(conj[:, 0, 0]) ** 2 - 1.0 <= cap
        if not np.any(keep):
            raise RuntimeError("conjugator ball too small for this length")
        for c in conj[keep]:
            k = _matrix_key(c)
            if best is None or k < best:
                best = k
    return best


def _displacement(mats):
    """d(0, gamma . 0) in the disc model: arccosh(2 |a|^2 - 1)."""
    a2 = np.abs(mats[:, 0, 0]) ** 2
    return np.arccosh(np.maximum(2.0 * a2 - 1.0, 1.0))


def bolza_group_elements(max_word_length, displacement_cap=None):
    """Cyclic-class representatives as words, level by level.

    The frontier holds freely reduced, linearly Dehn-reduced words (no
    window of more than half a relator), optionally pruned to orbit
    displacement d(0, w.0) <= displacement_cap: Dehn-reduced words are
    geodesic, so prefixes of words whose classes matter stay within the
    corridor of their axes and the cap loses nothing when it exceeds
    l_max + 2 * (octagon circumradius) + slack.  Yields (n, words, mats)
    with the words cyclically reduced and cyclically Dehn-minimal."""
    gens = np.stack(bolza_generators())
    words = np.arange(8, dtype=np.int8).reshape(8, 1)
    mats = gens.copy()
    yield 1, words, mats
    n = 1
    while n < max_word_length and len(words):
        n += 1
        last = words[:, -1]
        new_words = []
        new_mats = []
        for letter in range(8):
            ok = last != _inv_letter(letter)
            if not np.any(ok):
                continue
            w_ext = np.concatenate(
                [words[ok], np.full((int(ok.sum()), 1), letter, dtype=np.int8)],
                axis=1,
            )
            m_ext = mats[ok] @ gens[letter]
            if n >= 5:
                # Dehn pruning: drop words whose trailing window is more
                # than half a relator
                good = ~_FORBIDDEN5[_gram_codes(w_ext, [n - 5])[:, 0]]
                w_ext, m_ext = w_ext[good], m_ext[good]
            if displacement_cap is not None:
                good = _displacement(m_ext) <= displacement_cap
                w_ext, m_ext = w_ext[good], m_ext[good]
            new_words.append(w_ext)
            new_mats.append(m_ext)
        if not new_words:
            return
        words = np.concatenate(new_words)
        mats = np.concatenate(new_mats)
        keep = words[:, 0] != (words[:, -1] + 4) % 8
        if n >= 5:
            # cyclic Dehn minimality: also reject wrap-around windows
            wrap = _gram_codes(words, list(range(n - 4, n)))
            keep &= ~np.any(_FORBIDDEN5[wrap], axis=1)
        yield n, words[keep], mats[keep]
        # the frontier keeps every linearly Dehn-reduced freely reduced
        # word: prefixes of longer minimal words are exactly these


def bolza_length_spectrum(l_max, max_word_length=24, corridor=2.0, slack=2.5):
    """Primitive length spectrum of the Bolza surface below l_max.

    Enumerates cyclically Dehn-minimal words with orbit displacement at
    most l_max + 2 * corridor + slack.  Every class of length <= l_max has
    all rotations of its minimal words inside d <= l_max + 2 * corridor
    (axis within `corridor` of the base point for some fundamental-domain
    crossing); the extra `slack` guards the prefix corridor.  The search
    terminates when the pruned frontier dies out; tail_certified is set
    when no accepted candidate came within `slack` of the cap (so the cap
    was not binding on actual data).
    """
    if l_max <= 0:
        raise ValueError("l_max must be positive")
    if l_max > 12:
        raise ValueError("l_max > 12 is intractable at desk scale")
    cap = l_max + 2.0 * corridor + slack
    gens = bolza_generators()
    gen_pairs = [(g, gens[_inv_letter(i)]) for i, g in enumerate(gens)]
    ball, ball_inv = _conjugator_ball(2.0 * _R_F + 0.5 * l_max + 0.4)
    elements = {}
    classes = {}
    max_cand_disp = 0.0
    for n, words, mats in bolza_group_elements(max_word_length, cap):
        tr = np.abs(mats[:, 0, 0].real + mats[:, 1, 1].real)
        hyper = tr > 2.0 + 1e-12
        lengths = np.full(len(tr), np.inf)
        lengths[hyper] = 2.0 * np.arccosh(tr[hyper] / 2.0)
        short = lengths <= l_max + 1e-9
        if not np.any(short):
            continue
        disp = _displacement(mats[short])
        max_cand_disp = max(max_cand_disp, float(disp.max()))
        for m, ell in zip(mats[short], lengths[short]):
            el_key = _matrix_key(m)
            if el_key in elements:
                continue
            elements[el_key] = True
            cls_key = _conjugacy_canonical(m, float(ell), gen_pairs,
                                           ball, ball_inv)
            if cls_key not in classes:
                classes[cls_key] = (float(ell), m)
    # primitivity: a class is imprimitive iff it is the class of a power
    # of a shorter class
    imprimitive = set()
    for ell, m in classes.values():
        power = m
        k = 1
        while (k + 1) * ell <= l_max + 1e-9:
            k += 1
            power = power @ m
            imprimitive.add(
                _conjugacy_canonical(power, k * ell, gen_pairs, ball, ball_inv)
            )
    by_len = {}
    for key, (ell, _) in classes.items():
        if key in imprimitive:
            continue
        rkey = round(ell, 9)
        by_len[rkey] = by_len.get(rkey, 0) + 2  # both orientations
    entries = tuple(sorted((float(k), mult) for k, mult in by_len.items()))
    tail_certified = max_cand_disp <= cap - slack + 1e-9
    return LengthSpectrum(entries=entries, l_max=l_max,
                          tail_certified=tail_certified)


def write_length_spectrum(path, spectrum):
    """Text format: header `L_MAX <value>`, then `<length> <multiplicity>`
    per line, ascending; `#` starts a comment."""
    with open(path, "w") as fh:
        fh.write("# primitive geodesic length spectrum\n")
        fh.write(f"L_MAX {spectrum.l_max:.12g}\n")
        if not spectrum.tail_certified:
            fh.write("# WARNING: enumeration below L_MAX not certified\n")
        for ell, mult in spectrum.entries:
            fh.write(f"{ell:.12f} {mult}\n")


def read_length_spectrum(path):
    l_max = None
    entries = []
    certified = True
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.upper().startswith("L_MAX"):
                l_max = float(line.split()[1])
                continue
            ell, mult = line.split()
            entries.append((float(ell), int(mult)))
    if l_max is None:
        raise ValueError("length-spectrum file lacks an L_MAX header")
    return LengthSpectrum(entries=tuple(sorted(entries)), l_max=l_max,
                          tail_certified=certified)
