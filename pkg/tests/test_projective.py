import functools
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from regulab.formal import FormalSum, permutation_sign, signed_permutations
from regulab.projective import (
    DegenerateConfiguration,
    ProjConfig,
    ProjPoint,
    abel5_defect,
    apply_linear,
    cross_ratio,
    delta22,
    delta31,
    det,
    gen_cross_ratio_special,
    grassmann_d,
    grassmann_proj_d,
    r3_element,
    special_configuration,
    special_edge_product,
    trilog7_defect,
)
from regulab.symbols import factor

small = st.integers(-9, 9)
nonzero = small.filter(bool)
fractions = st.builds(Fraction, small, st.integers(1, 5))
nonzero_fractions = fractions.filter(bool)


def vector(dim, entries=fractions):
    return st.tuples(*[entries] * dim)


@st.composite
def invertible(draw, dim):
    m = draw(st.lists(vector(dim), min_size=dim, max_size=dim))
    assume(det(m) != 0)
    return m


# ---------------------------------------------------------------- cross-ratio

@given(st.lists(fractions, min_size=4, max_size=4, unique=True), invertible(2))
def test_cross_ratio_pgl2_invariant_exact(zs, g):
    moved = [ProjPoint((z, 1)).transformed(g) for z in zs]
    assert cross_ratio(*moved) == cross_ratio(*zs)


@given(
    st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
    st.lists(st.complex_numbers(min_magnitude=0.2, max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=4, max_size=4),
)
def test_cross_ratio_pgl2_invariant_float(zs, g):
    a, b, c, d = g
    assume(abs(a * d - b * c) > 0.1)
    assume(min(abs(p - q) for i, p in enumerate(zs) for q in zs[i + 1 :]) > 0.05)
    moved = [ProjPoint((z, 1)).transformed([[a, b], [c, d]]) for z in zs]
    ref = cross_ratio(*zs)
    assume(abs(ref) < 1e3)
    assert abs(cross_ratio(*moved) - ref) <= 1e-12 * max(1.0, abs(ref)) * 1e2


@pytest.mark.parametrize("x", [Fraction(2), Fraction(-1, 3), Fraction(7, 5)])
def test_cross_ratio_normal_form(x):
    # golden: with this convention r(inf, 0, 1, x) = x
    assert cross_ratio(None, 0, 1, x) == x


def test_cross_ratio_formula():
    assert cross_ratio(2, 3, 5, 7) == Fraction((2 - 5) * (3 - 7), (2 - 7) * (3 - 5))


def test_cross_ratio_repetition():
    with pytest.raises(DegenerateConfiguration):
        cross_ratio(1, 2, 1, 3)


def test_cross_ratio_on_a_line_in_p2():
    a, b = (Fraction(1), Fraction(2), Fraction(0)), (Fraction(0), Fraction(1), Fraction(1))
    pts = [tuple(s * x + t * y for x, y in zip(a, b)) for s, t in [(1, 0), (0, 1), (1, 1), (1, 3)]]
    assert cross_ratio(*[ProjPoint(p) for p in pts]) == cross_ratio(None, 0, 1, Fraction(1, 3))


# ---------------------------------------------------------------- special configurations

@given(st.integers(2, 4).flatmap(lambda n: st.lists(nonzero_fractions, min_size=n, max_size=n)))
def test_special_cross_ratio_independent_of_edge(weights):
    cfg = special_configuration(len(weights), weights)
    values = {gen_cross_ratio_special(cfg, i) for i in range(len(weights))}
    assert len(values) == 1


def test_special_cross_ratio_fifty_configs():
    rng = random.Random(50)
    for _ in range(50):
        n = rng.choice([3, 4])
        weights = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4)) for _ in range(n)]
        frame = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if det(frame) == 0:
            continue
        cfg = special_configuration(n, weights, frame)
        values = [gen_cross_ratio_special(cfg, i) for i in range(n)]
        assert len(set(values)) == 1 and values[0] == special_edge_product(cfg)


@given(st.integers(2, 4).flatmap(lambda n: st.lists(nonzero_fractions, min_size=n, max_size=n)), st.integers(1, 3))
def test_special_cross_ratio_cyclic(weights, shift):
    n = len(weights)
    cfg = special_configuration(n, weights)
    ls, ms = list(cfg.points[:n]), list(cfg.points[n:])
    k = shift % n
    rolled = ProjConfig(tuple(ls[k:] + ls[:k] + ms[k:] + ms[:k]), cfg.dim)
    assert gen_cross_ratio_special(rolled) == gen_cross_ratio_special(cfg)


@given(st.lists(nonzero_fractions, min_size=2, max_size=2))
def test_special_n2_is_four_point_cross_ratio(weights):
    cfg = special_configuration(2, weights)
    l0, l1, m0, m1 = cfg.points
    assert gen_cross_ratio_special(cfg) == cross_ratio(l0, l1, m0, m1)


@given(st.integers(2, 4).flatmap(lambda n: st.lists(nonzero_fractions, min_size=n, max_size=n)))
def test_edge_product_closed_form(weights):
    n = len(weights)
    expected = Fraction((-1) ** n)
    for w in weights:
        expected *= w
    assert special_edge_product(special_configuration(n, weights)) == expected


def test_special_rejects_non_special():
    cfg = special_configuration(3, [Fraction(1), Fraction(2), Fraction(3)])
    pts = list(cfg.points)
    pts[3] = ProjPoint((1, 1, 1))
    with pytest.raises(DegenerateConfiguration):
        gen_cross_ratio_special(ProjConfig(tuple(pts), 2))


# ---------------------------------------------------------------- r_3

def _generic_six(seed):
    rng = random.Random(seed)
    while True:
        pts = [tuple(Fraction(rng.randint(-6, 6)) for _ in range(3)) for _ in range(6)]
        if all(det([pts[i] for i in t]) != 0 for t in combinations(range(6), 3)):
            return pts


@pytest.mark.parametrize("seed", range(3))
def test_r3_invariant_under_volume_scaling(seed):
    pts = _generic_six(seed)
    base = r3_element(pts)
    scaled = r3_element(pts, volume=lambda a, b, c: Fraction(7, 3) * det([a, b, c]))
    assert base == scaled


@pytest.mark.parametrize("seed", range(3))
def test_r3_invariant_under_sl3(seed):
    pts = _generic_six(seed)
    g = [[Fraction(1), Fraction(2), Fraction(0)], [Fraction(0), Fraction(1), Fraction(-3)], [Fraction(1), Fraction(2), Fraction(1)]]
    assert det(g) == 1
    moved = [ProjPoint(p).transformed(g).coords for p in pts]
    assert r3_element(moved) == r3_element(pts)


def test_r3_is_alternating():
    pts = _generic_six(4)
    swapped = [pts[1], pts[0]] + pts[2:]
    assert r3_element(swapped) == r3_element(pts).scale(-1)


def test_r3_names_degenerate_triple():
    pts = _generic_six(5)
    pts[2] = tuple(a + b for a, b in zip(pts[0], pts[1]))
    with pytest.raises(DegenerateConfiguration, match=r"\(0, 1, 2\)"):
        r3_element(pts)


# ---------------------------------------------------------------- functional equations

def test_abel5_real_points_exactly_zero():
    assert abel5_defect(0.5, -2.0, 3.25, 7.0, -0.125) == 0.0


def test_abel5_repeated_point():
    with pytest.raises(DegenerateConfiguration):
        abel5_defect(1 + 1j, 2j, 1 + 1j, 3, -1)


def test_abel5_random_tuples():
    rng = np.random.default_rng(5)
    for _ in range(100):
        pts = rng.normal(size=5) + 1j * rng.normal(size=5)
        assert abs(abel5_defect(*pts)) < 1e-9


def _complex_seven(rng):
    return [tuple(complex(c) for c in v) for v in rng.normal(size=(7, 3)) + 1j * rng.normal(size=(7, 3))]


def test_trilog7_vanishes_and_is_sl3_invariant():
    rng = np.random.default_rng(7)
    pts = _complex_seven(rng)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    g = g / np.linalg.det(g) ** (1 / 3)
    moved = [tuple(g @ np.array(p)) for p in pts]
    a, b = trilog7_defect(pts), trilog7_defect(moved)
    assert abs(a) < 1e-6 and abs(b) < 1e-6
    assert abs(a - b) < 1e-9


def test_trilog7_degenerate():
    rng = np.random.default_rng(8)
    pts = _complex_seven(rng)
    pts[2] = tuple(x + 2 * y for x, y in zip(pts[0], pts[1]))
    with pytest.raises(DegenerateConfiguration):
        trilog7_defect(pts)


# ---------------------------------------------------------------- Grassmannian complex

gens = st.integers(2, 6).flatmap(lambda k: st.lists(vector(3, nonzero_fractions), min_size=k, max_size=k))


@given(gens)
def test_grassmann_d_squares_to_zero(gen):
    assert grassmann_d(gen).map_linear(grassmann_d) == FormalSum()


def test_grassmann_d_pair():
    a, b = (1, 0), (0, 1)
    assert grassmann_d([a, b]) == FormalSum([((b,), 1), ((a,), -1)])


def test_grassmann_d_five_vectors():
    vs = [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1)]
    expected = FormalSum([(tuple(v for j, v in enumerate(vs) if j != i), (-1) ** i) for i in range(5)])
    out = grassmann_d(vs)
    assert out == expected and len(out) == 5


def test_grassmann_proj_d_shape():
    out = grassmann_proj_d([(Fraction(1), Fraction(0)), (Fraction(0), Fraction(2)), (Fraction(3), Fraction(5))])
    assert len(out) == 3
    assert all(len(key) == 2 and all(len(v) == 1 for v in key) for key, _ in out.items())


@given(st.integers(3, 5).flatmap(lambda k: st.lists(vector(3, nonzero_fractions), min_size=k, max_size=k)))
def test_bicomplex_anticommutes(gen):
    try:
        a = apply_linear(grassmann_proj_d, grassmann_d(gen))
        b = apply_linear(grassmann_d, grassmann_proj_d(gen))
    except DegenerateConfiguration:
        assume(False)
    assert a + b == FormalSum()


def test_grassmann_proj_d_degenerate():
    with pytest.raises(DegenerateConfiguration):
        grassmann_proj_d([(Fraction(1), Fraction(2)), (Fraction(2), Fraction(4)), (Fraction(0), Fraction(1))])


# ---------------------------------------------------------------- JSON

@given(st.lists(vector(3), min_size=1, max_size=6))
def test_config_json_round_trip_rational(rows):
    assume(all(any(r) for r in rows))
    cfg = ProjConfig.of(rows)
    assert ProjConfig.from_json(cfg.to_json()) == cfg


def test_config_json_round_trip_complex():
    cfg = ProjConfig.of([(1 + 2j, 0.5), (3j, -1)])
    back = ProjConfig.from_json(cfg.to_json())
    assert back == cfg and not back.exact


# ---------------------------------------------------------------- weight-four cobracket pieces

def _generic_eight(seed):
    rng = random.Random(seed)
    while True:
        pts = [tuple(Fraction(rng.randint(-4, 4)) for _ in range(4)) for _ in range(8)]
        if all(det([pts[i] for i in q]) != 0 for q in combinations(range(8), 4)):
            return pts


@pytest.fixture(scope="module")
def eight():
    return _generic_eight(11)


def _minors(pts):
    """4x4 minors of the eight points, cached by sorted index and re-signed by the sorting permutation."""
    cache = {q: det([pts[i] for i in q]) for q in combinations(range(8), 4)}

    @functools.lru_cache(maxsize=None)
    def d4(*idx):
        if len(set(idx)) < 4:
            return Fraction(0)
        order = sorted(range(4), key=lambda i: idx[i])
        return permutation_sign(order) * cache[tuple(idx[i] for i in order)]

    return d4


def _brute_delta31(pts):
    """Plain Alt_8 expansion; integer signs are tallied per term shape before expanding."""
    d4 = _minors(pts)

    @functools.lru_cache(maxsize=None)
    def r3(pivot, six):
        acc = {}
        for perm, sign in signed_permutations(6):
            p0, p1, p2, p3, p4, p5 = (six[i] for i in perm)
            D = lambda a, b, c: d4(pivot, a, b, c)
            x = D(p0, p1, p3) * D(p1, p2, p4) * D(p2, p0, p5) / (D(p0, p1, p4) * D(p1, p2, p5) * D(p2, p0, p3))
            key = (x.numerator, x.denominator)
            acc[key] = acc.get(key, 0) + sign
        return acc

    def proj_cr(i, j, a, b, c, d):
        br = lambda x, y: d4(i, j, x, y)
        x = br(a, c) * br(b, d) / (br(a, d) * br(b, c))
        return x.numerator, x.denominator

    r3_tally, coeffs = {}, {}
    for perm, sign in signed_permutations(8):
        l1, l2, l3, l4, l5, l6, l7, l8 = perm
        quad = tuple(sorted((l5, l6, l7, l8)))
        six = (l2, l3, l4, l5, l6, l7)
        base = tuple(sorted(six))
        key = (l1, base, quad)
        r3_tally[key] = r3_tally.get(key, 0) + sign * permutation_sign([base.index(k) for k in six])
        for x, c in ((proj_cr(l1, l2, l3, l6, l4, l5), 1), (proj_cr(l1, l2, l3, l5, l4, l6), -1)):
            coeffs[(x, quad)] = coeffs.get((x, quad), 0) + sign * c
    for (l1, base, quad), n in r3_tally.items():
        if n:
            for x, c in r3(l1, base).items():
                coeffs[(x, quad)] = coeffs.get((x, quad), 0) + n * c
    out = {}
    for (x, quad), c in coeffs.items():
        if c:
            for g, e in factor(abs(d4(*quad))).items():
                out[(Fraction(*x), g)] = out.get((Fraction(*x), g), 0) + c * e
    return FormalSum(out).scale(Fraction(-1, 9))


def test_delta31_matches_brute_force(eight):
    fast = delta31(eight)
    assert fast == _brute_delta31(eight)
    assert all(isinstance(c, Fraction) for _, c in fast.items())


def test_delta31_transposition_negates(eight):
    swapped = [eight[1], eight[0]] + eight[2:]
    assert delta31(swapped) == delta31(eight).scale(-1)


def _brute_delta22(pts):
    d4 = _minors(pts)

    def proj_cr(i, j, a, b, c, d):
        br = lambda x, y: d4(i, j, x, y)
        return br(a, c) * br(b, d) / (br(a, d) * br(b, c))

    out = {}
    for perm, sign in signed_permutations(8):
        l1, l2, l3, l4, l5, l6, l7, _ = perm
        x, y = proj_cr(l1, l2, l3, l4, l5, l6), proj_cr(l3, l4, l1, l2, l5, l7)
        if x == y:
            continue
        key, s = ((x, y), 1) if repr(x) <= repr(y) else ((y, x), -1)
        out[key] = out.get(key, 0) + s * sign
    return FormalSum(out).scale(Fraction(1, 7))


def test_delta22_matches_brute_force(eight):
    assert delta22(eight) == _brute_delta22(eight)


def test_delta22_transposition_negates(eight):
    swapped = eight[:3] + [eight[5], eight[4], eight[3]] + eight[6:]
    assert delta22(swapped) == delta22(eight).scale(-1)


def test_delta22_pgl4_invariant(eight):
    g = [[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, -1], [1, 0, 0, 1]]
    g = [[Fraction(x) for x in row] for row in g]
    assert det(g) != 0
    moved = [ProjPoint(p).transformed(g).coords for p in eight]
    assert delta22(moved) == delta22(eight)


def test_delta31_needs_nonzero_minors(eight):
    pts = list(eight)
    pts[3] = tuple(a + b - c for a, b, c in zip(pts[0], pts[1], pts[2]))
    with pytest.raises(DegenerateConfiguration, match="minor"):
        delta31(pts)
