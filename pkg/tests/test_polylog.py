import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from regulab.polylog import (
    BetaTable,
    beta,
    beta_kp,
    beta_kp_recursive,
    bloch_wigner,
    li,
    polylog_hat,
    polylog_sv,
    polylog_sv_levin,
    zeta_leibniz,
)
from regulab.projective import abel5_defect


def moduli(lo=0.1, hi=10.0):
    return st.floats(lo, hi)


angles = st.floats(0.01, math.pi - 0.01).flatmap(lambda t: st.sampled_from([t, -t]))


def polar(r, t):
    return cmath.rect(r, t)


# ---------------------------------------------------------------- beta coefficients

def _series_beta(n):
    x = sympy.Symbol("x")
    ser = sympy.series(2 * x / (sympy.exp(2 * x) - 1), x, 0, n + 1).removeO()
    return [Fraction(int(c.p), int(c.q)) for c in (sympy.Rational(ser.coeff(x, k)) for k in range(n + 1))]


def test_beta_matches_generating_function_series():
    oracle = _series_beta(20)
    assert [beta(k) for k in range(21)] == oracle


@pytest.mark.parametrize("k, value", [(0, Fraction(1)), (1, Fraction(-1)), (2, Fraction(1, 3))])
def test_beta_examples(k, value):
    assert beta(k) == value


def test_beta_rejects_negative_index():
    with pytest.raises(ValueError):
        beta(-1)


@pytest.mark.parametrize("k", range(11))
def test_beta_kp_first_column(k):
    assert beta_kp(k, 1) == -beta(k + 1)


@pytest.mark.parametrize("m", range(1, 6))
def test_beta_kp_vanishes_at_k1_even_p(m):
    assert beta_kp(1, 2 * m) == 0


@pytest.mark.parametrize("m", range(1, 11))
def test_beta_kp_closed_forms(m):
    assert beta_kp(0, 2 * m) == beta_kp(0, 2 * m + 1) == Fraction(1, 2 * m + 1)
    assert beta_kp(1, 2 * m - 1) == Fraction(-1, (2 * m - 1) * (2 * m + 1))


def test_beta_kp_example_zero_two():
    assert beta_kp(0, 2) == Fraction(1, 3)


@given(st.integers(0, 20), st.integers(1, 20))
def test_closed_sum_agrees_with_recursion(k, p):
    assert beta_kp(k, p) == beta_kp_recursive(k, p)


def test_beta_table_recursions_hold():
    table = BetaTable.build(20)
    assert table.max_index == 20
    assert table.recursion_failures() == []


def test_beta_kp_domain():
    with pytest.raises(ValueError):
        beta_kp(0, 0)


# ---------------------------------------------------------------- Li_n

@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_li_at_zero(n):
    assert li(n, 0) == 0


@given(moduli(0.0, 0.95), angles)
def test_li1_is_minus_log(r, t):
    z = polar(r, t)
    assert abs(li(1, z) + cmath.log(1 - z)) < 1e-13


def test_li2_half_against_quadrature():
    # mpmath adaptive quadrature of -log(1 - t)/t on [0, 1/2]
    assert abs(li(2, 0.5) - 0.58224052646501250590) < 1e-14


def test_li1_pole():
    with pytest.raises(ValueError):
        li(1, 1)


@given(st.integers(1, 5), moduli(0.05, 6.0), angles)
def test_li_matches_mpmath(n, r, t):
    z = polar(r, t)
    ref = complex(mpmath.polylog(n, z))
    assert abs(li(n, z) - ref) < 1e-11 * max(1.0, abs(ref))


# ---------------------------------------------------------------- single-valued versions

@given(st.floats(-10, 10))
def test_bloch_wigner_vanishes_on_real_line(x):
    assert abs(polylog_sv(2, x)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_sv_at_zero_and_infinity(n):
    assert polylog_sv(n, 0) == 0
    assert polylog_sv(n, None) == 0


def test_sv_at_one():
    assert polylog_sv(2, 1) == 0
    assert abs(polylog_sv(3, 1) - 1.2020569031595942854) < 1e-14


def test_l2_at_i_is_catalan():
    assert abs(polylog_sv(2, 1j) - 0.91596559417721901505) < 1e-13


def test_l3_frozen_value():
    # mpmath evaluation of Re(Li_3 - Li_2 log|z| + (1/3) Li_1 log^2|z|) at 2 + i
    assert abs(polylog_sv(3, 2 + 1j) - 0.86042556629810918253) < 1e-13


@given(moduli(), angles)
def test_l2_equals_bloch_wigner(r, t):
    z = polar(r, t)
    assert abs(polylog_sv(2, z) - bloch_wigner(z)) < 1e-10


@given(moduli(), angles)
def test_l3_printed_expression(r, t):
    z = polar(r, t)
    lg = math.log(abs(z))
    direct = (li(3, z) - li(2, z) * lg + li(1, z) * lg**2 / 3).real
    assert abs(polylog_sv(3, z) - direct) < 1e-10


@given(st.integers(2, 5), moduli(0.2, 5.0), angles)
def test_sv_inversion_symmetry(n, r, t):
    z = polar(r, t)
    assert abs(polylog_sv(n, 1 / z) - (-1) ** (n - 1) * polylog_sv(n, z)) < 1e-9


@given(st.integers(2, 5), st.floats(1.05, 8.0))
def test_continuity_across_cut(n, x):
    eps = 1e-11
    above, below = polylog_sv(n, complex(x, eps)), polylog_sv(n, complex(x, -eps))
    if n % 2 == 0:
        # even weights are odd under conjugation, so both sides tend to zero
        assert abs(above) < 1e-8 and abs(below) < 1e-8
    else:
        assert abs(above - below) < 1e-8


@given(st.integers(2, 3), moduli(), angles)
def test_levin_agrees_below_weight_four(n, r, t):
    z = polar(r, t)
    assert abs(polylog_sv_levin(n, z) - polylog_sv(n, z)) < 1e-12


def test_levin_differs_at_weight_four():
    z = 0.5 + 0.5j
    # mpmath evaluation of L_4 + (1/15) L_2 log^2|z|
    assert abs(polylog_sv_levin(4, z) - 0.76470579457719703655) < 1e-13
    assert abs(polylog_sv(4, z) - 0.75737115407106668579) < 1e-13


@given(moduli(), angles)
def test_polylog_hat_parities(r, t):
    z = polar(r, t)
    assert polylog_hat(3, z) == complex(polylog_sv(3, z), 0)
    assert polylog_hat(2, z) == complex(0, polylog_sv(2, z))


@given(st.floats(-10, 10))
def test_polylog_hat_even_real(x):
    assert abs(polylog_hat(2, x)) < 1e-12


# ---------------------------------------------------------------- five-term relation

@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=5, max_size=5, unique=True))
def test_five_term_relation(coords):
    pts = [complex(a, b) for a, b in coords]
    if min(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1 :]) < 1e-2:
        return
    assert abs(abel5_defect(*pts)) < 1e-9


# ---------------------------------------------------------------- zeta as an iterated integral

def test_zeta2_leibniz():
    est = zeta_leibniz(2)
    assert abs(est.value - math.pi**2 / 6) < 1e-3
    assert not est.budget_too_small


def test_zeta3_leibniz():
    est = zeta_leibniz(3)
    assert abs(est.value - float(mpmath.nsum(lambda k: k**-3, [1, mpmath.inf]))) < 1e-3


def test_zeta_leibniz_rejects_divergent():
    with pytest.raises(ValueError):
        zeta_leibniz(1)


def test_zeta_leibniz_flags_tiny_budget():
    est = zeta_leibniz(3, budget=2, tol=1e-9)
    assert est.budget_too_small


def test_l2_bloch_wigner_thousand_points():
    rng = np.random.default_rng(20)
    r = np.exp(rng.uniform(math.log(0.1), math.log(10), 1000))
    t = rng.uniform(0.01, math.pi - 0.01, 1000) * rng.choice([-1, 1], 1000)
    worst = max(abs(polylog_sv(2, complex(z)) - bloch_wigner(complex(z))) for z in r * np.exp(1j * t))
    assert worst < 1e-10
