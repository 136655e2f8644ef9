from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gbgw.core import (NEG_INF, NU, LaurentSeries, MultiSeries, NuPoly, TimePoly,
                       UntrustedCoefficientError, double_factorial, flag_coordinates,
                       geometric_denominator, level, mono_from_ells, pochhammer,
                       series_derivative, series_mul)

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nupolys = st.lists(small, max_size=4).map(NuPoly.from_list)


# -- pochhammer / double factorial ---------------------------------------

def test_pochhammer_empty_product():
    assert pochhammer(F(1, 2), -1, 0) == 1


def test_pochhammer_two():
    # (1/2 - nu)(3/2 - nu) expanded by hand
    assert pochhammer(F(1, 2), -1, 2) == NuPoly({0: F(3, 4), 1: -2, 2: 1})


def test_pochhammer_minus_one():
    r = pochhammer(F(1, 2), 1, -1, rational=True)
    assert r.den == NuPoly({0: F(-1, 2), 1: 1})
    assert r.num == 1
    assert r(F(3)) == 1 / F(5, 2)


def test_pochhammer_errors():
    with pytest.raises(ValueError):
        pochhammer(F(1, 2), 1, -2)
    with pytest.raises(ArithmeticError):
        pochhammer(F(1, 2), 1, -1)
    with pytest.raises(ValueError):
        pochhammer(F(1, 2), 2, 1)


@given(st.integers(0, 6), small, small)
def test_pochhammer_matches_evaluation(k, offset, nu):
    expect = F(1)
    for j in range(k):
        expect *= offset + j - nu
    assert pochhammer(offset, -1, k)(nu) == expect


def test_minus_one_ratio_times_polynomial_reduces():
    # (1/2 - nu)_1 * (1/2 + nu)_{-1} = (1/2 - nu)/(nu - 1/2) = -1
    r = pochhammer(F(1, 2), 1, -1, rational=True) * pochhammer(F(1, 2), -1, 1)
    assert r.to_poly() == -1


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(5) == 15
    assert double_factorial(9) == 1 * 3 * 5 * 7 * 9 == 945
    for bad in (-3, 4, 0):
        with pytest.raises(ValueError):
            double_factorial(bad)


# -- NuPoly ring ---------------------------------------------------------

@given(nupolys, nupolys, nupolys)
@settings(max_examples=60)
def test_nupoly_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b - b == a


@given(nupolys, nupolys, small)
def test_nupoly_evaluation_is_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)
    assert a.flip()(x) == a(-x)


@given(nupolys, nupolys)
def test_nupoly_exact_division(a, b):
    if b:
        assert (a * b) / b == a


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        NuPoly.from_list([1, 0, 1]) / NuPoly.from_list([0, 1])


@given(small)
def test_fraction_normalization(x):
    y = F(x.numerator * 6, x.denominator * 6)
    assert (y.numerator, y.denominator) == (x.numerator, x.denominator)
    assert y.denominator > 0


def test_nupoly_pairs_roundtrip():
    p = NuPoly({0: F(115, 1536), 2: F(-1, 128)})
    assert p.to_pairs() == [[0, "115/1536"], [2, "-1/128"]]
    assert NuPoly.from_pairs(p.to_pairs()) == p


# -- LaurentSeries ---------------------------------------------------------

def test_series_mul_polynomials():
    a = LaurentSeries("z", {1: F(1), 0: F(1)})
    b = LaurentSeries("z", {1: F(1), 0: F(-1)})
    p = series_mul(a, b)
    assert p.is_exact
    assert dict(p.items()) == {2: 1, 0: -1}


def test_series_mul_by_zero():
    a = LaurentSeries("z", {1: F(3)}, lo=-4)
    assert series_mul(a, LaurentSeries.zero("z")).is_zero_on_window()


def test_series_window_lower_bound():
    a = LaurentSeries("z", {1: F(1), -3: F(2)}, lo=-3, hi=1)
    assert series_mul(a, a).lo == -2


def test_series_tag_mismatch():
    with pytest.raises(ValueError):
        LaurentSeries("z", {0: 1}) * LaurentSeries("w", {0: 1})


def test_untrusted_read_is_error():
    a = LaurentSeries("z", {0: F(1)}, lo=-2)
    assert a[-2] == 0
    with pytest.raises(UntrustedCoefficientError):
        a[-3]


def test_derivative_examples():
    assert dict(series_derivative(LaurentSeries("z", {2: F(1)})).items()) == {1: 2}
    assert dict(series_derivative(LaurentSeries("z", {-1: NU})).items()) == {-2: -NU}
    assert series_derivative(LaurentSeries("z", {0: F(7)})).is_zero_on_window()


def _truncated(coeffs, lo):
    return LaurentSeries("z", {e: v for e, v in coeffs.items() if e >= lo}, lo=lo, hi=2)


series_coeffs = st.dictionaries(st.integers(-8, 2), small, min_size=1)


@given(series_coeffs, series_coeffs, st.integers(-5, 1), st.integers(-5, 1))
@settings(max_examples=80)
def test_series_window_soundness(ca, cb, la, lb):
    # truncate two "true" series and compare against the finer truncation
    fine = _truncated(ca, -20) * _truncated(cb, -20)
    coarse = _truncated(ca, la) * _truncated(cb, lb)
    for e in coarse.trusted_range():
        assert coarse[e] == fine[e]


# -- MultiSeries / geometric expansion ------------------------------------

def test_geometric_denominator():
    g = geometric_denominator(0, 1, 2, 2)
    assert dict(g.items()) == {(-1, 0): 1, (-2, 1): 1, (-3, 2): 1}
    h = geometric_denominator(1, 0, 2, 2)
    assert dict(h.items()) == {e: -v for e, v in g.items()}
    with pytest.raises(ValueError):
        geometric_denominator(1, 1, 2, 2)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 6))
def test_geometric_total_degree(a, b, order):
    if a == b:
        return
    g = geometric_denominator(a, b, order, 4)
    assert all(sum(e) == -1 for e, _ in g.items())


def test_sum_over_square_of_difference():
    n, K = 2, 6
    g = geometric_denominator(0, 1, K, n)
    num = (MultiSeries.embed(LaurentSeries("z1", {1: F(1)}), 0, n)
           + MultiSeries.embed(LaurentSeries("z2", {1: F(1)}), 1, n))
    s = g.mul(g).mul(num)
    for k in range(4):
        assert s[(-k - 1, k)] == 2 * k + 1
    with pytest.raises(UntrustedCoefficientError):
        s[(-K - 3, K + 2)]


def test_multiseries_trusted_matches_higher_order():
    n = 3
    lo = geometric_denominator(0, 1, 3, n).mul(geometric_denominator(1, 2, 3, n))
    hi = geometric_denominator(0, 1, 9, n).mul(geometric_denominator(1, 2, 9, n))
    for e, v in hi.items():
        if lo.is_trusted(e):
            assert lo[e] == v
    assert flag_coordinates((1, -2, 3)) == (1, -1, 2)


def test_product_coefficient_agrees_with_product():
    n = 2
    a = geometric_denominator(0, 1, 5, n)
    u = MultiSeries.embed(LaurentSeries("z", {1: F(1), 0: F(2), -1: F(3)}, lo=-1), 0, n)
    full = a.mul(u)
    for e, v in full.items():
        assert a.product_coefficient(u, e) == v


# -- TimePoly ---------------------------------------------------------------

times = st.dictionaries(st.lists(st.integers(0, 2), max_size=3).map(tuple), small, max_size=4)


@given(times, times, times)
@settings(max_examples=40)
def test_timepoly_ring_axioms(a, b, c):
    a, b, c = TimePoly(a), TimePoly(b), TimePoly(c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(st.lists(st.integers(0, 3), max_size=4), st.lists(st.integers(0, 3), max_size=4))
def test_level_grading(x, y):
    p = TimePoly.monomial(mono_from_ells(x)) * TimePoly.monomial(mono_from_ells(y))
    (m, _), = p.items()
    assert level(m) == level(mono_from_ells(x)) + level(mono_from_ells(y))
    for ell in set(x):
        d = TimePoly.monomial(mono_from_ells(x)).derivative(ell)
        (m2, _), = d.items()
        assert level(m2) == level(mono_from_ells(x)) - (2 * ell + 1)


def test_timepoly_exp_log():
    c = (1 - 4 * NU * NU) * F(1, 16)
    p = TimePoly({(1,): c}, L=2)
    e = p.exp()
    assert e[(2,)] == c * c / 2
    assert e[(1,)] == c and e[()] == 1
    q = TimePoly({(1,): F(1, 3), (0, 1): F(2), (2,): F(5)}, L=7)
    assert q.exp().log() == q


def test_timepoly_untrusted():
    p = TimePoly({(1,): F(1)}, L=2)
    with pytest.raises(UntrustedCoefficientError):
        p[(0, 1)]
    assert p.derivative(0).L == 1
