from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gbgw.core import NU, NuPoly, TimePoly
from gbgw.diffpoly import DiffPoly, Derivation, is_zero_matrix, mat_add, reduce_modulo
from gbgw.kdv import (NotIntegrableError, K1_to_alpha, alpha_lax_pair, bare_tau_check,
                      bare_tau_report, curvature_as_painleve, initial_datum, integrate_total_derivative,
                      inverse_miura_check, kdv_residual, lax_pair_K1, lenard_magri, lenard_operator,
                      miura_residual, painleve_operator, painleve_residual, pxxxiv_stages, tau_u_series,
                      u, verify_miura, verify_pxxxiv_lax, verify_scaling, verify_zero_curvature_K1)
from gbgw.virasoro import solve_tau

D = Derivation(["u"], {"x": 1})


def jets(draw_terms):
    P = DiffPoly()
    for (k1, k2, c) in draw_terms:
        P = P + u(k1) * u(k2) * F(c)
    return P


terms = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5)), max_size=4)


@settings(max_examples=40, deadline=None)
@given(terms, terms)
def test_leibniz(a, b):
    P = jets(a) + DiffPoly.var("x") * 3
    Q = jets(b)
    assert D(P * Q) == D(P) * Q + P * D(Q)


def test_jet_shift():
    assert D(u(3)) == u(4)
    assert D(DiffPoly.var("x", 2)) == DiffPoly.var("x") * 2


@settings(max_examples=30, deadline=None)
@given(terms)
def test_integration_inverts_derivative(a):
    P = jets(a)
    P = P - DiffPoly.const(P.terms().get((), 0))
    assert integrate_total_derivative(D(P)) == P


def test_non_integrable_rejected():
    with pytest.raises(NotIntegrableError):
        integrate_total_derivative(u(0) * u(0))
    with pytest.raises(NotIntegrableError):
        integrate_total_derivative(u(2) * u(2))


def test_lenard_low():
    assert lenard_magri(0) == 1
    assert lenard_magri(1) == u(0)
    assert lenard_magri(2) == u(2) * F(1, 4) + u(0) * u(0) * F(3, 2)


@pytest.mark.parametrize("ell", range(1, 7))
def test_lenard_recursion_and_normalization(ell):
    L = lenard_magri(ell)
    assert D(L) == lenard_operator(lenard_magri(ell - 1))
    assert L.subs({f"u_{k}": 0 for k in range(2 * ell + 1)}).is_zero()


def test_kdv_flows_on_tau():
    assert kdv_residual(1, 4).is_zero()
    assert kdv_residual(2, 2).is_zero()


def test_kdv_negative_control():
    # dropping the u^2 term of L_2 leaves exactly -3 u u_x
    bad = u(2) * F(1, 4)
    r = kdv_residual(1, 4, lenard=bad)
    lg = solve_tau(11).log()
    u0, ux0 = lg.correlator([0, 0]), lg.correlator([0, 0, 0])
    assert r[()] == -3 * u0 * ux0 != 0


def test_kdv_needs_level():
    with pytest.raises(ValueError):
        kdv_residual(1, 4, tau=solve_tau(5).poly)


def test_painleve_initial_datum():
    assert painleve_residual(0, initial_datum()).is_zero()
    assert painleve_residual(0, DiffPoly.var("w")) == DiffPoly.var("w")


def test_painleve_rejects_jets():
    with pytest.raises(ValueError):
        painleve_residual(0, u(0))
    with pytest.raises(TypeError):
        painleve_residual(0, 3)


def test_painleve_K1_on_tau_series():
    r = painleve_residual(1, tau_u_series(6, 1))
    assert r.is_zero() and r.L >= 4


def test_painleve_K2_on_tau_series():
    r = painleve_residual(2, tau_u_series(8, 2))
    assert r.is_zero() and r.L >= 4


def test_painleve_K1_form():
    t1, x = DiffPoly.var("t1"), DiffPoly.var("x")
    expected = t1 * u(3) * F(3, 4) + t1 * u(0) * u(1) * 9 + (x - 2) * u(1) + u(0) * 2
    assert painleve_operator(1) == expected


def test_painleve_series_negative_control():
    bad = tau_u_series(6, 1) + TimePoly({(0, 1): NuPoly.const(1)}, 6)
    assert not painleve_residual(1, bad).is_zero()


def test_zero_curvature():
    assert verify_zero_curvature_K1()
    assert curvature_as_painleve() == painleve_operator(1)


def test_zero_curvature_negative_controls():
    A, Om = lax_pair_K1()
    A[1][0] = A[1][0] + DiffPoly.jet("a", 0)
    assert not verify_zero_curvature_K1(A, Om)
    assert not verify_zero_curvature_K1(*lax_pair_K1(omega_ax_sign=-1))
    assert not verify_zero_curvature_K1(*lax_pair_K1("t"))


def test_K1_specializes_to_alpha_pair():
    A, Om = lax_pair_K1()
    Aa, Oa = alpha_lax_pair()
    assert is_zero_matrix(mat_add(K1_to_alpha(A), Aa, -1))
    assert is_zero_matrix(mat_add(K1_to_alpha(Om), Oa, -1))


def test_pxxxiv_stages():
    assert pxxxiv_stages() == {"alpha_form": True, "gauge": True, "v_form": True, "scaling": True}
    assert verify_pxxxiv_lax()
    assert verify_scaling()


def test_pxxxiv_negative_control():
    st_ = pxxxiv_stages(v_coupling=5)
    assert not st_["v_form"] and not st_["scaling"]
    assert not verify_pxxxiv_lax(v_coupling=5)


def test_miura():
    assert verify_miura()
    assert inverse_miura_check()
    assert "alpha" in {s for m in miura_residual(cubic=1).terms() for s, _ in m}


def test_miura_negative_controls():
    assert not verify_miura(sign=1)
    assert not verify_miura(cubic=1)


def test_reduce_modulo():
    Dw = Derivation(["w"], {"y": 1})
    w = lambda k: DiffPoly.jet("w", k)
    # w_yy = w: then w_yyy = w_y and w_yyyy = w
    assert reduce_modulo(w(4) - w(0) + w(3), "w", 2, w(0), Dw) == w(1)
    with pytest.raises(ValueError):
        reduce_modulo(w(3), "w", 2, w(2), Dw)


def test_bare_tau():
    assert bare_tau_check()
    assert bare_tau_check(nu=F(1, 2))
    assert bare_tau_report(6) is None
    lg = solve_tau(4).log()
    assert lg[(1,)] == (1 - 4 * NU * NU) * F(1, 16)
    assert lg.correlator([0, 0]) == (1 - 4 * NU * NU) * F(1, 32)


def test_bare_tau_vanishes_at_half():
    lg = solve_tau(6).log()
    for k in range(1, 7):
        assert lg[(k,)](F(1, 2)) == 0
