from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from gbgw.core import NU, LaurentSeries, NuPoly
from gbgw.umatrix import (MatrixSeries, build_u_matrix, constant_matrix, is_laurent_polynomial,
                          verify_nu_conjugation, verify_u_ode, verify_u_square)

ONE = NuPoly.const(1)


def test_leading_block():
    U = build_u_matrix(3)
    assert U[0, 0][0] == (F(1, 2) - NU) * F(1, 2)
    assert U[0, 1][0] == 1
    assert U[1, 0][1] == 1
    assert U[1, 1][0] == -(F(1, 2) - NU) * F(1, 2)


def test_entry_12_first_correction():
    # (1/8)(1/2 - nu)(1/2 + nu) by direct evaluation of the k = 1 term
    assert build_u_matrix(2)[0, 1][-1] == (1 - 4 * NU * NU) * F(1, 32)


def test_windows_and_tops():
    U = build_u_matrix(5)
    assert U[0, 0].window == (-5, 0)
    assert U[0, 1].window == (-5, 0)
    assert U[1, 0].window == (-4, 1)
    assert U.trace().is_zero_on_window()


def test_degree_bound():
    U = build_u_matrix(8)
    for i, j, e, v in U.nonzero_terms():
        k = 1 - e if (i, j) == (1, 0) else -e
        assert v.degree <= 2 * k + 1


def test_entry_12_exact_at_half():
    U = build_u_matrix(6, nu=F(1, 2))
    assert U.is_exact
    assert dict(U[0, 1].items()) == {0: 1}


@pytest.mark.parametrize("N", [2, 5, 12])
def test_ode_residual_vanishes(N):
    R = verify_u_ode(build_u_matrix(N))
    assert R.is_zero()
    assert R[0, 1].lo <= -N  # the check covers a nontrivial window


def test_ode_residual_at_nu_zero():
    assert verify_u_ode(build_u_matrix(8).at_nu(0)).is_zero()
    assert verify_u_ode(build_u_matrix(8, nu=F(3, 7))).is_zero()


def test_ode_detects_perturbation():
    U = build_u_matrix(8)
    rows = [list(r) for r in U.entries]
    c = dict(rows[0][1].items())
    c[-3] = c[-3] + 1
    rows[0][1] = LaurentSeries("z", c, rows[0][1].lo, 0)
    bad = MatrixSeries(rows, U.order)
    R = verify_u_ode(bad)
    exps = {e for _, _, e, _ in R.nonzero_terms()}
    assert exps and max(exps) <= -3 + 1 and min(exps) >= -3 - 1


def test_order_too_small():
    with pytest.raises(ValueError):
        verify_u_ode(build_u_matrix(1))


def test_square_is_z_identity():
    U = build_u_matrix(12)
    R = verify_u_square(U)
    assert R.is_zero()
    assert R[0, 0].lo == -11
    UU = U * U
    assert UU[0, 0][1] == 1
    tr = UU.trace()
    assert tr[1] == 2 and all(e == 1 for e in tr.exponents())


def test_square_exact_at_half():
    R = verify_u_square(build_u_matrix(1, nu=F(1, 2)))
    assert R.is_zero() and R.is_exact


def test_determinant_is_minus_z():
    U = build_u_matrix(10)
    det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
    assert dict(det.items()) == {1: -1}


@pytest.mark.parametrize("N", [0, 3, 10])
def test_nu_conjugation(N):
    assert verify_nu_conjugation(build_u_matrix(N))


def test_conjugation_controls():
    # the identity commutes with the unipotent conjugation, so it satisfies it
    assert verify_nu_conjugation(constant_matrix([[ONE, 0 * ONE], [0 * ONE, ONE]]))
    even = ONE + NU * NU
    assert verify_nu_conjugation(constant_matrix([[even, 0 * ONE], [0 * ONE, even]]))
    # a nu-odd diagonal entry breaks it
    assert not verify_nu_conjugation(constant_matrix([[NU, 0 * ONE], [0 * ONE, -NU]]))
    U = build_u_matrix(6)
    assert not verify_nu_conjugation(U * NuPoly.linear(1, 1))


@pytest.mark.parametrize("nu", [F(1, 2), F(3, 2), F(5, 2), F(-3, 2)])
def test_half_integer_truncation(nu):
    U = build_u_matrix(12)
    assert is_laurent_polynomial(U, nu)
    m = abs(nu) - F(1, 2)
    # k = m is still present in entry (1,2) for nu > 0
    if nu > 0:
        assert U[0, 1][-int(m)](nu) != 0
    exact = build_u_matrix(0, nu=nu)
    assert exact.is_exact and verify_u_square(exact).is_zero()
    assert verify_u_ode(build_u_matrix(3, nu=nu)).is_zero()


def test_generic_nu_does_not_truncate():
    with pytest.raises(ValueError):
        is_laurent_polynomial(build_u_matrix(4), F(1, 3))
    U = build_u_matrix(12).at_nu(F(1, 3))
    assert U[0, 1][-12] != 0


@given(st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_specialization_commutes(nu):
    U = build_u_matrix(4)
    V = U.at_nu(nu)
    assert (U[0, 0] * U[1, 0]).map(lambda p: p(nu)) == V[0, 0] * V[1, 0]
