from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gbgw.core import NU, NuPoly, TimePoly, UntrustedCoefficientError, monomials_up_to
from gbgw.correlators import n_point_connected, nu_deformed_from_connected, one_point, tau0_multiplier
from gbgw import virasoro
from gbgw.virasoro import (CENTRAL, InconsistentVirasoroError, annihilation_check,
                           apply_virasoro, check_commutator, log_exp_convert, solve_tau,
                           solve_tau_at, tau_from_correlators, virasoro_connected)

FACTOR = 1 - 4 * NU * NU
NU2 = 4 * NU * NU


def test_central_term():
    assert CENTRAL == FACTOR * F(1, 16)


def test_l0_on_constant():
    assert apply_virasoro(0, TimePoly.constant(NuPoly.const(1))) == TimePoly.constant(CENTRAL)


def test_l0_on_displayed_tau_low_level():
    tau = TimePoly({(): NuPoly.const(1), (1,): FACTOR * F(1, 16)}, 1)
    out = apply_virasoro(0, tau)
    assert out.L == 0 and out.is_zero()


def test_l1_by_hand():
    # only the quadratic term acts on t0^2; t0 t1 also sees -d/dt1 and t0 d/dt1 / 2
    assert apply_virasoro(1, TimePoly.monomial((2,))) == TimePoly.constant(F(1, 2))
    expected = TimePoly({(1,): F(-1), (2,): F(1, 2)})
    assert apply_virasoro(1, TimePoly.monomial((1, 1))) == expected


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        apply_virasoro(-1, TimePoly.constant())


def test_trust_drops_by_2m_plus_1():
    assert apply_virasoro(2, solve_tau(9).poly).L == 4


@pytest.mark.parametrize("m", range(5))
@pytest.mark.parametrize("n", range(5))
def test_commutators(m, n):
    assert check_commutator(m, n, 9)


def test_solve_tau_displayed_coefficients():
    c = solve_tau(9).coefficient
    assert c(()) == 1
    assert c((1,)) == FACTOR * F(1, 16)
    assert c((0, 1)) == FACTOR * (9 - NU2) * F(1, 1024)
    assert c((2,)) == FACTOR * (9 - NU2) * F(2, 1024)
    assert c((0, 0, 1)) == FACTOR * (9 - NU2) * (25 - NU2) * F(1, 32768)
    assert c((1, 1)) == FACTOR * (9 - NU2) * (25 - NU2) * F(2, 32768)
    assert c((3,)) == FACTOR * (9 - NU2) * (17 - NU2) * F(1, 24576)


def test_log_at_zero_matches_displayed():
    lg = solve_tau_at(5, 0).log()
    assert lg[(1,)] == F(1, 16)
    assert lg[(0, 1)] == F(9, 1024)
    assert lg[(2,)] == F(1, 64)
    assert lg[(0, 0, 1)] == F(225, 32768)
    assert lg[(1, 1)] == F(27, 2048)
    assert lg[(3,)] == F(1, 192)


def test_schedules_agree():
    assert solve_tau(11, "smallest").poly == solve_tau(11, "largest").poly


def test_unknown_schedule():
    with pytest.raises(ValueError):
        solve_tau(3, "random")


def test_solve_is_deterministic():
    assert solve_tau_at(9, F(1, 3)) == solve_tau_at(9, F(1, 3))
    assert solve_tau_at(9, F(1, 3)) == solve_tau(9).poly.map(lambda p: p(F(1, 3)))


def test_inconsistent_constraints_are_fatal(monkeypatch):
    # corrupt L1 only; t0 t1 is fixed by both L0 and L1
    real = virasoro._constraint_rhs

    def corrupted(m, mu, c, central):
        return real(m, mu, c, central) + (1 if m == 1 else 0)

    monkeypatch.setattr(virasoro, "_constraint_rhs", corrupted)
    with pytest.raises(InconsistentVirasoroError):
        virasoro._solve(4, "smallest", F(1, 16))


def test_coefficients_even_and_divisible():
    for mono, v in solve_tau(11).poly.items():
        assert v == v.flip()
        if mono:
            q, r = v.divmod(FACTOR)
            assert not r, mono


def test_tau_is_one_at_half():
    for mono, v in solve_tau(9).poly.items():
        if mono:
            assert v(F(1, 2)) == 0


@pytest.mark.parametrize("m", range(4))
def test_annihilation(m):
    assert annihilation_check(m, 9)


def test_annihilation_l0_level_seven():
    assert annihilation_check(0, 7)


def test_annihilation_fails_on_perturbed_tau():
    tau = solve_tau(7).poly + TimePoly({(0, 1): F(1)}, 7)
    assert not annihilation_check(0, 7, tau)


def test_untrusted_reads_raise():
    with pytest.raises(UntrustedCoefficientError):
        apply_virasoro(1, solve_tau(5).poly)[(0, 1)]


def test_exp_scalar():
    a = CENTRAL
    P = TimePoly({(1,): a}, 2)
    assert log_exp_convert(P, "exp") == TimePoly({(): NuPoly.const(1), (1,): a, (2,): a * a * F(1, 2)}, 2)


def test_exp_log_round_trip():
    tau = solve_tau(9).poly
    assert log_exp_convert(log_exp_convert(tau, "log"), "exp") == tau


@settings(max_examples=25, deadline=None)
@given(st.dictionaries(st.sampled_from(list(monomials_up_to(6, min_level=1))),
                       st.fractions(max_denominator=20), max_size=6))
def test_log_exp_inverse(coeffs):
    P = TimePoly(coeffs, 6)
    assert P.exp().log() == P


def test_log_exp_preconditions():
    with pytest.raises(ValueError):
        log_exp_convert(TimePoly.constant(F(1), 3), "exp")
    with pytest.raises(ValueError):
        log_exp_convert(TimePoly({(1,): F(1)}, 3), "log")
    with pytest.raises(ValueError):
        log_exp_convert(TimePoly.constant(F(1), 3), "sideways")


@pytest.mark.parametrize("ell", range(5))
def test_log_one_point(ell):
    assert virasoro_connected([ell]) == one_point(ell)


def test_oracle_agreement_level_nine():
    for mono in monomials_up_to(9, min_level=1):
        ells = [i for i, e in enumerate(mono) for _ in range(e)]
        if len(ells) == 1:
            assert virasoro_connected(ells) == one_point(ells[0])
        elif len(ells) <= 4:
            assert virasoro_connected(ells) == n_point_connected(ells), ells


def test_tau0_relations_on_solved_tau():
    lg = solve_tau(11).log()
    for mono in monomials_up_to(11, min_level=1):
        ells = tuple(i for i, e in enumerate(mono) for _ in range(e))
        k = ells.count(0)
        bare = ells[k:]
        if not k or not bare:
            continue
        full = nu_deformed_from_connected(ells, lg.correlator(ells))
        base = nu_deformed_from_connected(bare, lg.correlator(bare))
        assert full == base * tau0_multiplier(bare, k, "nu"), ells


def test_tau_from_correlators_is_annihilated():
    def connected(ells):
        if len(ells) == 1:
            return one_point(ells[0])
        return n_point_connected(ells)
    tau = tau_from_correlators(7, connected)
    for m in range(3):
        assert annihilation_check(m, 7, tau)
    assert tau == solve_tau(7).poly
