"""Invariant suites driven by ``gbgw verify``; each returns ``[(check, passed)]``."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .core import ells_from_mono, monomials_up_to

Checks = List[Tuple[str, bool]]


def umatrix_suite(order: Optional[int] = None, **_) -> Checks:
    from .correlators import n_point_connected, one_point
    from .umatrix import (build_u_matrix, is_laurent_polynomial, verify_nu_conjugation,
                          verify_u_ode, verify_u_square)
    N = 12 if order is None else order
    U = build_u_matrix(N)
    out = [
        (f"ode residual vanishes (N={N})", verify_u_ode(U).is_zero()),
        (f"U^2 = z I on the trusted window (N={N})", verify_u_square(U).is_zero()),
        (f"nu-conjugation identity (N={N})", verify_nu_conjugation(U)),
        (f"trace-free (N={N})", U.trace().is_zero_on_window()),
    ]
    for nu in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
        out.append((f"Laurent polynomial at nu={nu}", is_laurent_polynomial(U, nu)))
    even = all(one_point(l) == one_point(l).flip() for l in range(6))
    for ells in [(0, 0), (1, 1), (1, 2), (0, 1, 1), (1, 1, 1), (0, 0, 1, 1)]:
        p = n_point_connected(ells)
        even = even and p == p.flip()
    out.append(("correlators are even in nu", even))
    return out


def virasoro_suite(level: Optional[int] = None, **_) -> Checks:
    from .correlators import nu_deformed_from_connected, tau0_multiplier
    from .virasoro import annihilation_check, check_commutator, solve_tau
    L = 9 if level is None else level
    out = []
    comm = all(check_commutator(m, n, L) for m in range(5) for n in range(5))
    out.append((f"[L_m, L_n] = (m-n) L_(m+n), m,n <= 4, level {L}", comm))
    for m in range(4):
        out.append((f"L_{m} tau = 0 through level {L - 2 * m - 1}", annihilation_check(m, L)))
    out.append(("recursion schedules agree", solve_tau(L, "smallest").poly == solve_tau(L, "largest").poly))
    lg = solve_tau(L).log()
    ok = True
    for mono in monomials_up_to(L, min_level=1):
        ells = ells_from_mono(mono)
        k = ells.count(0)
        bare = ells[k:]
        if k and bare:
            full = nu_deformed_from_connected(ells, lg.correlator(ells))
            base = nu_deformed_from_connected(bare, lg.correlator(bare))
            ok = ok and full == base * tau0_multiplier(bare, k, "nu")
    out.append((f"tau_0 insertion relations through level {L}", ok))
    return out


def kdv_suite(level: Optional[int] = None, **_) -> Checks:
    from .diffpoly import DiffPoly
    from .kdv import DX, kdv_residual, lenard_magri, lenard_operator, u
    L = 4 if level is None else level
    out = [
        ("L_1 = u", lenard_magri(1) == u(0)),
        ("L_2 = u_xx/4 + 3u^2/2", lenard_magri(2) == u(2) * Fraction(1, 4) + u(0) * u(0) * Fraction(3, 2)),
        ("Lenard recursion integrable for l <= 6",
         all(DX(lenard_magri(l)) == lenard_operator(lenard_magri(l - 1)) for l in range(1, 7))),
        (f"KdV flow t_1 through level {L}", kdv_residual(1, L).is_zero()),
        (f"KdV flow t_2 through level {max(L - 2, 0)}", kdv_residual(2, max(L - 2, 0)).is_zero()),
    ]
    return out


def painleve_suite(level: Optional[int] = None, **_) -> Checks:
    from .kdv import (bare_tau_check, curvature_as_painleve, initial_datum, painleve_operator,
                      painleve_residual, pxxxiv_stages, tau_u_series, verify_miura,
                      verify_zero_curvature_K1)
    L = 4 if level is None else level
    u1 = painleve_residual(1, tau_u_series(L + 2, 1))
    out = [
        ("K=0 on the initial datum", painleve_residual(0, initial_datum()).is_zero()),
        (f"K=1 on the tau series through level {u1.L}", u1.is_zero() and u1.L >= L),
        ("K=1 zero curvature", verify_zero_curvature_K1()),
        ("zero curvature reproduces the K=1 equation", curvature_as_painleve() == painleve_operator(1)),
    ]
    out += [(f"PXXXIV Lax: {k}", v) for k, v in pxxxiv_stages().items()]
    out += [("Miura map to PII", verify_miura()), ("bare tau", bare_tau_check())]
    return out


def miwa_suite(level: Optional[int] = None, **_) -> Checks:
    from .correlators import miwa_consistency_check
    L = 3 if level is None else level
    return [(f"determinant = Virasoro tau in Miwa times (n={n}, level {L})", miwa_consistency_check(n, L))
            for n in (1, 2, 3)]


def tricomi_suite(max_g: Optional[int] = None, **_) -> Checks:
    from .correlators import tricomi_check, tricomi_first_mismatch
    g = 4 if max_g is None else max_g
    return [(f"Tricomi series through X^{g}", tricomi_check(g)),
            ("flipped orientation fails at X^2", tricomi_first_mismatch(max(g, 2), -1) == 2)]


def cross_suite(level: Optional[int] = None, **_) -> Checks:
    """Closed form / permutation sum / Virasoro oracle on every key of level <= L and n <= 4."""
    from .correlators import n_point_connected, one_point, one_point_via_trace
    from .virasoro import virasoro_connected
    L = 7 if level is None else level
    out = []
    for mono in monomials_up_to(L, min_level=1):
        ells = ells_from_mono(mono)
        if len(ells) > 4:
            continue
        oracle = virasoro_connected(ells)
        if len(ells) == 1:
            ok = one_point(ells[0]) == oracle == one_point_via_trace(ells[0], ells[0] + 2)
        else:
            ok = n_point_connected(ells) == oracle
        out.append((f"<{','.join(map(str, ells))}>", ok))
    return out


SUITE_FUNCTIONS: Dict[str, Callable[..., Checks]] = {
    "umatrix": umatrix_suite, "virasoro": virasoro_suite, "kdv": kdv_suite,
    "painleve": painleve_suite, "miwa": miwa_suite, "tricomi": tricomi_suite, "cross": cross_suite,
}


def run_suite(name: str, **params) -> Checks:
    return SUITE_FUNCTIONS[name](**params)
