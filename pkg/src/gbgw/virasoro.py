"""Virasoro operators on time polynomials and the tau function they determine.

    L_m = sum_l (2l+1)/2 (t_l - 2 delta_{l,0}) d/dt_{l+m}
          + 1/4 sum_{l<m} d^2/dt_l dt_{m-1-l} + delta_{m,0} (1-4 nu^2)/16

Acting on a series of trusted level L, the isolated ``-d/dt_m`` term lowers
the level by ``2m+1`` and all other terms by at most ``2m``. This makes
``L_m tau = 0`` a recursion: the coefficient of ``t^mu`` (with ``mu_m >= 1``)
is fixed by coefficients of strictly lower level.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

from .core import NU, NuPoly, TimePoly, ells_from_mono, mono_factorial, monomials_up_to, normalize_mono

CENTRAL = (1 - 4 * NU * NU) * Fraction(1, 16)


class InconsistentVirasoroError(ArithmeticError):
    """Two constraints assign different values to one tau coefficient."""


@dataclass(frozen=True)
class TauExpansion:
    poly: TimePoly
    level: int

    def coefficient(self, mono):
        return self.poly[mono]

    def log(self) -> TimePoly:
        return self.poly.log()

    def correlator(self, ells: Iterable[int]):
        """Connected correlator ``d^n log tau`` at 0."""
        return self.log().correlator(ells)


def apply_virasoro(m: int, P: TimePoly, central=CENTRAL) -> TimePoly:
    """``L_m P``; the result's level bound is tracked by TimePoly."""
    if m < 0:
        raise ValueError("Virasoro index must be nonnegative")
    out = P.derivative(m).scale(-1)
    top = max(P.max_time(), 0)
    for l in range(0, max(top - m, 0) + 1):
        out = out + P.derivative(l + m).times_t(l).scale(Fraction(2 * l + 1, 2))
    for l in range(m):
        out = out + P.derivative(l).derivative(m - 1 - l).scale(Fraction(1, 4))
    if m == 0:
        out = out + P.scale(central)
    return out


def check_commutator(m: int, n: int, L: int) -> bool:
    """``[L_m, L_n] P = (m-n) L_{m+n} P`` for every monomial P of level <= L."""
    for mono in monomials_up_to(L):
        P = TimePoly.monomial(mono, NuPoly.const(1))
        lhs = apply_virasoro(m, apply_virasoro(n, P)) - apply_virasoro(n, apply_virasoro(m, P))
        rhs = apply_virasoro(m + n, P).scale(m - n)
        if not (lhs - rhs).is_zero():
            return False
    return True


def _bump(mono, i, by=1):
    e = list(mono) + [0] * max(0, i + 1 - len(mono))
    e[i] += by
    return normalize_mono(e)


def _exp(mono, i):
    return mono[i] if i < len(mono) else 0


def _constraint_rhs(m: int, mu: Tuple[int, ...], c: Dict, central) -> object:
    """All terms of the coefficient of ``t^mu`` in ``L_m tau`` except ``-d/dt_m``."""
    acc = 0
    top = max(len(mu), 1)
    for l in range(top):
        k = _exp(mu, l)
        if not k:
            continue
        target = normalize_mono(_bump(_bump(mu, l, -1), l + m))
        v = c.get(target)
        if v:
            acc = acc + v * Fraction((2 * l + 1) * _exp(target, l + m), 2)
    for a in range(m):
        b = m - 1 - a
        target = _bump(_bump(mu, a), b)
        v = c.get(target)
        if v:
            mult = _exp(target, a) * (_exp(target, b) - (1 if a == b else 0))
            acc = acc + v * Fraction(mult, 4)
    if m == 0:
        v = c.get(normalize_mono(mu))
        if v:
            acc = acc + v * central
    return acc


def _solve_coefficient(m: int, mono, c, central):
    mu = normalize_mono(_bump(mono, m, -1))
    return _constraint_rhs(m, mu, c, central) * Fraction(1, _exp(mono, m))


def _solve(L: int, schedule: str, central) -> Dict:
    if L < 0:
        raise ValueError("level must be nonnegative")
    c: Dict = {(): NuPoly.const(1) if central is CENTRAL else Fraction(1)}
    for W in range(1, L + 1):
        for mono in monomials_up_to(W, min_level=W):
            ms = [i for i, e in enumerate(mono) if e]
            if schedule == "largest":
                ms.reverse()
            value = _solve_coefficient(ms[0], mono, c, central)
            for m in ms[1:]:
                other = _solve_coefficient(m, mono, c, central)
                if other != value:
                    raise InconsistentVirasoroError(
                        f"constraints L_{ms[0]} and L_{m} disagree on t^{mono}: {value} vs {other}")
            if value:
                c[mono] = value
    return c


@lru_cache(maxsize=None)
def _solve_cached(L: int, schedule: str) -> TimePoly:
    return TimePoly(_solve(L, schedule, CENTRAL), L)


def solve_tau(L: int, schedule: str = "smallest") -> TauExpansion:
    """Tau coefficients of level <= L from ``L_m tau = 0`` and ``c_() = 1``.

    ``schedule`` picks which constraint computes each coefficient
    (``"smallest"`` or ``"largest"`` m); all others are checked against it.
    """
    if schedule not in ("smallest", "largest"):
        raise ValueError(f"unknown schedule {schedule!r}")
    return TauExpansion(_solve_cached(L, schedule), L)


def solve_tau_at(L: int, nu) -> TimePoly:
    """Tau coefficients with nu specialized to a rational value."""
    nu = Fraction(nu)
    central = (1 - 4 * nu * nu) / 16
    return TimePoly(_solve(L, "smallest", central), L)


def annihilation_check(m: int, L: int, tau: Optional[TimePoly] = None) -> bool:
    """``L_m tau`` vanishes through its trusted level (``L - 2m - 1``)."""
    P = solve_tau(L).poly if tau is None else tau
    return apply_virasoro(m, P).is_zero()


def log_exp_convert(P: TimePoly, direction: str) -> TimePoly:
    if direction == "log":
        return P.log()
    if direction == "exp":
        return P.exp()
    raise ValueError("direction must be 'log' or 'exp'")


def virasoro_connected(ells: Iterable[int]):
    """Connected correlator read off ``log`` of the Virasoro tau."""
    ells = tuple(ells)
    L = sum(2 * l + 1 for l in ells)
    return _log_cached(L).correlator(ells)


@lru_cache(maxsize=None)
def _log_cached(L: int) -> TimePoly:
    return solve_tau(L).log()


def tau_from_correlators(L: int, connected) -> TimePoly:
    """``exp`` of the log-tau built from ``connected(ells)`` for every key of level <= L."""
    c = {}
    for mono in monomials_up_to(L, min_level=1):
        v = connected(ells_from_mono(mono))
        if v:
            c[mono] = v * Fraction(1, mono_factorial(mono))
    return TimePoly(c, L).exp()
