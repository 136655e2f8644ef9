"""The 2x2 matrix series U(z; nu) and checks of its defining identities.

Entries, for k = 0..N (with ``c_k = (2k-1)!! / (k! 8^k)``)::

    U11 = sum c_k * 1/2 (1/2-nu)_{k+1} (1/2+nu)_k      z^{-k}
    U12 = sum c_k * (1/2-nu)_k (1/2+nu)_k              z^{-k}
    U21 = -sum c_k * (1/2-nu)_{k+1} (1/2+nu)_{k-1}     z^{1-k}
    U22 = -U11

The k = 0 term of U21 uses ``(a)_{-1} = 1/(a-1)`` and reduces to ``+z``.
At half-integer nu every series terminates; U is then built exactly.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, List, Optional, Sequence

from .core import NU, NEG_INF, LaurentSeries, NuPoly, double_factorial, pochhammer

HALF = Fraction(1, 2)
VAR = "z"


class MatrixSeries:
    """2x2 matrix of :class:`LaurentSeries` in one shared variable.

    ``nu`` is ``None`` when coefficients are NuPolys, otherwise the rational
    value at which they were specialized. ``order`` is the truncation order N
    (``None`` for exact matrices).
    """

    __slots__ = ("entries", "order", "nu", "var")

    def __init__(self, entries: Sequence[Sequence[LaurentSeries]], order: Optional[int] = None,
                 nu: Optional[Fraction] = None):
        rows = [list(r) for r in entries]
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("MatrixSeries needs a 2x2 array")
        var = rows[0][0].var
        if any(e.var != var for r in rows for e in r):
            raise ValueError("entries use different variables")
        self.entries = rows
        self.order = order
        self.nu = nu
        self.var = var

    def __getitem__(self, ij) -> LaurentSeries:
        i, j = ij
        return self.entries[i][j]

    def _like(self, rows, order=None) -> "MatrixSeries":
        o = self.order if order is None else order
        return MatrixSeries(rows, o, self.nu)

    def _compatible(self, other: "MatrixSeries"):
        if self.nu != other.nu:
            raise ValueError("matrices specialized at different nu")
        return _min_order(self.order, other.order)

    def __add__(self, other: "MatrixSeries") -> "MatrixSeries":
        o = self._compatible(other)
        return MatrixSeries([[self[i, j] + other[i, j] for j in range(2)] for i in range(2)], o, self.nu)

    def __sub__(self, other: "MatrixSeries") -> "MatrixSeries":
        o = self._compatible(other)
        return MatrixSeries([[self[i, j] - other[i, j] for j in range(2)] for i in range(2)], o, self.nu)

    def __neg__(self) -> "MatrixSeries":
        return self._like([[-e for e in r] for r in self.entries])

    def __mul__(self, other):
        if not isinstance(other, MatrixSeries):
            return self._like([[e.scale(other) for e in r] for r in self.entries])
        o = self._compatible(other)
        rows = [[self[i, 0] * other[0, j] + self[i, 1] * other[1, j] for j in range(2)]
                for i in range(2)]
        return MatrixSeries(rows, o, self.nu)

    def commutator(self, other: "MatrixSeries") -> "MatrixSeries":
        return self * other - other * self

    def derivative(self) -> "MatrixSeries":
        return self._like([[e.derivative() for e in r] for r in self.entries])

    def shift(self, k: int) -> "MatrixSeries":
        return self._like([[e.shift(k) for e in r] for r in self.entries])

    def trace(self) -> LaurentSeries:
        return self[0, 0] + self[1, 1]

    def map(self, f: Callable) -> "MatrixSeries":
        return self._like([[e.map(f) for e in r] for r in self.entries])

    def at_nu(self, value) -> "MatrixSeries":
        """Specialize NuPoly coefficients at a rational value of nu."""
        if self.nu is not None:
            raise ValueError("matrix is already specialized")
        value = Fraction(value)
        out = self.map(lambda p: p(value))
        out.nu = value
        return out

    def flip(self) -> "MatrixSeries":
        """Image under nu -> -nu (symbolic matrices only)."""
        if self.nu is not None:
            raise ValueError("nu -> -nu needs a symbolic matrix")
        return self.map(lambda p: p.flip())

    def is_zero(self) -> bool:
        """True when every trusted coefficient of every entry vanishes."""
        return all(e.is_zero_on_window() for r in self.entries for e in r)

    def nonzero_terms(self):
        """``[(i, j, exponent, coefficient)]`` of all stored nonzero coefficients."""
        return [(i, j, e, v) for i in range(2) for j in range(2) for e, v in self[i, j].items()]

    @property
    def is_exact(self) -> bool:
        return all(e.is_exact for r in self.entries for e in r)

    def __repr__(self) -> str:
        return f"MatrixSeries(order={self.order}, nu={self.nu}, windows={[[e.window for e in r] for r in self.entries]})"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def constant_matrix(rows, var: str = VAR, nu=None) -> MatrixSeries:
    """Exact matrix whose entries are given Laurent polynomials ``{exponent: coeff}``
    (or scalars, read as constants)."""
    def entry(x):
        if isinstance(x, dict):
            return LaurentSeries(var, x)
        return LaurentSeries(var, {0: x})
    return MatrixSeries([[entry(x) for x in r] for r in rows], None, nu)


def half_integer_cutoff(nu) -> Optional[int]:
    """For nu = +-(m + 1/2) the index past which every U coefficient vanishes."""
    if nu is None:
        return None
    nu = Fraction(nu)
    twice = 2 * nu
    if twice.denominator != 1 or twice.numerator % 2 == 0:
        return None
    m = (abs(twice.numerator) - 1) // 2
    return m + 1


@lru_cache(maxsize=None)
def u_coefficients(k: int):
    """The NuPoly coefficients (U11 at z^-k, U12 at z^-k, U21 at z^{1-k}) for one k."""
    c = Fraction(double_factorial(2 * k - 1), factorial(k) * 8 ** k)
    minus = pochhammer(HALF, -1, k)
    plus = pochhammer(HALF, 1, k)
    core = minus * plus
    minus_next = minus * NuPoly.linear(HALF + k, -1)
    u11 = minus_next * plus * (c / 2)
    u12 = core * c
    if k == 0:
        # (1/2-nu)_{1} (1/2+nu)_{-1} = (1/2-nu)/(nu-1/2) = -1
        lower = (pochhammer(HALF, 1, -1, rational=True) * minus_next).to_poly()
    else:
        lower = minus_next * pochhammer(HALF, 1, k - 1)
    u21 = lower * (-c)
    return u11, u12, u21


def build_u_matrix(N: int, nu=None) -> MatrixSeries:
    """U(z; nu) truncated at order ``N`` (coefficients of ``z^{1-k}``, k <= N).

    With ``nu`` given the coefficients are specialized to rationals. At a
    half-integer nu the series terminates, so the result is exact whatever N is.
    """
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    cutoff = half_integer_cutoff(nu)
    top = N if cutoff is None else max(N, cutoff)
    c11, c12, c21 = {}, {}, {}
    for k in range(top + 1):
        u11, u12, u21 = u_coefficients(k)
        if nu is not None:
            u11, u12, u21 = u11(nu), u12(nu), u21(nu)
        c11[-k], c12[-k], c21[1 - k] = u11, u12, u21
    if cutoff is None:
        lo_diag, lo_low = -N, 1 - N
    else:
        lo_diag = lo_low = NEG_INF
    e11 = LaurentSeries(VAR, c11, lo_diag, 0)
    e12 = LaurentSeries(VAR, c12, lo_diag, 0)
    e21 = LaurentSeries(VAR, c21, lo_low, 1)
    return MatrixSeries([[e11, e12], [e21, -e11]], N if cutoff is None else None,
                        None if nu is None else Fraction(nu))


def _nu_value(U: MatrixSeries):
    return NU if U.nu is None else U.nu


def ode_matrix(U: MatrixSeries) -> MatrixSeries:
    """A(z) = [[-nu/2z, 1/z], [1, nu/2z]] in the coefficient ring of ``U``."""
    nu = _nu_value(U)
    one = Fraction(1) if U.nu is not None else NuPoly.const(1)
    return constant_matrix([[{-1: nu * Fraction(-1, 2)}, {-1: one}],
                            [{0: one}, {-1: nu * HALF}]], U.var, U.nu)


def _require_order(U: MatrixSeries, minimum: int):
    if U.order is not None and U.order < minimum:
        raise ValueError(f"order {U.order} is too small to certify any coefficient (need {minimum})")


def verify_u_ode(U: MatrixSeries) -> MatrixSeries:
    """Residual ``U' - U/(2z) - [A, U]``; it vanishes on its trusted window."""
    _require_order(U, 2)
    A = ode_matrix(U)
    return U.derivative() - U.shift(-1) * HALF - A.commutator(U)


def verify_u_square(U: MatrixSeries) -> MatrixSeries:
    """Residual ``U*U - z*I``."""
    one = Fraction(1) if U.nu is not None else NuPoly.const(1)
    zero = LaurentSeries.zero(U.var)
    z = LaurentSeries(U.var, {1: one})
    zI = MatrixSeries([[z, zero], [zero, z]], None, U.nu)
    return U * U - zI


def verify_nu_conjugation(U: MatrixSeries) -> bool:
    """Check ``U(-nu) = [[1,0],[-nu,1]] U(nu) [[1,0],[nu,1]]`` on the trusted window."""
    one = NuPoly.const(1)
    P = constant_matrix([[one, 0 * one], [-NU, one]], U.var)
    Q = constant_matrix([[one, 0 * one], [NU, one]], U.var)
    return (U.flip() - P * U * Q).is_zero()


def is_laurent_polynomial(U: MatrixSeries, nu) -> bool:
    """Every coefficient with k past the half-integer cutoff vanishes at ``nu``."""
    cutoff = half_integer_cutoff(nu)
    if cutoff is None or U.nu is not None:
        raise ValueError("needs a symbolic U and a half-integer nu")
    nu = Fraction(nu)
    for i, j, e, v in U.nonzero_terms():
        k = 1 - e if (i, j) == (1, 0) else -e
        if k > cutoff and v(nu):
            return False
    return True
