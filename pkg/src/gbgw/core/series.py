"""Truncated Laurent series in one or several variables.

Every series carries a *window* that says which coefficients are known
exactly. Reading a coefficient outside the trusted window raises
:class:`UntrustedCoefficientError` instead of returning a silent zero.

One variable
    ``[lo, hi]``: ``hi`` bounds the exponents of the true series from above,
    coefficients with exponent ``>= lo`` are exact. ``lo = -inf`` marks an
    exact Laurent polynomial.

Several variables
    Series in ``z_1, ..., z_n`` are always expanded in the region
    ``|z_1| > |z_2| > ... > |z_n|``. Windows are declared in the flag
    coordinates ``s_j = e_1 + ... + e_j`` (the exponents with respect to
    ``y_j = z_j / z_{j+1}``, ``y_n = z_n``), in which every series of interest
    is bounded above. A coefficient is exact when ``s_j >= lo[j]`` for all
    ``j``. Products then obey the same rule as in one variable, coordinate by
    coordinate, which is what makes geometric expansions of ``1/(z_a - z_b)``
    composable.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import accumulate
from typing import Callable, Dict, Iterable, Iterator, Mapping, Sequence, Tuple

NEG_INF = -math.inf


class UntrustedCoefficientError(LookupError):
    """A coefficient outside the trusted window was requested."""


def _window_product(lo_a, hi_a, lo_b, hi_b):
    return max(lo_a + hi_b, hi_a + lo_b), hi_a + hi_b


def _top(coeffs: Mapping) -> float:
    return max(coeffs) if coeffs else NEG_INF


class LaurentSeries:
    __slots__ = ("var", "_c", "lo", "hi")

    def __init__(self, var: str, coeffs: Mapping[int, object], lo=NEG_INF, hi=None):
        c = {int(e): v for e, v in coeffs.items() if v}
        if hi is None:
            hi = _top(c)
        for e in c:
            if e < lo or e > hi:
                raise ValueError(f"stored exponent {e} outside window [{lo}, {hi}]")
        self.var = var
        self._c = c
        self.lo = lo
        self.hi = hi

    @classmethod
    def zero(cls, var: str) -> "LaurentSeries":
        return cls(var, {}, NEG_INF, NEG_INF)

    @classmethod
    def monomial(cls, var: str, exponent: int, coeff=Fraction(1)) -> "LaurentSeries":
        return cls(var, {exponent: coeff})

    # -- access -------------------------------------------------------
    @property
    def window(self) -> Tuple[float, float]:
        return self.lo, self.hi

    @property
    def is_exact(self) -> bool:
        return self.lo == NEG_INF

    def is_trusted(self, e: int) -> bool:
        return e >= self.lo

    def __getitem__(self, e: int):
        if e < self.lo:
            raise UntrustedCoefficientError(
                f"coefficient of {self.var}^{e} lies below trusted window [{self.lo}, {self.hi}]")
        return self._c.get(e, 0)

    coefficient = __getitem__

    def items(self) -> Iterator[Tuple[int, object]]:
        return iter(sorted(self._c.items(), reverse=True))

    def exponents(self):
        return sorted(self._c, reverse=True)

    def trusted_range(self) -> range:
        """Exponents that are both trusted and possibly nonzero (finite windows only)."""
        if self.lo == NEG_INF:
            lo = min(self._c) if self._c else 0
        else:
            lo = int(self.lo)
        hi = int(self.hi) if self.hi != NEG_INF else lo - 1
        return range(hi, lo - 1, -1)

    def is_zero_on_window(self) -> bool:
        return not self._c

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "LaurentSeries"):
        if not isinstance(other, LaurentSeries):
            raise TypeError("expected a LaurentSeries")
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        lo = max(self.lo, other.lo)
        c = {e: v for e, v in self._c.items() if e >= lo}
        for e, v in other._c.items():
            if e >= lo:
                s = c[e] + v if e in c else v
                if s:
                    c[e] = s
                else:
                    c.pop(e, None)
        return LaurentSeries(self.var, c, lo, max(self.hi, other.hi))

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.var, {e: -v for e, v in self._c.items()}, self.lo, self.hi)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, k) -> "LaurentSeries":
        """Multiply every coefficient by the scalar (or NuPoly) ``k``."""
        return LaurentSeries(self.var, {e: v * k for e, v in self._c.items()}, self.lo, self.hi)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``var**k``."""
        return LaurentSeries(self.var, {e + k: v for e, v in self._c.items()},
                             self.lo + k, self.hi + k)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        self._check(other)
        lo, hi = _window_product(self.lo, self.hi, other.lo, other.hi)
        c: Dict[int, object] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                if e < lo:
                    continue
                c[e] = c[e] + v1 * v2 if e in c else v1 * v2
        return LaurentSeries(self.var, c, lo, hi)

    def __rmul__(self, k):
        return self.scale(k)

    def derivative(self) -> "LaurentSeries":
        c = {e - 1: v * e for e, v in self._c.items() if e}
        return LaurentSeries(self.var, c, self.lo - 1, self.hi - 1)

    def map(self, f: Callable) -> "LaurentSeries":
        return LaurentSeries(self.var, {e: f(v) for e, v in self._c.items()}, self.lo, self.hi)

    def truncate(self, lo: int) -> "LaurentSeries":
        """Forget everything below ``lo`` (coarser window)."""
        lo = max(lo, self.lo)
        return LaurentSeries(self.var, {e: v for e, v in self._c.items() if e >= lo}, lo, self.hi)

    def mark_exact(self) -> "LaurentSeries":
        """Declare the stored coefficients to be the whole series."""
        return LaurentSeries(self.var, self._c, NEG_INF, self.hi)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.var == other.var and self._c == other._c and self.window == other.window

    def __repr__(self) -> str:
        terms = ", ".join(f"{e}: {v}" for e, v in self.items())
        return f"LaurentSeries({self.var!r}, {{{terms}}}, window=[{self.lo}, {self.hi}])"


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_derivative(a: LaurentSeries) -> LaurentSeries:
    return a.derivative()


# ---------------------------------------------------------------------------
# several variables
# ---------------------------------------------------------------------------

Exps = Tuple[int, ...]


def flag_coordinates(e: Sequence[int]) -> Tuple[int, ...]:
    """Prefix sums ``(e_1, e_1+e_2, ...)``."""
    return tuple(accumulate(e))


class MultiSeries:
    """Laurent series in ``z_1..z_n`` expanded in ``|z_1| > ... > |z_n|``.

    ``lo`` and ``hi`` are per-coordinate window bounds in the flag
    coordinates (see the module docstring).
    """

    __slots__ = ("n", "_c", "lo", "hi")

    def __init__(self, n: int, coeffs: Mapping[Exps, object], lo: Sequence, hi: Sequence | None = None):
        if n < 1:
            raise ValueError("arity must be positive")
        c = {}
        for e, v in coeffs.items():
            if len(e) != n:
                raise ValueError(f"exponent vector {e} has wrong length for arity {n}")
            if v:
                c[tuple(e)] = v
        lo = tuple(lo)
        if hi is None:
            if c:
                flags = [flag_coordinates(e) for e in c]
                hi = tuple(max(f[j] for f in flags) for j in range(n))
            else:
                hi = (NEG_INF,) * n
        hi = tuple(hi)
        if len(lo) != n or len(hi) != n:
            raise ValueError("window length does not match arity")
        for e in c:
            s = flag_coordinates(e)
            if any(s[j] < lo[j] or s[j] > hi[j] for j in range(n)):
                raise ValueError(f"stored exponent {e} outside window")
        self.n = n
        self._c = c
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, n, c, lo, hi) -> "MultiSeries":
        obj = cls.__new__(cls)
        obj.n, obj._c, obj.lo, obj.hi = n, c, tuple(lo), tuple(hi)
        return obj

    @classmethod
    def constant(cls, n: int, value=Fraction(1)) -> "MultiSeries":
        if not value:
            return cls._raw(n, {}, (NEG_INF,) * n, (NEG_INF,) * n)
        return cls._raw(n, {(0,) * n: value}, (NEG_INF,) * n, (0,) * n)

    @classmethod
    def embed(cls, series: LaurentSeries, pos: int, n: int) -> "MultiSeries":
        """View a one-variable series as a series in variable ``z_{pos+1}`` of ``n``."""
        if not 0 <= pos < n:
            raise ValueError("position out of range")
        c = {}
        for e, v in series._c.items():
            key = [0] * n
            key[pos] = e
            c[tuple(key)] = v
        if series._c or series.hi != NEG_INF:
            hi = tuple(0 if j < pos else series.hi for j in range(n))
        else:
            hi = (NEG_INF,) * n
        lo = tuple(series.lo if j == pos else NEG_INF for j in range(n))
        return cls._raw(n, c, lo, hi)

    # -- access -------------------------------------------------------
    @property
    def window(self):
        return self.lo, self.hi

    def is_trusted(self, e: Sequence[int]) -> bool:
        s = flag_coordinates(e)
        return all(s[j] >= self.lo[j] for j in range(self.n))

    def __getitem__(self, e: Sequence[int]):
        e = tuple(e)
        if len(e) != self.n:
            raise ValueError("wrong number of exponents")
        if not self.is_trusted(e):
            raise UntrustedCoefficientError(
                f"coefficient {e} is outside the trusted window lo={self.lo}")
        return self._c.get(e, 0)

    coefficient = __getitem__

    def items(self) -> Iterator[Tuple[Exps, object]]:
        return iter(sorted(self._c.items()))

    def __len__(self) -> int:
        return len(self._c)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "MultiSeries"):
        if not isinstance(other, MultiSeries):
            raise TypeError("expected a MultiSeries")
        if other.n != self.n:
            raise ValueError(f"arity mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        self._check(other)
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(max(a, b) for a, b in zip(self.hi, other.hi))
        c = {}
        for src in (self._c, other._c):
            for e, v in src.items():
                if e in c:
                    s = c[e] + v
                    if s:
                        c[e] = s
                    else:
                        del c[e]
                else:
                    c[e] = v
        c = {e: v for e, v in c.items() if _above(flag_coordinates(e), lo)}
        return MultiSeries._raw(self.n, c, lo, hi)

    def __neg__(self) -> "MultiSeries":
        return MultiSeries._raw(self.n, {e: -v for e, v in self._c.items()}, self.lo, self.hi)

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        return self + (-other)

    def scale(self, k) -> "MultiSeries":
        c = {}
        for e, v in self._c.items():
            w = v * k
            if w:
                c[e] = w
        return MultiSeries._raw(self.n, c, self.lo, self.hi)

    def product_window(self, other: "MultiSeries"):
        lo, hi = [], []
        for j in range(self.n):
            l, h = _window_product(self.lo[j], self.hi[j], other.lo[j], other.hi[j])
            lo.append(l)
            hi.append(h)
        return tuple(lo), tuple(hi)

    def mul(self, other: "MultiSeries", floor: Sequence | None = None) -> "MultiSeries":
        """Product; ``floor`` optionally raises the lower window (pruning)."""
        self._check(other)
        lo, hi = self.product_window(other)
        if floor is not None:
            lo = tuple(max(a, b) for a, b in zip(lo, floor))
        n = self.n
        left = [(e, flag_coordinates(e), v) for e, v in self._c.items()]
        right = [(e, flag_coordinates(e), v) for e, v in other._c.items()]
        c: Dict[Exps, object] = {}
        rng = range(n)
        for e1, s1, v1 in left:
            need = [lo[j] - s1[j] for j in rng]
            for e2, s2, v2 in right:
                ok = True
                for j in rng:
                    if s2[j] < need[j]:
                        ok = False
                        break
                if not ok:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                p = v1 * v2
                if e in c:
                    c[e] = c[e] + p
                else:
                    c[e] = p
        c = {e: v for e, v in c.items() if v}
        return MultiSeries._raw(n, c, lo, hi)

    def __mul__(self, other):
        if isinstance(other, MultiSeries):
            return self.mul(other)
        return self.scale(other)

    def product_coefficient(self, other: "MultiSeries", e: Sequence[int]):
        """Coefficient of ``e`` in ``self * other`` without forming the product."""
        self._check(other)
        e = tuple(e)
        lo, _ = self.product_window(other)
        s = flag_coordinates(e)
        if any(s[j] < lo[j] for j in range(self.n)):
            raise UntrustedCoefficientError(f"coefficient {e} outside product window lo={lo}")
        small, big = (self, other) if len(self._c) <= len(other._c) else (other, self)
        acc = 0
        for e1, v1 in small._c.items():
            e2 = tuple(a - b for a, b in zip(e, e1))
            v2 = big._c.get(e2)
            if v2 is not None:
                acc = acc + v1 * v2
        return acc

    def map(self, f: Callable) -> "MultiSeries":
        c = {}
        for e, v in self._c.items():
            w = f(v)
            if w:
                c[e] = w
        return MultiSeries._raw(self.n, c, self.lo, self.hi)

    def permute(self, perm: Sequence[int]) -> Dict[Exps, object]:
        """Coefficients with variables relabelled ``z_i -> z_{perm[i]}``.

        The result is returned as a plain mapping since the relabelled series
        is in general expanded in a different region.
        """
        out = {}
        for e, v in self._c.items():
            key = [0] * self.n
            for i, p in enumerate(perm):
                key[p] = e[i]
            out[tuple(key)] = v
        return out

    def __repr__(self) -> str:
        return f"MultiSeries(n={self.n}, terms={len(self._c)}, lo={self.lo}, hi={self.hi})"


def _above(s, lo) -> bool:
    return all(a >= b for a, b in zip(s, lo))


def geometric_denominator(a_pos: int, b_pos: int, order: int, n: int) -> MultiSeries:
    """Expansion of ``1/(z_a - z_b)`` in the fixed region, to ``order`` terms past the first.

    Positions are 0-based. For ``a < b`` this is
    ``sum_{k=0}^{order} z_b**k * z_a**(-k-1)``; for ``a > b`` it is the negative
    of the mirrored series.
    """
    if a_pos == b_pos:
        raise ValueError("1/(z_a - z_a) has no expansion")
    if not (0 <= a_pos < n and 0 <= b_pos < n):
        raise ValueError("position out of range")
    if order < 0:
        raise ValueError("order must be nonnegative")
    big, small = (a_pos, b_pos) if a_pos < b_pos else (b_pos, a_pos)
    sign = 1 if a_pos < b_pos else -1
    c = {}
    for k in range(order + 1):
        key = [0] * n
        key[big] = -k - 1
        key[small] = k
        c[tuple(key)] = Fraction(sign)
    lo = tuple(-order - 1 if j == big else NEG_INF for j in range(n))
    hi = tuple(0 if j < big else -1 for j in range(n))
    return MultiSeries._raw(n, c, lo, hi)
