"""Polynomials in the times t_0, t_1, ... graded by level.

The level of ``t_0**m0 * t_1**m1 * ...`` is ``sum (2i+1) * m_i``. A
:class:`TimePoly` stores the part of a (possibly infinite) series up to a
level bound ``L``; coefficients of higher level are unknown and reading them
raises :class:`UntrustedCoefficientError`. ``L = inf`` means the polynomial
is exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .series import UntrustedCoefficientError

INF = math.inf
Mono = Tuple[int, ...]


def normalize_mono(m: Iterable[int]) -> Mono:
    m = list(m)
    if any(e < 0 for e in m):
        raise ValueError(f"negative exponent in monomial {m}")
    while m and m[-1] == 0:
        m.pop()
    return tuple(m)


def level(m: Sequence[int]) -> int:
    return sum((2 * i + 1) * e for i, e in enumerate(m))


def mono_from_ells(ells: Iterable[int]) -> Mono:
    """Monomial ``t_{l1} t_{l2} ...`` from a list of indices."""
    ells = list(ells)
    if not ells:
        return ()
    out = [0] * (max(ells) + 1)
    for l in ells:
        out[l] += 1
    return tuple(out)


def ells_from_mono(m: Mono) -> Tuple[int, ...]:
    return tuple(i for i, e in enumerate(m) for _ in range(e))


def mono_factorial(m: Mono) -> int:
    out = 1
    for e in m:
        out *= factorial(e)
    return out


def monomials_up_to(max_level: int, *, min_level: int = 0) -> Iterator[Mono]:
    """All monomials with ``min_level <= level <= max_level``, in a canonical order."""
    out = []

    def rec(i: int, prefix: list, lev: int):
        w = 2 * i + 1
        if w > max_level - lev:
            m = normalize_mono(prefix)
            if lev >= min_level:
                out.append(m)
            return
        for e in range((max_level - lev) // w + 1):
            rec(i + 1, prefix + [e], lev + e * w)

    rec(0, [], 0)
    out.sort(key=lambda m: (level(m), m))
    return iter(out)


class TimePoly:
    __slots__ = ("_c", "L")

    def __init__(self, coeffs: Mapping[Sequence[int], object] | None = None, L=INF):
        c: Dict[Mono, object] = {}
        if coeffs:
            for m, v in coeffs.items():
                if not v:
                    continue
                m = normalize_mono(m)
                if level(m) > L:
                    continue
                c[m] = c[m] + v if m in c else v
        self._c = {m: v for m, v in c.items() if v}
        self.L = L

    @classmethod
    def _raw(cls, c, L) -> "TimePoly":
        obj = cls.__new__(cls)
        obj._c = c
        obj.L = L
        return obj

    @classmethod
    def constant(cls, value=Fraction(1), L=INF) -> "TimePoly":
        return cls({(): value}, L)

    @classmethod
    def monomial(cls, mono: Sequence[int], coeff=Fraction(1), L=INF) -> "TimePoly":
        return cls({tuple(mono): coeff}, L)

    @classmethod
    def time(cls, ell: int, L=INF) -> "TimePoly":
        return cls.monomial(mono_from_ells([ell]), Fraction(1), L)

    # -- access -------------------------------------------------------
    def __getitem__(self, m: Sequence[int]):
        m = normalize_mono(m)
        if level(m) > self.L:
            raise UntrustedCoefficientError(
                f"monomial {m} has level {level(m)} above the trusted bound {self.L}")
        return self._c.get(m, 0)

    coefficient = __getitem__

    def correlator(self, ells: Iterable[int]):
        """``d^n P / dt_{l1}...dt_{ln}`` at ``t = 0``."""
        m = mono_from_ells(ells)
        c = self[m]
        return c * mono_factorial(m) if c else c

    def items(self) -> Iterator[Tuple[Mono, object]]:
        return iter(sorted(self._c.items(), key=lambda kv: (level(kv[0]), kv[0])))

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def valuation(self):
        """Lower bound for the level of any nonzero term of the true series."""
        if self._c:
            return min(level(m) for m in self._c)
        return self.L + 1 if self.L != INF else INF

    def max_time(self) -> int:
        return max((len(m) for m in self._c), default=0) - 1

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TimePoly):
            return other
        return TimePoly.constant(other)

    def __add__(self, other) -> "TimePoly":
        other = self._coerce(other)
        L = min(self.L, other.L)
        c = {m: v for m, v in self._c.items() if level(m) <= L}
        for m, v in other._c.items():
            if level(m) > L:
                continue
            if m in c:
                s = c[m] + v
                if s:
                    c[m] = s
                else:
                    del c[m]
            else:
                c[m] = v
        return TimePoly._raw(c, L)

    __radd__ = __add__

    def __neg__(self) -> "TimePoly":
        return TimePoly._raw({m: -v for m, v in self._c.items()}, self.L)

    def __sub__(self, other) -> "TimePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TimePoly":
        return self._coerce(other) - self

    def scale(self, k) -> "TimePoly":
        c = {}
        for m, v in self._c.items():
            w = v * k
            if w:
                c[m] = w
        return TimePoly._raw(c, self.L)

    def __mul__(self, other) -> "TimePoly":
        if not isinstance(other, TimePoly):
            return self.scale(other)
        L = min(self.L + other.valuation(), other.L + self.valuation())
        right = sorted(((level(m), m, v) for m, v in other._c.items()), key=lambda t: t[0])
        c: Dict[Mono, object] = {}
        for m1, v1 in self._c.items():
            l1 = level(m1)
            for l2, m2, v2 in right:
                if l1 + l2 > L:
                    break
                n = max(len(m1), len(m2))
                m = tuple((m1[i] if i < len(m1) else 0) + (m2[i] if i < len(m2) else 0)
                          for i in range(n))
                p = v1 * v2
                c[m] = c[m] + p if m in c else p
        return TimePoly._raw({m: v for m, v in c.items() if v}, L)

    def __rmul__(self, k) -> "TimePoly":
        return self.scale(k)

    def __pow__(self, k: int) -> "TimePoly":
        if k < 0:
            raise ValueError("negative exponent")
        out = TimePoly.constant(Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def derivative(self, ell: int) -> "TimePoly":
        """``d/dt_ell``; the trusted level drops by ``2*ell + 1``."""
        c = {}
        for m, v in self._c.items():
            if ell < len(m) and m[ell]:
                e = list(m)
                k = e[ell]
                e[ell] -= 1
                c[normalize_mono(e)] = v * k
        return TimePoly._raw(c, self.L - (2 * ell + 1))

    def times_t(self, ell: int) -> "TimePoly":
        """Multiply by ``t_ell``; the trusted level rises by ``2*ell + 1``."""
        c = {}
        for m, v in self._c.items():
            e = list(m) + [0] * max(0, ell + 1 - len(m))
            e[ell] += 1
            c[tuple(e)] = v
        return TimePoly._raw(c, self.L + 2 * ell + 1)

    def truncate(self, L) -> "TimePoly":
        L = min(L, self.L)
        return TimePoly._raw({m: v for m, v in self._c.items() if level(m) <= L}, L)

    def map(self, f: Callable) -> "TimePoly":
        c = {}
        for m, v in self._c.items():
            w = f(v)
            if w:
                c[m] = w
        return TimePoly._raw(c, self.L)

    def is_zero(self) -> bool:
        """True when every trusted coefficient vanishes."""
        return not self._c

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimePoly):
            return NotImplemented
        return self.L == other.L and self._c == other._c

    def __repr__(self) -> str:
        return f"TimePoly(terms={len(self._c)}, L={self.L})"

    # -- graded exp/log -------------------------------------------------
    def exp(self) -> "TimePoly":
        if self._c.get(()):
            raise ValueError("exp needs a series without constant term")
        if self.L == INF:
            raise ValueError("exp needs a finite level bound")
        v = self.valuation()
        out = TimePoly.constant(Fraction(1), self.L)
        if v == INF:
            return out
        term = TimePoly.constant(Fraction(1), self.L)
        k = 1
        while k * v <= self.L:
            term = (term * self).scale(Fraction(1, k))
            out = out + term
            k += 1
        return out.truncate(self.L)

    def log(self) -> "TimePoly":
        if self._c.get(()) != 1:
            raise ValueError("log needs a series with constant term 1")
        if self.L == INF:
            raise ValueError("log needs a finite level bound")
        q = self - TimePoly.constant(Fraction(1))
        v = q.valuation()
        out = TimePoly({}, self.L)
        if v == INF:
            return out
        power = TimePoly.constant(Fraction(1), self.L)
        k = 1
        while k * v <= self.L:
            power = power * q
            out = out + power.scale(Fraction((-1) ** (k + 1), k))
            k += 1
        return out.truncate(self.L)
