"""Polynomials in the parameter nu with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Scalar = Union[int, Fraction]


def _as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class NuPoly:
    """Sparse polynomial in ``nu`` over the rationals.

    Instances are immutable. Zero coefficients are never stored, so two
    equal polynomials always have identical ``coeffs`` mappings.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        c: Dict[int, Fraction] = {}
        if coeffs:
            for d, v in coeffs.items():
                if d < 0:
                    raise ValueError("negative power of nu")
                v = _as_fraction(v)
                if v:
                    c[int(d)] = v
        self._c = c
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, c: Dict[int, Fraction]) -> "NuPoly":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, value: Scalar) -> "NuPoly":
        value = _as_fraction(value)
        return cls._raw({0: value} if value else {})

    @classmethod
    def nu(cls) -> "NuPoly":
        return cls._raw({1: Fraction(1)})

    @classmethod
    def linear(cls, offset: Scalar, slope: Scalar) -> "NuPoly":
        """``offset + slope * nu``."""
        return cls({0: offset, 1: slope})

    @classmethod
    def from_list(cls, coeffs: Iterable[Scalar]) -> "NuPoly":
        return cls({d: v for d, v in enumerate(coeffs)})

    # -- inspection ---------------------------------------------------
    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(sorted(self._c.items()))

    def __getitem__(self, d: int) -> Fraction:
        return self._c.get(d, Fraction(0))

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "NuPoly":
        if isinstance(other, NuPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return NuPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for d, v in other._c.items():
            s = c.get(d, 0) + v
            if s:
                c[d] = s
            else:
                c.pop(d, None)
        return NuPoly._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "NuPoly":
        return NuPoly._raw({d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return NuPoly._raw({})
            return NuPoly._raw({d: v * other for d, v in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return NuPoly._raw({})
        c: Dict[int, Fraction] = {}
        for d1, v1 in self._c.items():
            for d2, v2 in other._c.items():
                d = d1 + d2
                c[d] = c.get(d, 0) + v1 * v2
        return NuPoly._raw({d: v for d, v in c.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _as_fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"inexact division of {self} by {other}")
        return q

    def __pow__(self, k: int) -> "NuPoly":
        if k < 0:
            raise ValueError("negative exponent")
        out = NuPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def divmod(self, other: "NuPoly") -> Tuple["NuPoly", "NuPoly"]:
        """Euclidean division in Q[nu]."""
        if other.is_zero():
            raise ZeroDivisionError("NuPoly division by zero")
        rem = dict(self._c)
        q: Dict[int, Fraction] = {}
        dd = other.degree
        lead = other._c[dd]
        while rem and max(rem) >= dd:
            top = max(rem)
            f = rem[top] / lead
            q[top - dd] = f
            for d, v in other._c.items():
                k = d + top - dd
                s = rem.get(k, 0) - f * v
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return NuPoly._raw(q), NuPoly._raw(rem)

    # -- substitutions ------------------------------------------------
    def __call__(self, nu: Scalar) -> Fraction:
        nu = _as_fraction(nu)
        acc = Fraction(0)
        for d in range(self.degree, -1, -1):
            acc = acc * nu + self._c.get(d, 0)
        return acc

    def flip(self) -> "NuPoly":
        """Image under nu -> -nu."""
        return NuPoly._raw({d: (-v if d % 2 else v) for d, v in self._c.items()})

    # -- comparison / display ----------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, NuPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"NuPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for d, v in sorted(self._c.items()):
            if d == 0:
                parts.append(str(v))
            else:
                mono = "nu" if d == 1 else f"nu^{d}"
                if v == 1:
                    parts.append(mono)
                elif v == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"({v})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_pairs(self) -> list:
        """``[[degree, "p/q"], ...]`` sorted by degree (serialisation form)."""
        return [[d, format_rational(v)] for d, v in sorted(self._c.items())]

    @classmethod
    def from_pairs(cls, pairs) -> "NuPoly":
        return cls({int(d): Fraction(v) for d, v in pairs})


NU = NuPoly.nu()
ONE = NuPoly.const(1)
ZERO = NuPoly.const(0)


def format_rational(x: Scalar) -> str:
    x = _as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def as_nupoly(x) -> NuPoly:
    if isinstance(x, NuPoly):
        return x
    return NuPoly.const(x)


class NuRatio:
    """Quotient ``num/den`` of two NuPolys, kept only until it can be reduced.

    Used for the ``(alpha)_{-1}`` convention, whose value is not a polynomial;
    call :meth:`to_poly` once the product has become one.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: NuPoly, den: NuPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = as_nupoly(num)
        self.den = as_nupoly(den)

    def __mul__(self, other):
        if isinstance(other, NuRatio):
            return NuRatio(self.num * other.num, self.den * other.den)
        return NuRatio(self.num * as_nupoly(other), self.den)

    __rmul__ = __mul__

    def __call__(self, nu: Scalar) -> Fraction:
        d = self.den(nu)
        if not d:
            raise ZeroDivisionError(f"pole at nu={nu}")
        return self.num(nu) / d

    def to_poly(self) -> NuPoly:
        q, r = self.num.divmod(self.den)
        if r:
            raise ArithmeticError(f"({self.num})/({self.den}) is not a polynomial in nu")
        return q

    def __repr__(self) -> str:
        return f"NuRatio(({self.num})/({self.den}))"


def pochhammer(offset: Scalar, sign: int, k: int, *, rational: bool = False):
    """Rising factorial ``(offset + sign*nu)_k``.

    ``(alpha)_0 = 1`` and, following the usual convention for these series,
    ``(alpha)_{-1} = 1/(alpha - 1)``. The latter is never a polynomial in nu,
    so it is only returned (as a :class:`NuRatio`) when ``rational=True``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if k < -1:
        raise ValueError(f"Pochhammer index {k} < -1 is not defined")
    offset = _as_fraction(offset)
    if k == -1:
        den = NuPoly.linear(offset - 1, sign)
        if not rational:
            raise ArithmeticError(
                f"({offset}{'+' if sign > 0 else '-'}nu)_(-1) = 1/({den}) is not a polynomial; "
                "pass rational=True")
        return NuRatio(ONE, den)
    out = ONE
    for j in range(k):
        out = out * NuPoly.linear(offset + j, sign)
    return out


def double_factorial(m: int) -> int:
    """Odd double factorial ``m!!`` for ``m >= -1`` odd, with ``(-1)!! = 1``."""
    if m < -1 or m % 2 == 0:
        raise ValueError(f"double_factorial expects an odd m >= -1, got {m}")
    out = 1
    for j in range(3, m + 1, 2):
        out *= j
    return out
