"""Sparse Laurent polynomials in named symbols, with derivations.

A :class:`DiffPoly` is a finite sum of monomials in string-named symbols with
integer (possibly negative) exponents and exact coefficients (Fractions or
NuPolys). Jet variables of a dependent symbol ``u`` are ``u_0, u_1, ...``;
a :class:`Derivation` sends ``u_k`` to ``u_{k+1}`` and acts on the remaining
symbols through explicit rules, so one ring carries x, parameters, z and
rational functions such as ``w = 1/(2-x)`` (with ``D w = w^2``).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple

Mono = Tuple[Tuple[str, int], ...]


def _mono(d: Mapping[str, int]) -> Mono:
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _mono_mul(a: Mono, b: Mono) -> Mono:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return _mono(d)


class DiffPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Mapping[Mono, object]] = None):
        self._c: Dict[Mono, object] = {}
        for m, v in (coeffs or {}).items():
            if v:
                m = _mono(dict(m))
                s = self._c.get(m, 0) + v
                if s:
                    self._c[m] = s
                else:
                    self._c.pop(m, None)

    @classmethod
    def _raw(cls, c) -> "DiffPoly":
        obj = cls.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def const(cls, value) -> "DiffPoly":
        return cls({(): value})

    @classmethod
    def var(cls, name: str, power: int = 1, coeff=Fraction(1)) -> "DiffPoly":
        return cls({((name, power),): coeff})

    @classmethod
    def jet(cls, name: str, k: int) -> "DiffPoly":
        return cls.var(jet_name(name, k))

    # -- inspection -----------------------------------------------------
    def items(self):
        return sorted(self._c.items(), key=lambda kv: kv[0])

    def terms(self) -> Dict[Mono, object]:
        return dict(self._c)

    def symbols(self) -> set:
        return {v for m in self._c for v, _ in m}

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._c), default=0)

    def coefficient_of(self, name: str, power: int) -> "DiffPoly":
        """Part multiplying ``name**power`` (other symbols kept)."""
        out = {}
        for m, v in self._c.items():
            d = dict(m)
            if d.get(name, 0) == power:
                d.pop(name, None)
                out[_mono(d)] = v
        return DiffPoly._raw(out)

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(other) -> "DiffPoly":
        return other if isinstance(other, DiffPoly) else DiffPoly.const(other)

    def __add__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        c = dict(self._c)
        for m, v in other._c.items():
            s = c.get(m, 0) + v
            if s:
                c[m] = s
            else:
                c.pop(m, None)
        return DiffPoly._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw({m: -v for m, v in self._c.items()})

    def __sub__(self, other) -> "DiffPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "DiffPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            if not other:
                return DiffPoly()
            return DiffPoly._raw({m: v * other for m, v in self._c.items() if v * other})
        c: Dict[Mono, object] = {}
        for m1, v1 in self._c.items():
            for m2, v2 in other._c.items():
                m = _mono_mul(m1, m2)
                s = c.get(m, 0) + v1 * v2
                if s:
                    c[m] = s
                else:
                    c.pop(m, None)
        return DiffPoly._raw(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DiffPoly":
        if k < 0:
            return self.inverse() ** (-k)
        out = DiffPoly.const(Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "DiffPoly":
        """Inverse of a single term."""
        if len(self._c) != 1:
            raise ZeroDivisionError("only monomials are invertible")
        (m, v), = self._c.items()
        return DiffPoly._raw({tuple((s, -e) for s, e in m): 1 / v})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            other = DiffPoly.const(other)
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    # -- substitution ---------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "DiffPoly":
        """Replace symbols by DiffPolys (negative powers need invertible values)."""
        out = DiffPoly()
        cache: Dict[Tuple[str, int], DiffPoly] = {}
        for m, v in self._c.items():
            term = DiffPoly.const(v)
            for s, e in m:
                if s in values:
                    key = (s, e)
                    if key not in cache:
                        cache[key] = DiffPoly._coerce(values[s]) ** e
                    term = term * cache[key]
                else:
                    term = term * DiffPoly.var(s, e)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, object], one):
        """Evaluate in another ring: every symbol must have a value; ``one`` is its unit."""
        total = None
        powers: Dict[Tuple[str, int], object] = {}
        for m, v in self.items():
            term = one * v
            for s, e in m:
                if e < 0:
                    raise ValueError(f"cannot evaluate negative power of {s}")
                if (s, e) not in powers:
                    p = one
                    for _ in range(e):
                        p = p * values[s]
                    powers[(s, e)] = p
                term = term * powers[(s, e)]
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def map_coefficients(self, f: Callable) -> "DiffPoly":
        return DiffPoly({m: f(v) for m, v in self._c.items()})

    def __repr__(self) -> str:
        return f"DiffPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for m, v in self.items():
            mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in m)
            parts.append(f"({v})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def jet_name(name: str, k: int) -> str:
    return f"{name}_{k}"


def split_jet(symbol: str, jets: Iterable[str]):
    """``("u", 3)`` for ``"u_3"`` when ``u`` is a declared dependent symbol."""
    base, _, idx = symbol.rpartition("_")
    if base in jets and idx.isdigit():
        return base, int(idx)
    return None


class Derivation:
    """Derivation acting on jets of ``jets`` by shifting the index and on other
    symbols through ``rules`` (missing symbols are constants)."""

    def __init__(self, jets: Iterable[str] = (), rules: Optional[Mapping[str, DiffPoly]] = None):
        self.jets = frozenset(jets)
        self.rules = {k: DiffPoly._coerce(v) for k, v in (rules or {}).items()}

    def of_symbol(self, s: str) -> DiffPoly:
        j = split_jet(s, self.jets)
        if j is not None:
            return DiffPoly.jet(j[0], j[1] + 1)
        return self.rules.get(s, DiffPoly())

    def __call__(self, P: DiffPoly, times: int = 1) -> DiffPoly:
        for _ in range(times):
            P = self._once(P)
        return P

    def _once(self, P: DiffPoly) -> DiffPoly:
        out = DiffPoly()
        derivs: Dict[str, DiffPoly] = {}
        for m, v in P._c.items():
            for i, (s, e) in enumerate(m):
                if s not in derivs:
                    derivs[s] = self.of_symbol(s)
                ds = derivs[s]
                if ds.is_zero():
                    continue
                rest = dict(m)
                rest[s] = e - 1
                out = out + DiffPoly._raw({_mono(rest): v * e}) * ds
        return out


def top_jet(P: DiffPoly, name: str) -> int:
    """Highest k with ``name_k`` present (-1 when absent)."""
    top = -1
    for s in P.symbols():
        j = split_jet(s, (name,))
        if j is not None:
            top = max(top, j[1])
    return top


def reduce_modulo(P: DiffPoly, name: str, order: int, rule: DiffPoly, D: Derivation) -> DiffPoly:
    """Rewrite ``name_k`` for ``k >= order`` using ``name_order = rule`` and its
    derivatives; ``rule`` may only involve jets below ``order``."""
    if top_jet(rule, name) >= order:
        raise ValueError("reduction rule must be of lower order")
    top = top_jet(P, name)
    rules = {order: rule}
    for k in range(order + 1, top + 1):
        rules[k] = D(rules[k - 1]).subs({jet_name(name, order): rule})
    return P.subs({jet_name(name, k): r for k, r in rules.items()})


# -- 2x2 matrices of DiffPolys --------------------------------------------

Matrix = Sequence[Sequence[DiffPoly]]


def mat(rows) -> list:
    return [[DiffPoly._coerce(x) for x in r] for r in rows]


def mat_add(a: Matrix, b: Matrix, scale=1) -> list:
    return [[a[i][j] + b[i][j] * scale for j in range(2)] for i in range(2)]


def mat_mul(a: Matrix, b: Matrix) -> list:
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]


def mat_map(a: Matrix, f: Callable) -> list:
    return [[f(a[i][j]) for j in range(2)] for i in range(2)]


def commutator(a: Matrix, b: Matrix) -> list:
    return mat_add(mat_mul(a, b), mat_mul(b, a), -1)


def is_zero_matrix(a: Matrix) -> bool:
    return all(a[i][j].is_zero() for i in range(2) for j in range(2))


def zero_curvature(A: Matrix, Omega: Matrix, Dt: Derivation, Dz: Derivation) -> list:
    """``A_t - Omega_z - [Omega, A]`` for ``Psi_z = A Psi``, ``Psi_t = Omega Psi``."""
    return mat_add(mat_add(mat_map(A, Dt), mat_map(Omega, Dz), -1), commutator(Omega, A), -1)
