"""Connected gBGW correlators and their normalizations.

``connected`` values are derivatives of ``log tau`` at ``t = 0``. They come
from two engines:

* the one-point closed form, and
* the permutation sum over traces of products of U, expanded in the region
  ``|z_1| > ... > |z_n|``.

The permutation sum is evaluated one target coefficient at a time. For each
cyclic ordering the denominator product is expanded with pruning floors, and
every surviving denominator term is paired with the trace coefficient it
needs. The result is certified twice: window bookkeeping proves the
truncated coefficient equals the exact one, and recomputation at order N+2
must agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (NEG_INF, LaurentSeries, MultiSeries, NuPoly, TimePoly,
                   UntrustedCoefficientError, double_factorial, flag_coordinates,
                   geometric_denominator, pochhammer)
from .umatrix import HALF, build_u_matrix, ode_matrix, u_coefficients

DEFAULT_ORDER_CAP = 60


class StabilizationError(RuntimeError):
    """The target coefficient did not settle before the order cap."""

    def __init__(self, ells, values, orders, reason: str):
        self.ells = tuple(ells)
        self.values = values
        self.orders = orders
        super().__init__(f"correlator {self.ells}: {reason} (orders {orders}, values {values})")


@dataclass(frozen=True)
class CorrelatorKey:
    ells: Tuple[int, ...]

    def __init__(self, ells: Iterable[int]):
        ells = tuple(sorted(int(l) for l in ells))
        if not ells:
            raise ValueError("a correlator needs at least one insertion")
        if ells[0] < 0:
            raise ValueError("indices must be nonnegative")
        object.__setattr__(self, "ells", ells)

    @property
    def n(self) -> int:
        return len(self.ells)

    @property
    def level(self) -> int:
        return sum(2 * l + 1 for l in self.ells)

    @property
    def genus(self) -> int:
        return sum(self.ells) + 1

    def __str__(self) -> str:
        return ",".join(map(str, self.ells))


@dataclass(frozen=True)
class CorrelatorValue:
    key: CorrelatorKey
    connected: object
    provenance: str
    certified_order: Optional[int] = None


def _key(ells) -> CorrelatorKey:
    return ells if isinstance(ells, CorrelatorKey) else CorrelatorKey(ells)


# ---------------------------------------------------------------------------
# one point
# ---------------------------------------------------------------------------

def one_point(ell: int) -> NuPoly:
    """``d log tau / dt_ell`` at 0 from the closed form."""
    if ell < 0:
        raise ValueError("index must be nonnegative")
    c = Fraction(double_factorial(2 * ell - 1), 2 ** (3 * ell + 2) * factorial(ell + 1))
    return pochhammer(HALF, -1, ell + 1) * pochhammer(HALF, 1, ell + 1) * c


def one_point_series(N: int, nu=None) -> LaurentSeries:
    """``S_1(z) = 2 - tr(A U)`` with U truncated at order N."""
    U = build_u_matrix(N, nu)
    tr = (ode_matrix(U) * U).trace()
    two = Fraction(2) if U.nu is not None else NuPoly.const(2)
    return LaurentSeries(U.var, {0: two}) - tr


def one_point_via_trace(ell: int, N: int, nu=None):
    """Coefficient of ``z^{-1-ell}`` in ``S_1``; must equal :func:`one_point`."""
    s = one_point_series(N, nu)
    try:
        return s[-1 - ell]
    except UntrustedCoefficientError as exc:
        raise ValueError(f"order {N} does not reach z^{-1 - ell}") from exc


# ---------------------------------------------------------------------------
# n points: windows
# ---------------------------------------------------------------------------

def _u_factor_window(i: int, n: int, N: int):
    """Matrix-level window of U(z_i) in flag coordinates."""
    lo = tuple(1 - N if j == i else NEG_INF for j in range(n))
    hi = tuple(0 if j < i else 1 for j in range(n))
    return lo, hi


def _geom_window(a: int, b: int, K: int, n: int):
    g = geometric_denominator(a, b, 0, n)
    big = min(a, b)
    lo = tuple(-K - 1 if j == big else NEG_INF for j in range(n))
    return lo, g.hi


def _combine(w1, w2):
    lo = tuple(max(l1 + h2, h1 + l2) for l1, h1, l2, h2 in zip(w1[0], w1[1], w2[0], w2[1]))
    hi = tuple(h1 + h2 for h1, h2 in zip(w1[1], w2[1]))
    return lo, hi


def _product_window(windows):
    it = iter(windows)
    w = next(it)
    for x in it:
        w = _combine(w, x)
    return w


def _cycle(perm):
    n = len(perm)
    return [(perm[j], perm[(j + 1) % n]) for j in range(n)]


def _certified(target, n, N, K, perm) -> bool:
    s = flag_coordinates(target)
    tr = _product_window(_u_factor_window(i, n, N) for i in range(n))
    den = _product_window(_geom_window(a, b, K, n) for a, b in _cycle(perm))
    lo, _ = _combine(tr, den)
    return all(s[j] >= lo[j] for j in range(n))


# ---------------------------------------------------------------------------
# n points: coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _u_values(k: int, nu):
    u11, u12, u21 = u_coefficients(k)
    if nu is None:
        return u11, u12, u21
    return u11(nu), u12(nu), u21(nu)


def _u_coefficient_matrix(x: int, N: int, nu):
    """Coefficient of ``z^x`` in U truncated at order N, as a 2x2 tuple or None if zero."""
    k_diag, k_low = -x, 1 - x
    a = b = c = 0
    if 0 <= k_diag <= N:
        a, b, _ = _u_values(k_diag, nu)
    if 0 <= k_low <= N:
        c = _u_values(k_low, nu)[2]
    if not (a or b or c):
        return None
    return ((a, b), (c, -a))


def _matmul(m1, m2):
    return ((m1[0][0] * m2[0][0] + m1[0][1] * m2[1][0], m1[0][0] * m2[0][1] + m1[0][1] * m2[1][1]),
            (m1[1][0] * m2[0][0] + m1[1][1] * m2[1][0], m1[1][0] * m2[0][1] + m1[1][1] * m2[1][1]))


def _trace_coefficient(perm, e, N, nu):
    """Coefficient of ``z^e`` in ``tr(U(z_perm[0]) ... U(z_perm[n-1]))``."""
    mats = []
    for i in perm:
        m = _u_coefficient_matrix(e[i], N, nu)
        if m is None:
            return 0
        mats.append(m)
    acc = mats[0]
    for m in mats[1:-1]:
        acc = _matmul(acc, m)
    last = mats[-1]
    if len(mats) == 1:
        return acc[0][0] + acc[1][1]
    return (acc[0][0] * last[0][0] + acc[0][1] * last[1][0]
            + acc[1][0] * last[0][1] + acc[1][1] * last[1][1])


def _denominator_terms(perm, target, K, n):
    """Terms of the cyclic denominator expansion that can pair with a trace term."""
    tr_hi = tuple(j + 1 for j in range(n))
    s = flag_coordinates(target)
    need = [s[j] - tr_hi[j] for j in range(n)]
    factors = [geometric_denominator(a, b, K, n) for a, b in _cycle(perm)]
    rest_hi = [0] * n
    tails = []
    for f in reversed(factors):
        tails.append(tuple(rest_hi))
        rest_hi = [r + h for r, h in zip(rest_hi, f.hi)]
    tails.reverse()
    acc = factors[0]
    acc = MultiSeries._raw(n, {e: v for e, v in acc._c.items()
                              if all(x >= y for x, y in zip(flag_coordinates(e),
                                                            [a - b for a, b in zip(need, tails[0])]))},
                           acc.lo, acc.hi)
    for f, tail in zip(factors[1:], tails[1:]):
        floor = tuple(a - b for a, b in zip(need, tail))
        acc = acc.mul(f, floor=floor)
    return acc


def _perm_sum_at(target, N, K, nu, perms):
    n = len(target)
    total = 0
    for perm in perms:
        D = _denominator_terms(perm, target, K, n)
        for d, dv in D._c.items():
            e = tuple(t - x for t, x in zip(target, d))
            if max(e) > 1 or min(e) < -N:
                continue
            tv = _trace_coefficient(perm, e, N, nu)
            if tv:
                total = total + tv * dv
    return total


def _perms(n: int, reduce_cyclic: bool):
    if reduce_cyclic:
        return [(0,) + p for p in permutations(range(1, n))]
    return list(permutations(range(n)))


def _perm_sum(ells: Sequence[int], N: int, nu=None, *, reduce_cyclic: bool = True):
    """Truncated permutation-sum value at order N, or None if not certified."""
    n = len(ells)
    target = tuple(-1 - l for l in ells)
    perms = _perms(n, reduce_cyclic)
    K = N + n + sum(ells) + 2
    for _ in range(3):
        if all(_certified(target, n, N, K, p) for p in perms):
            break
        K *= 2
    else:
        return None
    value = _perm_sum_at(target, N, K, nu, perms)
    sign = -1 if n % 2 == 0 else 1
    if reduce_cyclic:
        return value * sign
    return value * Fraction(sign, n)


def _interpolate(samples):
    """NuPoly through ``[(nu, value)]`` (Lagrange, exact)."""
    poly = NuPoly.const(0)
    for i, (xi, yi) in enumerate(samples):
        if not yi:
            continue
        basis = NuPoly.const(1)
        denom = Fraction(1)
        for j, (xj, _) in enumerate(samples):
            if j != i:
                basis = basis * NuPoly.linear(-xj, 1)
                denom *= xi - xj
        poly = poly + basis * (yi / denom)
    return poly


def _value_at(ells, N, nu, reduce_cyclic, method):
    if nu is not None or method == "direct":
        return _perm_sum(ells, N, nu, reduce_cyclic=reduce_cyclic)
    # symbolic nu by exact interpolation; degree <= 2n + 2*sum(ells)
    deg = 2 * len(ells) + 2 * sum(ells)
    samples = []
    for i in range(deg + 1):
        x = Fraction(i, 3) + Fraction(1, 7)
        v = _perm_sum(ells, N, x, reduce_cyclic=reduce_cyclic)
        if v is None:
            return None
        samples.append((x, v))
    return _interpolate(samples)


def n_point_connected(ells: Sequence[int], N: Optional[int] = None, *, nu=None,
                      order_cap: int = DEFAULT_ORDER_CAP, reduce_cyclic: bool = True,
                      method: str = "direct", return_order: bool = False):
    """Connected n-point correlator (n >= 2) from the permutation sum.

    ``ells`` is used in the given order. ``nu=None`` gives a NuPoly, a rational
    ``nu`` gives a Fraction. Without ``N`` the order starts at
    ``sum(ells) + n + 4`` and escalates to ``order_cap``. The value is accepted
    once it is certified by the windows and unchanged at order N+2.
    ``method`` selects how symbolic nu is obtained: ``"interpolate"`` (exact
    interpolation from rational samples) or ``"direct"`` (NuPoly arithmetic, default).
    """
    ells = [int(l) for l in ells]
    if len(ells) < 2:
        raise ValueError("n_point_connected needs n >= 2; use one_point")
    if min(ells) < 0:
        raise ValueError("indices must be nonnegative")
    if method not in ("interpolate", "direct"):
        raise ValueError(f"unknown method {method!r}")
    if nu is not None:
        nu = Fraction(nu)
    start = sum(ells) + len(ells) + 4 if N is None else N
    fixed = N is not None
    if not fixed and start + 2 > order_cap:
        raise StabilizationError(ells, (None, None), (start, start + 2),
                                 "starting order already exceeds the cap")
    order = start
    prev = _value_at(ells, order, nu, reduce_cyclic, method)
    while True:
        nxt = _value_at(ells, order + 2, nu, reduce_cyclic, method)
        if prev is not None and nxt is not None:
            if prev == nxt:
                return (prev, order) if return_order else prev
            raise StabilizationError(ells, (prev, nxt), (order, order + 2),
                                     "value changed between orders")
        if fixed:
            raise StabilizationError(ells, (prev, nxt), (order, order + 2),
                                     "window exhausted: target not certified")
        order += 2
        if order + 2 > order_cap:
            raise StabilizationError(ells, (prev, nxt), (order, order + 2),
                                     "order cap reached before certification")
        prev = nxt


def connected_correlator(ells: Iterable[int], nu=None, **kw) -> CorrelatorValue:
    key = _key(ells)
    if key.n == 1:
        p = one_point(key.ells[0])
        return CorrelatorValue(key, p if nu is None else p(Fraction(nu)), "closed-form")
    value, order = n_point_connected(key.ells, nu=nu, return_order=True, **kw)
    return CorrelatorValue(key, value, "permutation-sum", order)


def connected_value(ells, nu=None, **kw):
    return connected_correlator(ells, nu, **kw).connected


# ---------------------------------------------------------------------------
# assembled generating function (small n)
# ---------------------------------------------------------------------------

def assemble_s_n(n: int, N: int, K: int, nu) -> MultiSeries:
    """Full truncated ``S_n`` as a MultiSeries (all n! orderings, specialized nu)."""
    if n < 2:
        raise ValueError("n >= 2")
    nu = Fraction(nu)
    U = build_u_matrix(N, nu)
    emb = [[[MultiSeries.embed(U[a, b], i, n) for b in range(2)] for a in range(2)] for i in range(n)]

    def matmul(x, y):
        return [[x[a][0].mul(y[0][b]) + x[a][1].mul(y[1][b]) for b in range(2)] for a in range(2)]

    total = None
    for perm in permutations(range(n)):
        m = emb[perm[0]]
        for i in perm[1:]:
            m = matmul(m, emb[i])
        term = m[0][0] + m[1][1]
        for a, b in _cycle(perm):
            term = term.mul(geometric_denominator(a, b, K, n))
        total = term if total is None else total + term
    total = total.scale(Fraction(-1 if n % 2 == 0 else 1, n))
    if n == 2:
        g = geometric_denominator(0, 1, K, 2)
        zsum = (MultiSeries.embed(LaurentSeries("z", {1: Fraction(1)}), 0, 2)
                + MultiSeries.embed(LaurentSeries("z", {1: Fraction(1)}), 1, 2))
        total = total - g.mul(g).mul(zsum)
    return total


# ---------------------------------------------------------------------------
# normalizations
# ---------------------------------------------------------------------------

def insertion_weight(ells: Iterable[int]) -> Fraction:
    """``prod 2^(2l+1) / (2l+1)!!``."""
    w = Fraction(1)
    for l in ells:
        w *= Fraction(2 ** (2 * l + 1), double_factorial(2 * l + 1))
    return w


def norbury_number(ells: Iterable[int], **kw) -> Fraction:
    """Intersection number of Theta with psi classes, from the nu = 0 correlator."""
    key = _key(ells)
    return insertion_weight(key.ells) * connected_value(key, Fraction(0), **kw)


def nu_deformed_from_connected(ells, connected: NuPoly) -> NuPoly:
    key = _key(ells)
    top = key.ells[-1]
    den = pochhammer(HALF, -1, top + 1) * pochhammer(HALF, 1, top + 1)
    return (connected * insertion_weight(key.ells)) / den


def nu_correlator(ells: Iterable[int], **kw) -> NuPoly:
    """nu-deformed correlator: weighted connected value divided by
    ``(1/2-nu)_{l+1}(1/2+nu)_{l+1}`` for the largest index; exact division."""
    key = _key(ells)
    return nu_deformed_from_connected(key, connected_value(key, None, **kw))


def tau0_multiplier(ells: Iterable[int], k: int, form: str) -> int:
    """Factor relating ``<tau_0^k X>`` to ``<X>``.

    ``form="norbury"``: ``(2g-2+n)_k`` with ``g = sum(ells)+1``;
    ``form="nu"``: ``(n + 2 sum(ells))_k``.
    """
    ells = tuple(ells)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if 0 in ells and ells != (0,):
        raise ValueError("key contains a zero index; pass the key without tau_0 insertions")
    n, s = len(ells), sum(ells)
    base = 2 * (s + 1) - 2 + n if form == "norbury" else n + 2 * s
    if form not in ("norbury", "nu"):
        raise ValueError(f"unknown form {form!r}")
    out = 1
    for j in range(k):
        out *= base + j
    return out


def tau0_insertion(ells: Iterable[int], k: int, form: str = "nu", base=None):
    """Predicted value of the key with ``k`` extra tau_0 insertions.

    ``base`` defaults to the computed value of the key itself (a NuPoly for
    ``form="nu"``, a rational for ``form="norbury"``).
    """
    ells = tuple(sorted(ells))
    m = tau0_multiplier(ells, k, form)
    if base is None:
        base = nu_correlator(ells) if form == "nu" else norbury_number(ells)
    return base * m


# ---------------------------------------------------------------------------
# Tricomi generating function
# ---------------------------------------------------------------------------

def one_point_norbury(g: int) -> Fraction:
    """``(2g-1)!!(2g-3)!! / (8^g g!)``."""
    return Fraction(double_factorial(2 * g - 1) * double_factorial(2 * g - 3), 8 ** g * factorial(g))


def tricomi_series(max_g: int, sigma: int = 1) -> List[Fraction]:
    """Coefficients of ``1 + i sqrt(X/2) U(-1/2, 0, -2/X)`` up to ``X^max_g``.

    The asymptotic series ``U(a,b,w) ~ w^-a sum (a)_k (a-b+1)_k / k! (-w)^-k``
    at a = -1/2, b = 0, w = -2/X gives ``eps * sum (-1/2)_k (1/2)_k / k! (sigma X/2)^k``
    where the product of the two square-root branches is a sign ``eps``.
    ``sigma = 1`` is the standard orientation of ``(-w)^-k``; ``eps`` is fixed
    by requiring the X coefficient to be 1/8 (this gives ``eps = -1``).
    """
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    raw = []
    for k in range(max_g + 1):
        a = Fraction(1)
        for j in range(k):
            a *= (Fraction(-1, 2) + j) * (HALF + j)
        raw.append(a / factorial(k) * Fraction(sigma, 2) ** k)
    eps = Fraction(1, 8) / raw[1]
    coeffs = [eps * c for c in raw]
    coeffs[0] += 1
    return coeffs


def tricomi_first_mismatch(max_g: int, sigma: int = 1) -> Optional[int]:
    """First order (1..max_g, then 0 for the constant) where the series disagrees."""
    if max_g < 1:
        raise ValueError("max_g >= 1")
    coeffs = tricomi_series(max_g, sigma)
    for g in range(1, max_g + 1):
        if coeffs[g] != one_point_norbury(g):
            return g
    if coeffs[0] != 0:
        return 0
    return None


def tricomi_check(max_g: int, sigma: int = 1) -> bool:
    return tricomi_first_mismatch(max_g, sigma) is None


# ---------------------------------------------------------------------------
# determinantal tau and Miwa times
# ---------------------------------------------------------------------------

Poly = Dict[Tuple[int, ...], object]


def _padd(p: Poly, q: Poly, scale=1) -> Poly:
    out = dict(p)
    for e, v in q.items():
        w = out[e] + v * scale if e in out else v * scale
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def _pmul(p: Poly, q: Poly, max_deg: int) -> Poly:
    out: Poly = {}
    for e1, v1 in p.items():
        d1 = sum(e1)
        for e2, v2 in q.items():
            if d1 + sum(e2) > max_deg:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            w = out[e] + v1 * v2 if e in out else v1 * v2
            out[e] = w
    return {e: v for e, v in out.items() if v}


def _complete_homogeneous(k: int, n: int) -> Poly:
    if k < 0:
        return {}
    out = {}

    def rec(i, left, acc):
        if i == n - 1:
            out[tuple(acc + [left])] = Fraction(1)
            return
        for a in range(left + 1):
            rec(i + 1, left - a, acc + [a])

    rec(0, k, [])
    return out


def _det(mat, mul, add, neg):
    size = len(mat)
    if size == 1:
        return mat[0][0]
    total = None
    for c in range(size):
        minor = [row[:c] + row[c + 1:] for row in mat[1:]]
        term = mul(mat[0][c], _det(minor, mul, add, neg))
        if c % 2:
            term = neg(term)
        total = term if total is None else add(total, term)
    return total


@lru_cache(maxsize=None)
def _schur(parts: Tuple[int, ...], n: int):
    """Schur polynomial in n variables by Jacobi-Trudi."""
    r = len(parts)
    if r == 0:
        return {(0,) * n: Fraction(1)}
    deg = sum(parts)
    mat = [[_complete_homogeneous(parts[i] - i + j, n) for j in range(r)] for i in range(r)]
    res = _det(mat, lambda p, q: _pmul(p, q, deg), _padd,
               lambda p: {e: -v for e, v in p.items()})
    return {e: v for e, v in res.items() if v}


def _bessel_coefficient(m: int, k: int):
    """``(1/2-a)_m (1/2+a)_m / (m! 4^m)`` with ``a = k - nu - 1`` as a NuPoly."""
    alpha_lo = Fraction(3, 2) - k      # 1/2 - a = 3/2 - k + nu
    alpha_hi = k - HALF                # 1/2 + a = k - 1/2 - nu
    return (pochhammer(alpha_lo, 1, m) * pochhammer(alpha_hi, -1, m)
            * Fraction(1, factorial(m) * 4 ** m))


def determinantal_tau(n: int, max_deg: int) -> Poly:
    """Expansion of the normalized Bessel determinant in ``x_j = 1/lambda_j``.

    Rows ``x_j^{n-k} f_k(x_j)`` divided by ``det[x_j^{n-k}]``, expanded as a
    sum of Schur polynomials. Keys are exponent tuples in ``x_1..x_n``.
    """
    coeffs = [[_bessel_coefficient(m, k) for m in range(max_deg + 1)] for k in range(1, n + 1)]
    out: Poly = {}

    def rec(k, ms, total):
        if k == n:
            a = [n - 1 - i + ms[i] for i in range(n)]
            if len(set(a)) < n:
                return
            order = sorted(range(n), key=lambda i: -a[i])
            sign = _perm_sign(order)
            sa = [a[i] for i in order]
            lam = tuple(p for p in (sa[i] - (n - 1 - i) for i in range(n)) if p)
            c = NuPoly.const(sign)
            for i, m in enumerate(ms):
                c = c * coeffs[i][m]
            if not c:
                return
            for e, v in _schur(lam, n).items():
                key = e
                w = out[key] + c * v if key in out else c * v
                if w:
                    out[key] = w
                else:
                    out.pop(key, None)
            return
        for m in range(max_deg - total + 1):
            rec(k + 1, ms + [m], total + m)

    rec(0, [], 0)
    return out


def _perm_sign(order) -> int:
    sign, seen = 1, [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _power_sum(k: int, n: int) -> Poly:
    out = {}
    for j in range(n):
        e = [0] * n
        e[j] = k
        out[tuple(e)] = Fraction(1)
    return out


def miwa_substitute(tau: TimePoly, n: int, max_deg: int) -> Poly:
    """``tau`` evaluated at ``t_l = (x_1^{2l+1} + ... + x_n^{2l+1}) / (2l+1)``."""
    out: Poly = {}
    cache: Dict[Tuple[int, int], Poly] = {}

    def power(l, a):
        if (l, a) not in cache:
            base = {e: v / (2 * l + 1) for e, v in _power_sum(2 * l + 1, n).items()}
            p = {(0,) * n: Fraction(1)}
            for _ in range(a):
                p = _pmul(p, base, max_deg)
            cache[(l, a)] = p
        return cache[(l, a)]

    for mono, c in tau.items():
        p = {(0,) * n: Fraction(1)}
        for l, a in enumerate(mono):
            if a:
                p = _pmul(p, power(l, a), max_deg)
        out = _padd(out, p, c)
    return out


def _partitions(d: int, max_part: Optional[int] = None):
    if max_part is None:
        max_part = d
    if d == 0:
        yield ()
        return
    for p in range(min(d, max_part), 0, -1):
        for rest in _partitions(d - p, p):
            yield (p,) + rest


def _solve_exact(columns: List[Poly], rhs: Poly):
    """Solve ``sum a_i columns[i] = rhs``; returns (solution or None, determined, consistent)."""
    monos = sorted(set().union(*[c.keys() for c in columns], rhs.keys()))
    rows = [[Fraction(c.get(m, 0)) for c in columns] + [rhs.get(m, 0)] for m in monos]
    ncol = len(columns)
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    consistent = all(not row[-1] for row in rows[r:])
    determined = len(pivots) == ncol
    if not (determined and consistent):
        return None, determined, consistent
    sol = [0] * ncol
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol, determined, consistent


def miwa_consistency_report(n: int, level: int, tau: Optional[TimePoly] = None) -> dict:
    """Compare the Bessel determinant with the Virasoro tau in Miwa times."""
    if n < 1:
        raise ValueError("n >= 1")
    if tau is None:
        from .virasoro import solve_tau
        tau = solve_tau(level).poly
    det = determinantal_tau(n, level)
    sub = miwa_substitute(tau.truncate(level), n, level)
    diff = _padd(det, sub, -1)
    mismatches = sorted(e for e in diff if sum(e) <= level)
    extracted, even_anomalies, inconsistent = {}, [], []
    for d in range(1, level + 1):
        part = {e: v for e, v in det.items() if sum(e) == d}
        parts = list(_partitions(d))
        full = d <= n
        use = parts if full else [p for p in parts if all(x % 2 for x in p)]
        columns = []
        for lam in use:
            p = {(0,) * n: Fraction(1)}
            for x in lam:
                p = _pmul(p, _power_sum(x, n), d)
            columns.append(p)
        sol, determined, consistent = _solve_exact(columns, part)
        if not consistent:
            inconsistent.append(d)
            continue
        if not determined:
            continue
        for lam, a in zip(use, sol):
            if any(x % 2 == 0 for x in lam):
                if a:
                    even_anomalies.append(lam)
                continue
            mono = [0] * ((max(lam) - 1) // 2 + 1)
            factor = 1
            for x in lam:
                mono[(x - 1) // 2] += 1
                factor *= x
            extracted[tuple(mono)] = a * factor
    tau_mismatch = sorted(m for m, v in extracted.items() if tau[m] != v)
    return {
        "extracted": extracted,
        "series_mismatches": mismatches,
        "coefficient_mismatches": tau_mismatch,
        "even_anomalies": even_anomalies,
        "inconsistent_degrees": inconsistent,
    }


def miwa_consistency_check(n: int, level: int) -> bool:
    r = miwa_consistency_report(n, level)
    return not (r["series_mismatches"] or r["coefficient_mismatches"]
                or r["even_anomalies"] or r["inconsistent_degrees"])
