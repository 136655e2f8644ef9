"""KdV flows, the Painleve XXXIV hierarchy, and the K = 1 Lax pair identities.

All checks are exact identities in :class:`DiffPoly` rings:

* Lenard-Magri polynomials in the jets ``u_k`` of ``u``,
* KdV and Painleve residuals on the tau-derived series ``u = d^2 log tau / dt_0^2``
  (with x = t_0), or on exact rational functions of x written in ``w = 1/(2-x)``,
* zero-curvature, gauge and Miura identities for the K = 1 member.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional

from .core import NU, NuPoly, TimePoly
from .diffpoly import (DiffPoly, Derivation, is_zero_matrix, jet_name, mat, mat_add, mat_map,
                       mat_mul, reduce_modulo, split_jet, top_jet, zero_curvature)
from .virasoro import solve_tau

F = Fraction
DX = Derivation(["u"])


class NotIntegrableError(ArithmeticError):
    """A differential polynomial is not a total x-derivative."""


def u(k: int = 0) -> DiffPoly:
    return DiffPoly.jet("u", k)


# ---------------------------------------------------------------------------
# Lenard-Magri recursion
# ---------------------------------------------------------------------------

def _antiderivative(P: DiffPoly, name: str) -> DiffPoly:
    """Integral in the symbol ``name`` (polynomial, nonnegative powers)."""
    out = {}
    for m, v in P.terms().items():
        d = dict(m)
        e = d.get(name, 0)
        if e < 0:
            raise NotIntegrableError(f"negative power of {name}")
        d[name] = e + 1
        out[tuple(sorted(d.items()))] = v / (e + 1)
    return DiffPoly(out)


def integrate_total_derivative(P: DiffPoly, name: str = "u", D: Derivation = DX) -> DiffPoly:
    """``Q`` with ``D Q = P`` and no constant term, by descent on the top jet.

    Writing ``P = A u_n + B`` with ``A, B`` free of ``u_n``, the term
    ``int A du_{n-1}`` removes the top order; a remainder that is nonlinear in
    the top jet, or that survives at order zero, is not a total derivative.
    """
    Q = DiffPoly()
    R = P
    while not R.is_zero():
        n = top_jet(R, name)
        if n < 1:
            raise NotIntegrableError(f"remainder {R} is not a total derivative")
        top = jet_name(name, n)
        if R.degree_in(top) > 1:
            raise NotIntegrableError(f"remainder is nonlinear in {top}")
        A = R.coefficient_of(top, 1)
        step = _antiderivative(A, jet_name(name, n - 1))
        Q = Q + step
        R = R - D(step)
    return Q - DiffPoly.const(Q.terms().get((), 0))


def lenard_operator(P: DiffPoly) -> DiffPoly:
    """``(1/4 D^3 + 2 u D + u_x) P``."""
    return DX(P, 3) * F(1, 4) + u(0) * DX(P) * 2 + u(1) * P


@lru_cache(maxsize=None)
def lenard_magri(ell: int) -> DiffPoly:
    """``L_ell[u]``: ``D L_{ell+1} = (1/4 D^3 + 2uD + u_x) L_ell``, ``L_{ell+1}[0] = 0``, ``L_0 = 1``."""
    if ell < 0:
        raise ValueError("index must be nonnegative")
    if ell == 0:
        return DiffPoly.const(F(1))
    return integrate_total_derivative(lenard_operator(lenard_magri(ell - 1)))


def kdv_flow(ell: int, lenard=None) -> DiffPoly:
    """Right-hand side ``D L_{ell+1}[u]`` of the ``t_ell`` flow."""
    L = lenard_magri(ell + 1) if lenard is None else lenard
    return DX(L)


# ---------------------------------------------------------------------------
# series representation: u from tau, x = t_0
# ---------------------------------------------------------------------------

def _jets_from_log(log_tau: TimePoly, top: int) -> Dict[str, TimePoly]:
    out = {}
    d = log_tau.derivative(0).derivative(0)
    for k in range(top + 1):
        out[jet_name("u", k)] = d
        d = d.derivative(0)
    return out


def _unit() -> TimePoly:
    return TimePoly.constant(NuPoly.const(1))


def _restrict(P: TimePoly, K: int) -> TimePoly:
    """Set ``t_l = 0`` for ``l > K``."""
    return TimePoly._raw({m: v for m, v in P.items() if len(m) <= K + 1}, P.L)


def kdv_residual(ell: int, L: int, lenard=None, tau: Optional[TimePoly] = None) -> TimePoly:
    """``D L_{ell+1}[u] - du/dt_ell`` with ``u = d^2 log tau/dt_0^2``, through level L.

    ``lenard`` replaces ``L_{ell+1}`` (for negative controls).
    """
    if ell < 1:
        raise ValueError("flows start at ell = 1")
    need = L + 2 * ell + 5
    if tau is None:
        tau = solve_tau(need).poly
    elif tau.L < need:
        raise ValueError(f"tau level {tau.L} is below the required {need}")
    lg = tau.log()
    flow = kdv_flow(ell, lenard)
    jets = _jets_from_log(lg, max(top_jet(flow, "u"), 0))
    lhs = flow.evaluate(jets, _unit())
    rhs = lg.derivative(0).derivative(0).derivative(ell)
    res = (lhs - rhs).truncate(L)
    if res.L < L:
        raise ValueError(f"residual only trusted to level {res.L}")
    return res


def tau_u_series(level: int, K: int) -> TimePoly:
    """``u(x; t_1..t_K)`` from the Virasoro tau with higher times set to 0."""
    lg = solve_tau(level + 2).log()
    return _restrict(lg.derivative(0).derivative(0), K)


# ---------------------------------------------------------------------------
# Painleve XXXIV hierarchy
# ---------------------------------------------------------------------------

W = DiffPoly.var("w")
# w = 1/(2 - x): D w = w^2, x - 2 = -1/w
DW = Derivation(["u"], {"w": W * W})
X_MINUS_2 = DiffPoly.var("w", -1, F(-1))


def painleve_operator(K: int, t: Optional[Mapping[int, object]] = None) -> DiffPoly:
    """``2u + (x-2)u_x + sum_{l=1}^K (2l+1) t_l D L_{l+1}[u]`` with x and t_l as symbols."""
    P = u(0) * 2 + (DiffPoly.var("x") - 2) * u(1)
    for l in range(1, K + 1):
        tl = DiffPoly.var(f"t{l}") if t is None or l not in t else DiffPoly.const(t[l])
        P = P + tl * kdv_flow(l) * (2 * l + 1)
    return P


def painleve_residual(K: int, u_input, t: Optional[Mapping[int, object]] = None):
    """Left-hand side of the K-th Painleve XXXIV equation evaluated on ``u_input``.

    * a :class:`TimePoly` is read as a series in x = t_0 and t_1..t_K (x-derivatives
      are ``d/dt_0``); the result is a TimePoly.
    * a :class:`DiffPoly` in ``w = 1/(2-x)`` is exact; ``t`` maps ``l`` to the value
      of ``t_l`` (missing entries stay symbolic as ``t<l>``); the result is a DiffPoly.
    """
    if K < 0:
        raise ValueError("K >= 0")
    op = painleve_operator(K, t if isinstance(u_input, DiffPoly) else None)
    top = max(top_jet(op, "u"), 0)
    if isinstance(u_input, TimePoly):
        if t:
            raise ValueError("series input takes the times from the series itself")
        one = TimePoly.constant(NuPoly.const(1))
        values = {jet_name("u", 0): u_input}
        d = u_input
        for k in range(1, top + 1):
            d = d.derivative(0)
            values[jet_name("u", k)] = d
        values["x"] = one.times_t(0)
        for l in range(1, K + 1):
            values[f"t{l}"] = one.times_t(l)
        return op.evaluate(values, one)
    if isinstance(u_input, DiffPoly):
        if any(split_jet(s, ("u",)) for s in u_input.symbols()):
            raise ValueError("u_input must be a function of w, not a jet expression")
        values = {jet_name("u", 0): u_input}
        d = u_input
        for k in range(1, top + 1):
            d = DW(d)
            values[jet_name("u", k)] = d
        values["x"] = X_MINUS_2 + 2
        return op.subs(values)
    raise TypeError("u_input must be a TimePoly series or a DiffPoly in w")


def initial_datum() -> DiffPoly:
    """``(1-4nu^2) / (8 (2-x)^2)`` as ``c w^2``."""
    return DiffPoly.var("w", 2, (1 - 4 * NU * NU) * F(1, 8))


# ---------------------------------------------------------------------------
# K = 1 Lax pair
# ---------------------------------------------------------------------------

def _a(k):
    return DiffPoly.jet("a", k)


Z = DiffPoly.var("z")
X = DiffPoly.var("x")
T1 = DiffPoly.var("t1")
DZ = Derivation((), {"z": 1})
DA = Derivation(["a"], {"x": 1})


def lax_pair_K1(e21_t1_symbol: str = "t1", omega_ax_sign: int = 1):
    """``(A, Omega)`` of the K = 1 Lax pair in jets of ``a``.

    The ``a_xx a`` coefficient of the (2,1) entry of ``A_{-1}`` carries the
    symbol ``e21_t1_symbol``; ``Omega[1][0] = -z + 2 s a_x + 4 a^2`` with
    ``s = omega_ax_sign``. Only ``("t1", 1)`` is flat.
    """
    a, ax, axx, axxx = _a(0), _a(1), _a(2), _a(3)
    t = DiffPoly.var(e21_t1_symbol)
    xm2 = X - 2
    A1 = mat([[0, 0], [T1 * F(-3, 2), 0]])
    A0 = mat([[T1 * a * -3, T1 * F(-3, 2)],
              [T1 * a * a * 6 + T1 * ax * 3 - X * F(1, 2) + 1, T1 * a * 3]])
    d = xm2 * a + T1 * ax * a * 6 + T1 * axx * F(3, 2) + F(1, 4)
    Am1 = mat([[-d, -xm2 * F(1, 2) - T1 * ax * 3],
               [xm2 * a * a * 2 + T1 * ax * a * a * 12 + t * axx * a * 6 + a + T1 * ax * ax * 12
                + xm2 * ax * 2 + T1 * axxx * F(3, 2), d]])
    zi = Z.inverse()
    A = mat_add(mat_add(mat_map(A1, lambda e: e * Z), A0), mat_map(Am1, lambda e: e * zi))
    Omega = mat([[a * -2, -1], [-Z + ax * 2 * omega_ax_sign + a * a * 4, a * 2]])
    return A, Omega


def zero_curvature_K1(A=None, Omega=None):
    if A is None or Omega is None:
        A0, O0 = lax_pair_K1()
        A = A0 if A is None else A
        Omega = O0 if Omega is None else Omega
    return zero_curvature(A, Omega, DA, DZ)


def expected_curvature_K1() -> DiffPoly:
    """The (2,1) entry multiplying ``1/z``."""
    return (T1 * _a(4) * F(3, 2) + T1 * _a(2) * _a(1) * 36 + (X - 2) * _a(2) * 2 + _a(1) * 4)


def verify_zero_curvature_K1(A=None, Omega=None) -> bool:
    R = zero_curvature_K1(A, Omega)
    target = expected_curvature_K1() * Z.inverse()
    return (R[0][0].is_zero() and R[0][1].is_zero() and R[1][1].is_zero()
            and R[1][0] == target)


def curvature_as_painleve() -> DiffPoly:
    """The curvature entry with ``a_{k+1} = u_k / 2``; equals the K = 1 operator."""
    values = {jet_name("a", k + 1): u(k) * F(1, 2) for k in range(4)}
    return expected_curvature_K1().subs(values)


# ---------------------------------------------------------------------------
# alpha-form, gauge, v-form
# ---------------------------------------------------------------------------

Y = DiffPoly.var("y")
DALPHA = Derivation(["al"], {"y": 1})
DV = Derivation(["v"], {"y": 1})


def _al(k):
    return DiffPoly.jet("al", k)


def _v(k):
    return DiffPoly.jet("v", k)


def alpha_lax_pair():
    al, a1, a2, a3 = _al(0), _al(1), _al(2), _al(3)
    zi = Z.inverse()
    d = (a2 * 2 - Y * al + al * a1 * 2 - 1) * F(1, 4)
    A = mat([[al + d * zi, 2 + (a1 * 2 - Y) * F(1, 2) * zi],
             [Z * 2 - Y * F(1, 2) - al * al * F(1, 2) - a1
              + (al * 2 + Y * al * al + Y * a1 * 4 - al * al * a1 * 2 - a1 * a1 * 8 - al * a2 * 4
                 - a3 * 4) * F(1, 8) * zi,
              -al - d * zi]])
    Omega = mat([[-al * F(1, 2), -1], [-Z + al * al * F(1, 4) + a1 * F(1, 2), al * F(1, 2)]])
    return A, Omega


def K1_to_alpha(M):
    """Substitute ``t_1 = -4/3``, ``x = y + 2``, ``a_k = alpha_k / 4``."""
    values = {"t1": F(-4, 3), "x": Y + 2}
    values.update({jet_name("a", k): _al(k) * F(1, 4) for k in range(6)})
    return mat_map(M, lambda e: e.subs(values))


def alpha_equation() -> DiffPoly:
    return _al(4) + _al(1) * _al(2) * 6 - Y * _al(2) - _al(1) * 2


def v_equation(coupling=6) -> DiffPoly:
    """``v_yyy + 6 v v_y - y v_y - 2 v``."""
    return _v(3) + _v(0) * _v(1) * coupling - Y * _v(1) - _v(0) * 2


def v_lax_pair():
    v, v1, v2 = _v(0), _v(1), _v(2)
    zi = Z.inverse()
    A = mat([[(v1 * 2 - 1) * F(1, 4) * zi, (v * 2 - Y) * F(1, 2) * zi + 2],
             [Z * 2 - v - Y * F(1, 2) + (v * v * -2 + Y * v - v2) * F(1, 2) * zi,
              (1 - v1 * 2) * F(1, 4) * zi]])
    Omega = mat([[0, -1], [v - Z, 0]])
    return A, Omega


def _reduces_to_zero(R, name, order, rule, D) -> bool:
    """Nonzero before reduction, zero after rewriting the top jet by ``rule``."""
    if is_zero_matrix(R):
        return False
    return is_zero_matrix(mat_map(R, lambda e: reduce_modulo(e, name, order, rule, D)))


def gauge(A, Omega):
    """``(G A G^-1, G Omega G^-1 + G_y G^-1)`` with ``G = [[1,0],[alpha/2,1]]``."""
    G = mat([[1, 0], [_al(0) * F(1, 2), 1]])
    Gi = mat([[1, 0], [_al(0) * F(-1, 2), 1]])
    Ah = mat_mul(mat_mul(G, A), Gi)
    Oh = mat_add(mat_mul(mat_mul(G, Omega), Gi), mat_mul(mat_map(G, DALPHA), Gi))
    return Ah, Oh


def _alpha_to_v(M):
    values = {jet_name("al", k + 1): _v(k) for k in range(6)}
    return mat_map(M, lambda e: e.subs(values))


def pxxxiv_stages(v_coupling=6) -> Dict[str, bool]:
    A, Om = alpha_lax_pair()
    rule_alpha = alpha_equation() - _al(4)
    s1 = _reduces_to_zero(zero_curvature(A, Om, DALPHA, DZ), "al", 4, -rule_alpha, DALPHA)
    Ah, Oh = gauge(A, Om)
    Av, Ov = v_lax_pair()
    Ah, Oh = _alpha_to_v(Ah), _alpha_to_v(Oh)
    free_of_alpha = all("al_0" not in e.symbols() for r in Ah + Oh for e in r)
    s2 = free_of_alpha and is_zero_matrix(mat_add(Ah, Av, -1)) and is_zero_matrix(mat_add(Oh, Ov, -1))
    rule_v = v_equation(v_coupling) - _v(3)
    s3 = _reduces_to_zero(zero_curvature(Av, Ov, DV, DZ), "v", 3, -rule_v, DV)
    return {"alpha_form": s1, "gauge": s2, "v_form": s3, "scaling": verify_scaling(v_coupling)}


def verify_scaling(v_coupling=6) -> bool:
    """``x = 2 - s y``, ``u = v/(2 s^2)``, ``t_1 = 4 s^3/3`` maps the K = 1 equation
    to ``-(v-equation)/(2 s^2)``; ``s`` is a formal unit with ``s^3 = 3 t_1/4``."""
    s = DiffPoly.var("s")
    si = s.inverse()
    op = painleve_operator(1)
    values = {"x": 2 - s * Y, "t1": s ** 3 * F(4, 3)}
    for k in range(4):
        values[jet_name("u", k)] = (-si) ** k * _v(k) * si * si * F(1, 2)
    lhs = op.subs(values)
    return lhs == v_equation(v_coupling) * si * si * F(-1, 2)


def verify_pxxxiv_lax(v_coupling=6) -> bool:
    return all(pxxxiv_stages(v_coupling).values())


# ---------------------------------------------------------------------------
# Miura map to Painleve II
# ---------------------------------------------------------------------------

DW_Y = Derivation(["w"], {"y": 1})


def miura_residual(sign: int = -1, cubic=2) -> DiffPoly:
    """The v-equation at ``v = sign*w^2 - w_y``, reduced by ``w_yy = cubic*w^3 + y w + alpha``."""
    w0, w1 = DiffPoly.jet("w", 0), DiffPoly.jet("w", 1)
    v = [w0 * w0 * sign - w1]
    for _ in range(3):
        v.append(DW_Y(v[-1]))
    eq = v[3] + v[0] * v[1] * 6 - Y * v[1] - v[0] * 2
    rule = w0 ** 3 * cubic + Y * w0 + DiffPoly.var("alpha")
    return reduce_modulo(eq, "w", 2, rule, DW_Y)


def verify_miura(sign: int = -1, cubic=2) -> bool:
    return miura_residual(sign, cubic).is_zero()


def inverse_miura_check(cubic=2) -> bool:
    """``w = (v_y + alpha)/(2v - y)`` on ``v = -w^2 - w_y``: ``(2v - y) w = v_y + alpha``."""
    w0, w1 = DiffPoly.jet("w", 0), DiffPoly.jet("w", 1)
    v = -w0 * w0 - w1
    lhs = (v * 2 - Y) * w0
    rhs = DW_Y(v) + DiffPoly.var("alpha")
    rule = w0 ** 3 * cubic + Y * w0 + DiffPoly.var("alpha")
    return reduce_modulo(lhs - rhs, "w", 2, rule, DW_Y).is_zero()


# ---------------------------------------------------------------------------
# bare tau
# ---------------------------------------------------------------------------

def bare_tau_report(level: int = 8, nu=None) -> Optional[int]:
    """First power of x = t_0 where the t_0-only part of ``log tau`` (or its second
    derivative) disagrees with ``-(1-4nu^2)/8 log(1-x/2)``; ``None`` if none."""
    lg = solve_tau(level).log()
    c = (1 - 4 * NU * NU) * F(1, 8)
    if nu is not None:
        c = c(F(nu))
    for k in range(1, level + 1):
        got = lg[(k,)]
        if nu is not None:
            got = got(F(nu)) if got else F(0)
        if got != c * F(1, k * 2 ** k):
            return k
    u_series = lg.derivative(0).derivative(0)
    for k in range(0, level - 1):
        got = u_series[(k,)]
        if nu is not None:
            got = got(F(nu)) if got else F(0)
        # (1-4nu^2)/(8(2-x)^2) = c/4 sum (k+1) (x/2)^k
        if got != c * F(k + 1, 4 * 2 ** k):
            return k
    return None


def bare_tau_check(level: int = 8, nu=None) -> bool:
    return bare_tau_report(level, nu) is None
