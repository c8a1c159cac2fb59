"""Holonomic differential equations, closure operations, and power series.

A function is holonomic when it satisfies a homogeneous linear differential
equation with polynomial coefficients.  Sums and products of holonomic
functions are again holonomic; the annihilators are found by linear algebra
in finite-dimensional modules spanned by derivatives.  simple_de assembles
an annihilator for a composite expression, de_to_re converts it into the
recurrence for the Maclaurin coefficients, and fps turns that recurrence
into an explicit hypergeometric-type power series when the coefficient
support allows it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import hypersum.expr as E
from .expr import (
    Add, Call, Expr, Mul, Num, Pochhammer, Pow, Sym, contains, to_string,
)
from .factorize import nonneg_integer_roots
from .hyperterm import HyperTerm, _linear_factor_params
from .linalg import INCONSISTENT, fraction_free_solve
from .operators import DiffEq, Recurrence, normalize_coefficients
from .poly import MPoly, RatFunc, poly_lcm
from .series import SeriesError, taylor_coeffs

__all__ = [
    "DiffEq", "FormalPowerSeries", "UnsupportedExpressionError",
    "MixedSupportError", "base_de", "de_plus_de", "de_times_de",
    "algebraic_substitute", "simple_de", "de_to_re", "holonomic_zero_test",
    "fps",
]


class UnsupportedExpressionError(ValueError):
    pass


class MixedSupportError(ValueError):
    """The coefficient recurrence does not link a(k+m) to a(k) only."""


# ---------------------------------------------------------------------------
# linear algebra over Q(params)(x): first dependence among derivative vectors
# ---------------------------------------------------------------------------


def _first_dependence(v0, step, dim, func, var):
    """Smallest N with c_0 v_0 + ... + c_{N-1} v_{N-1} + v_N = 0.

    ``step`` maps a coordinate vector to its derivative; vectors live in a
    dim-dimensional space over rational functions.  Returns the DiffEq with
    the dependence coefficients, normalized.
    """
    vecs = [v0]
    for n in range(dim):
        vecs.append(step(vecs[-1]))
        target = vecs[-1]
        matrix = []
        rhs = []
        for coord in range(dim):
            row = [v[coord] for v in vecs[:-1]]
            den = MPoly.one()
            for x in row + [target[coord]]:
                den = poly_lcm(den, x.den)
            matrix.append([(x * RatFunc(den)).as_poly() for x in row])
            rhs.append((-target[coord] * RatFunc(den)).as_poly())
        sol = fraction_free_solve(matrix, rhs)
        if sol.status == INCONSISTENT:
            continue
        coeffs = list(sol.particular) + [RatFunc.const(1)]
        return DiffEq(func, var, normalize_coefficients(coeffs))
    raise AssertionError("no dependence found within the module dimension")


def _companion_reductions(L: DiffEq):
    """f^(order) = sum_j red[j] f^(j) as rational functions."""
    lead = RatFunc(L.coeffs[-1])
    return [-(RatFunc(c) / lead) for c in L.coeffs[:-1]]


def de_plus_de(L1: DiffEq, L2: DiffEq) -> DiffEq:
    """Annihilator of f + g from annihilators of f and g."""
    if L1.var != L2.var:
        raise ValueError("differential equations must share a variable")
    n1, n2 = L1.order, L2.order
    red1, red2 = _companion_reductions(L1), _companion_reductions(L2)
    dim = n1 + n2
    zero = RatFunc.const(0)
    x = L1.var

    def step(v):
        out = [c.derivative(x) for c in v]
        for i in range(n1):
            c = v[i]
            if c.is_zero:
                continue
            if i + 1 < n1:
                out[i + 1] = out[i + 1] + c
            else:
                for j in range(n1):
                    out[j] = out[j] + c * red1[j]
        for i in range(n2):
            c = v[n1 + i]
            if c.is_zero:
                continue
            if i + 1 < n2:
                out[n1 + i + 1] = out[n1 + i + 1] + c
            else:
                for j in range(n2):
                    out[n1 + j] = out[n1 + j] + c * red2[j]
        return out

    v0 = [zero] * dim
    v0[0] = RatFunc.const(1)
    if n2:
        v0[n1] = RatFunc.const(1)
    return _first_dependence(v0, step, dim, L1.func, x)


def de_times_de(L1: DiffEq, L2: DiffEq) -> DiffEq:
    """Annihilator of f * g from annihilators of f and g."""
    if L1.var != L2.var:
        raise ValueError("differential equations must share a variable")
    n1, n2 = L1.order, L2.order
    red1, red2 = _companion_reductions(L1), _companion_reductions(L2)
    dim = n1 * n2
    zero = RatFunc.const(0)
    x = L1.var

    def idx(i, j):
        return i * n2 + j

    def add_f_shift(out, i, j, c):
        # contribution c * f^(i+1) g^(j), reducing i+1 = n1 via L1
        if i + 1 < n1:
            out[idx(i + 1, j)] = out[idx(i + 1, j)] + c
        else:
            for i2 in range(n1):
                out[idx(i2, j)] = out[idx(i2, j)] + c * red1[i2]

    def add_g_shift(out, i, j, c):
        if j + 1 < n2:
            out[idx(i, j + 1)] = out[idx(i, j + 1)] + c
        else:
            for j2 in range(n2):
                out[idx(i, j2)] = out[idx(i, j2)] + c * red2[j2]

    def step(v):
        out = [c.derivative(x) for c in v]
        for i in range(n1):
            for j in range(n2):
                c = v[idx(i, j)]
                if c.is_zero:
                    continue
                add_f_shift(out, i, j, c)
                add_g_shift(out, i, j, c)
        return out

    v0 = [zero] * dim
    v0[0] = RatFunc.const(1)
    return _first_dependence(v0, step, dim, L1.func, x)


# ---------------------------------------------------------------------------
# algebraic substitution x -> y with y^m = r(x)
# ---------------------------------------------------------------------------


def _alg_mul(a, b, m, r):
    """Product in Q(params)(x)[y] / (y^m - r)."""
    out = [RatFunc.const(0)] * m
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j, bj in enumerate(b):
            if bj.is_zero:
                continue
            t = i + j
            c = ai * bj
            if t >= m:
                t -= m
                c = c * r
            out[t] = out[t] + c
    return out


def _alg_inverse(a, m, r):
    """Inverse in Q(params)(x)[y] / (y^m - r), by an m x m linear solve."""
    cols = []
    basis = [RatFunc.const(0)] * m
    for j in range(m):
        yj = list(basis)
        yj[j] = RatFunc.const(1)
        cols.append(_alg_mul(a, yj, m, r))
    matrix = []
    rhs = []
    for coord in range(m):
        row = [cols[j][coord] for j in range(m)]
        den = MPoly.one()
        for x in row:
            den = poly_lcm(den, x.den)
        matrix.append([(x * RatFunc(den)).as_poly() for x in row])
        rhs.append(den if coord == 0 else MPoly.zero())
    sol = fraction_free_solve(matrix, rhs)
    if sol.status == INCONSISTENT:
        raise UnsupportedExpressionError(
            "leading coefficient is a zero divisor after the substitution")
    return list(sol.particular)


def _coeff_as_algebraic(p: MPoly, v: str, m: int, r: RatFunc):
    """p(y) as an element of Q(params)(x)[y]/(y^m - r)."""
    out = [RatFunc.const(0)] * m
    for deg, c in p.coeffs_in(v).items():
        q, t = divmod(deg, m)
        out[t] = out[t] + RatFunc(c) * r ** q
    return out


def algebraic_substitute(L: DiffEq, m: int, r: RatFunc) -> DiffEq:
    """Annihilator of g(x) = f(y(x)) where L annihilates f and y^m = r(x).

    Derivatives of g are rewritten with dy/dx = r'(x) y / (m r(x)) and
    reduced modulo both L and y^m = r, giving a module of dimension
    ord(L) * m over the rational functions in x.
    """
    if m < 1:
        raise ValueError("root index m must be positive")
    if isinstance(r, MPoly):
        r = RatFunc(r)
    x = L.var
    n = L.order
    lead = _coeff_as_algebraic(L.coeffs[-1], x, m, r)
    lead_inv = _alg_inverse(lead, m, r)
    red = []
    for j in range(n):
        cj = _coeff_as_algebraic(-L.coeffs[j], x, m, r)
        red.append(_alg_mul(cj, lead_inv, m, r))
    w = r.derivative(x) / (RatFunc.const(m) * r)
    dim = n * m
    zero = RatFunc.const(0)

    def idx(i, p):
        return i * m + p

    def add_term(out, i, p, c):
        # contribution c * f^(i)(y) y^p with p possibly = m, i possibly = n
        if p >= m:
            p -= m
            c = c * r
        if i < n:
            out[idx(i, p)] = out[idx(i, p)] + c
            return
        for j in range(n):
            for t, rc in enumerate(red[j]):
                if not rc.is_zero:
                    add_term(out, j, p + t if p + t < m else p + t, c * rc)

    def add_reduced(out, i, p, c):
        # like add_term but reduces the y power before recursing
        q, p0 = divmod(p, m)
        add_term(out, i, p0, c * r ** q if q else c)

    def step(v):
        out = [c.derivative(x) for c in v]
        for i in range(n):
            for p in range(m):
                c = v[idx(i, p)]
                if c.is_zero:
                    continue
                add_reduced(out, i + 1, p + 1, c * w)
                if p:
                    out[idx(i, p)] = out[idx(i, p)] + c * w * p
        return out

    v0 = [zero] * dim
    v0[0] = RatFunc.const(1)
    return _first_dependence(v0, step, dim, L.func, x)


# ---------------------------------------------------------------------------
# base catalog and structural recursion
# ---------------------------------------------------------------------------


def _de(coeffs, func, var):
    return DiffEq(func, var, normalize_coefficients(coeffs))


def base_de(head: str, var: str = "x", func: str = "F", parameter=None) -> DiffEq:
    """Cataloged annihilating differential equation for a basic head."""
    y = RatFunc.var(var)
    one = RatFunc.const(1)
    zero = RatFunc.const(0)
    if head == "exp":
        return _de([-one, one], func, var)
    if head in ("sin", "cos"):
        return _de([one, zero, one], func, var)
    if head == "ln":  # ln(1 + u) inputs; cataloged as ln itself: y F'' + F'
        return _de([zero, one, y], func, var)
    if head == "arcsin":
        return _de([zero, y, y * y - 1], func, var)
    if head == "arctan":
        return _de([zero, 2 * y, y * y + 1], func, var)
    if head == "erf":
        return _de([zero, 2 * y, one], func, var)
    if head == "power":  # y^a: y F' - a F = 0
        if parameter is None:
            raise ValueError("power requires the exponent parameter")
        a = parameter if isinstance(parameter, RatFunc) else \
            E.to_ratfunc(parameter) if isinstance(parameter, Expr) else \
            RatFunc.const(parameter)
        return _de([-a, y], func, var)
    if head == "besselj":
        if parameter is None:
            raise ValueError("besselj requires the order parameter")
        nu = parameter if isinstance(parameter, RatFunc) else \
            E.to_ratfunc(parameter) if isinstance(parameter, Expr) else \
            RatFunc.const(parameter)
        return _de([y * y - nu * nu, y, y * y], func, var)
    raise UnsupportedExpressionError(f"no cataloged equation for {head}")


def _try_ratfunc(e: Expr):
    try:
        return E.to_ratfunc(e)
    except E.NotRationalError:
        return None


def _log_derivative_of_derivative(e: Expr, x: str):
    """(log e')' as a rational function, or None."""
    try:
        de = E.differentiate(e, x)
    except E.DifferentiationError:
        return None
    try:
        from .hyperterm import log_derivative
        return log_derivative(de, x)
    except Exception:
        return None


_ANALYTIC_HEADS = ("exp", "ln", "sin", "cos", "arcsin", "arctan", "erf")


def simple_de(e: Expr, x: str, func: str = "F") -> DiffEq:
    """Annihilating differential equation for e, by structural closure."""
    if not contains(e, x):
        return _de([RatFunc.const(0), RatFunc.const(1)], func, x)
    r = _try_ratfunc(e)
    if r is not None:
        # rational h: h F' - h' F = 0
        return _de([-r.derivative(x), r], func, x)
    if isinstance(e, Add):
        parts = [simple_de(a, x, func) for a in e.args]
        out = parts[0]
        for p in parts[1:]:
            out = de_plus_de(out, p)
        return out
    if isinstance(e, Mul):
        factors = []
        rat = RatFunc.const(1)
        for a in e.args:
            if not contains(a, x):
                continue  # constant multiples do not change the equation
            ra = _try_ratfunc(a)
            if ra is not None:
                rat = rat * ra
            else:
                factors.append(simple_de(a, x, func))
        if not rat.is_constant or not factors:
            factors.insert(0, _de([-rat.derivative(x), rat], func, x))
        out = factors[0]
        for p in factors[1:]:
            out = de_times_de(out, p)
        return out
    if isinstance(e, Pow):
        base, expo = e.base, e.exponent
        rb = _try_ratfunc(base)
        if rb is not None and not contains(expo, x):
            # r(x)^alpha: F'/F = alpha r'/r, alpha rational or symbolic
            alpha = _try_ratfunc(expo)
            if alpha is None:
                raise UnsupportedExpressionError(
                    f"unsupported exponent {to_string(expo)}")
            return _de([-alpha * rb.derivative(x) / rb, RatFunc.const(1)],
                       func, x)
        if isinstance(expo, Num) and expo.value.denominator == 1 \
                and expo.value >= 1:
            n = expo.value.numerator
            Lb = simple_de(base, x, func)
            out = Lb
            for _ in range(n - 1):
                out = de_times_de(out, Lb)
            return out
        raise UnsupportedExpressionError(f"unsupported power {to_string(e)}")
    if isinstance(e, Call):
        if e.name == "sqrt":
            return simple_de(Pow(e.args[0], Num(Fraction(1, 2))), x, func)
        if e.name == "besselj":
            nu, arg = e.args
            L = base_de("besselj", x, func, parameter=nu)
            sub = _substitution_target(arg, x)
            if sub is None:
                raise UnsupportedExpressionError(
                    f"unsupported argument {to_string(arg)}")
            m, r = sub
            if m == 1 and r == RatFunc.var(x):
                return L
            return algebraic_substitute(L, m, r)
        if e.name in _ANALYTIC_HEADS:
            h = _log_derivative_of_derivative(e, x)
            if h is not None:
                # F'' = h F' with h = (log F')' rational
                return _de([RatFunc.const(0), -h, RatFunc.const(1)], func, x)
            sub = _substitution_target(e.args[0], x)
            if sub is not None:
                m, r = sub
                return algebraic_substitute(base_de(e.name, x, func), m, r)
    raise UnsupportedExpressionError(f"unsupported expression {to_string(e)}")


def _substitution_target(arg: Expr, x: str):
    """(m, r) with arg = y, y^m = r(x) rational; None if not of that shape."""
    ra = _try_ratfunc(arg)
    if ra is not None:
        return 1, ra
    if isinstance(arg, Call) and arg.name == "sqrt":
        inner = _try_ratfunc(arg.args[0])
        if inner is not None:
            return 2, inner
    if isinstance(arg, Pow) and isinstance(arg.exponent, Num):
        inner = _try_ratfunc(arg.base)
        a = arg.exponent.value
        if inner is not None and a.numerator > 0:
            return a.denominator, inner ** a.numerator
    return None


# ---------------------------------------------------------------------------
# DE -> RE and the zero test
# ---------------------------------------------------------------------------


def _falling(kpoly: MPoly, j: int) -> MPoly:
    out = MPoly.one()
    for i in range(j):
        out = out * (kpoly - MPoly.const(i))
    return out


def de_to_re(L: DiffEq, func: str = "a", k: str = "k") -> Recurrence:
    """Recurrence for the Maclaurin coefficients of solutions of L.

    x^p D^j maps sum a_t x^t to terms a_{k+j-p} (k+j-p)(k+j-p-1)...; the
    common polynomial content of the coefficients is kept (only numeric
    content and sign are normalized) so printed recurrences match their
    factored differential origin.
    """
    kv = MPoly.var(k)
    shifts = {}
    x = L.var
    for j, c in enumerate(L.coeffs):
        for p, gamma in c.coeffs_in(x).items():
            t = j - p
            term = gamma * _falling(kv + MPoly.const(t), j)
            shifts[t] = shifts.get(t, MPoly.zero()) + term
    shifts = {t: q for t, q in shifts.items() if not q.is_zero}
    tmin = min(shifts)
    tmax = max(shifts)
    offset = -tmin if tmin < 0 else 0
    coeffs = []
    for i in range(tmax + offset + 1):
        q = shifts.get(i - offset, MPoly.zero())
        coeffs.append(q.shift(k, -offset) if offset else q)
    # numeric content and sign only; polynomial content stays
    num = 0
    den = 1
    for p in coeffs:
        if p.is_zero:
            continue
        c = p.content()
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    if num:
        coeffs = [p * Fraction(den, num) for p in coeffs]
    lead = next((p for p in reversed(coeffs) if not p.is_zero), None)
    if lead is not None and lead.leading_coeff() < 0:
        coeffs = [-p for p in coeffs]
    return Recurrence(func, k, coeffs)


def holonomic_zero_test(L: DiffEq, e: Expr) -> bool:
    """Rigorous test that e is identically zero, given that L annihilates e.

    Once the first N0 Maclaurin coefficients vanish, the coefficient
    recurrence forces all later ones to vanish as well, where N0 exceeds the
    order plus the largest nonnegative integer root of the recurrence's
    leading coefficient.
    """
    re = de_to_re(L)
    roots = nonneg_integer_roots(re.coeffs[-1], re.var)
    n0 = L.order + re.order + (max(roots) + 1 if roots else 0) + 1
    tay = taylor_coeffs(e, L.var, n0)
    return all(c == 0 for c in tay)


# ---------------------------------------------------------------------------
# order minimization by guess-and-certify
# ---------------------------------------------------------------------------


def _derivative_taylor(tay, times):
    out = list(tay)
    for _ in range(times):
        out = [out[i + 1] * (i + 1) for i in range(len(out) - 1)]
    return out


def _guess_de(tay, order, degree, x, func):
    """Candidate DE of given order/degree annihilating the series data."""
    unknowns = (order + 1) * (degree + 1)
    usable = len(tay) - order
    if usable < unknowns + 4:
        return None
    matrix = []
    for t in range(usable):
        row = []
        for j in range(order + 1):
            for p in range(degree + 1):
                idx = t + j - p
                if 0 <= idx < len(tay):
                    ff = Fraction(1)
                    for i in range(j):
                        ff *= idx - i
                    row.append(MPoly.const(tay[idx] * ff))
                else:
                    row.append(MPoly.zero())
        matrix.append(row)
    sol = fraction_free_solve(matrix, [MPoly.zero()] * len(matrix))
    if not sol.nullspace:
        return None
    xv = MPoly.var(x)
    for vec in sol.nullspace:
        coeffs = []
        for j in range(order + 1):
            c = MPoly.zero()
            for p in range(degree + 1):
                val = vec[j * (degree + 1) + p]
                if not val.is_zero:
                    c = c + xv ** p * val.constant_value()
            coeffs.append(c)
        if not coeffs[-1].is_zero:
            return DiffEq(func, x, normalize_coefficients(
                [RatFunc(c) for c in coeffs]))
    return None


def _certify_de(cand: DiffEq, L: DiffEq, e: Expr) -> bool:
    """Certify that cand annihilates e, using the known annihilator L.

    h = cand[e] lies in the module generated by e under L, so an annihilator
    of h is computable; h = 0 is then decided by the rigorous zero test on
    Taylor data derived exactly from e.
    """
    n = L.order
    red = _companion_reductions(L)
    x = L.var
    zero = RatFunc.const(0)

    def step(v):
        out = [c.derivative(x) for c in v]
        for i in range(n):
            c = v[i]
            if c.is_zero:
                continue
            if i + 1 < n:
                out[i + 1] = out[i + 1] + c
            else:
                for j in range(n):
                    out[j] = out[j] + c * red[j]
        return out

    # coordinates of h = sum cand.coeffs[j] * e^(j)
    basis = [zero] * n
    basis[0] = RatFunc.const(1)
    deriv = basis
    vh = [zero] * n
    for j, c in enumerate(cand.coeffs):
        if j:
            deriv = step(deriv)
        if not c.is_zero:
            vh = [a + RatFunc(c) * b for a, b in zip(vh, deriv)]
    if all(c.is_zero for c in vh):
        return True
    Lh = _first_dependence(vh, step, n, L.func, x)
    # exact Taylor data of h from Taylor data of e
    re = de_to_re(Lh)
    roots = nonneg_integer_roots(re.coeffs[-1], re.var)
    n0 = Lh.order + re.order + (max(roots) + 1 if roots else 0) + 1
    maxdeg = max(c.degree(x) for c in cand.coeffs)
    tay = taylor_coeffs(e, x, n0 + cand.order + maxdeg + 1)
    h = [Fraction(0)] * (n0 + 1)
    for j, c in enumerate(cand.coeffs):
        dj = _derivative_taylor(tay, j)
        for p, gamma in c.coeffs_in(x).items():
            g = gamma.constant_value()
            for t in range(n0 + 1):
                if 0 <= t - p < len(dj):
                    h[t] += g * dj[t - p]
    return all(c == 0 for c in h)


def _minimize_de(L: DiffEq, e: Expr) -> DiffEq:
    """Lower-order annihilator when one exists (guessed, then certified)."""
    x = L.var
    maxdeg = max(c.degree(x) for c in L.coeffs)
    try:
        for order in range(1, L.order):
            for degree in range(maxdeg + 2):
                need = (order + 1) * (degree + 1) + order + 8
                tay = taylor_coeffs(e, x, need)
                cand = _guess_de(tay, order, degree, x, L.func)
                if cand is not None and _certify_de(cand, L, e):
                    return cand
    except (SeriesError, ValueError):
        return L
    return L


# ---------------------------------------------------------------------------
# formal power series
# ---------------------------------------------------------------------------


@dataclass
class FormalPowerSeries:
    """sum_{k>=0} term(k) x^(m k + s), plus explicit exceptional terms."""

    var: str
    symmetry: int  # m
    offset: int  # s
    term: HyperTerm  # coefficient term c(k) with its display form
    initial: Fraction = Fraction(1)  # c(0)
    exceptional: list = field(default_factory=list)  # [(power, value)]

    def coefficients(self, count: int):
        """The first ``count`` coefficients c(0..count-1) of the sum part."""
        out = []
        k = self.term.var
        value = self.initial
        for t in range(count):
            out.append(value)
            b = {k: Fraction(t)}
            value = value * self.term.ratio.num.eval(b) / self.term.ratio.den.eval(b)
        return out

    def taylor(self, order: int):
        """Exact Maclaurin coefficients up to x^order."""
        out = [Fraction(0)] * (order + 1)
        for p, v in self.exceptional:
            if p <= order:
                out[p] += v
        count = max(0, (order - self.offset) // self.symmetry + 1)
        for t, c in enumerate(self.coefficients(count)):
            out[self.offset + self.symmetry * t] += c
        return out

    def __str__(self):
        expo = f"{self.symmetry}*k" if self.symmetry != 1 else "k"
        if self.offset:
            expo += f" + {self.offset}"
        body = f"sum({to_string(self.term.display)}*{self.var}^({expo}), k = 0..infinity)"
        for p, v in self.exceptional:
            xpow = "1" if p == 0 else (self.var if p == 1 else f"{self.var}^{p}")
            body = f"{v}*{xpow} + " + body
        return body


def _affine_sub(p: MPoly, v: str, scale: int, shift_by: Fraction) -> MPoly:
    """p(scale * v + shift_by)."""
    kv = MPoly.var(v)
    arg = kv * scale + MPoly.const(shift_by)
    out = MPoly.zero()
    for deg, c in p.coeffs_in(v).items():
        out = out + c * arg ** deg
    return out


def _ratio_display(ratio: RatFunc, k: str, initial: Fraction) -> Expr:
    """c(0) z^k prod poch(a_i,k) / prod poch(b_j,k) for the given ratio."""
    zn, upper = _linear_factor_params(ratio.num, k)
    zd, lower = _linear_factor_params(ratio.den, k)
    z = (zn / zd).constant_value()
    pieces = []
    if initial != 1:
        pieces.append(Num(initial))
    if z != 1:
        pieces.append(Pow(Num(z), Sym(k)))
    for a in upper:
        pieces.append(Pochhammer(E.from_ratfunc(a), Sym(k)))
    inv = []
    for b in lower:
        inv.append(Pow(Pochhammer(E.from_ratfunc(b), Sym(k)), Num(-1)))
    return E.mul(*(pieces + inv)) if (pieces or inv) else Num(1)


def fps(e: Expr, x: str) -> FormalPowerSeries:
    """Hypergeometric-type power series representation of e around 0."""
    L = simple_de(e, x)
    L = _minimize_de(L, e)
    re = de_to_re(L)
    k = re.var
    roots = []
    for c in (re.coeffs[0], re.coeffs[-1]):
        if not c.is_zero:
            roots.extend(nonneg_integer_roots(c, k))
    ncheck = 2 * (re.order + (max(roots) if roots else 0)) + 4
    tay = taylor_coeffs(e, x, ncheck)
    support = [i for i, c in enumerate(tay) if c != 0]
    if not support:
        raise ValueError("the zero function has no hypergeometric series")
    s = support[0]
    m = 0
    for i in support[1:]:
        m = gcd(m, i - s)
    m = m or 1
    # find the two-term lattice relation a(k+hi) <- a(k+lo), hi - lo = m
    nonzero = [i for i, c in enumerate(re.coeffs) if not c.is_zero]
    chosen = None
    for delta in range(m):
        lattice = [i for i in nonzero if (delta + i - s) % m == 0]
        if len(lattice) == 2 and lattice[1] - lattice[0] == m:
            chosen = lattice
            break
    if chosen is None:
        raise MixedSupportError(
            "coefficient recurrence is not two-term on the support lattice")
    lo, hi = chosen
    # ratio(t) = a(s+m(t+1))/a(s+mt) = -c_lo/c_hi at k = s + m t - lo
    clo = _affine_sub(re.coeffs[lo], k, m, Fraction(s - lo))
    chi = _affine_sub(re.coeffs[hi], k, m, Fraction(s - lo))
    ratio = RatFunc(-clo, chi)
    # move exceptional initial coefficients out while the ratio is unusable
    exceptional = []
    t0 = 0
    lattice_vals = [tay[s + m * t] for t in range((ncheck - s) // m + 1)]
    while True:
        b = {k: Fraction(t0)}
        den = ratio.den.eval(b) if not ratio.den.is_constant else \
            ratio.den.constant_value()
        if den != 0:
            num = ratio.num.eval(b)
            if t0 + 1 < len(lattice_vals) and \
                    lattice_vals[t0 + 1] * den == lattice_vals[t0] * num:
                break
        if t0 + 1 >= len(lattice_vals):
            raise MixedSupportError("no stable ratio on the support lattice")
        if lattice_vals[t0] != 0:
            exceptional.append((s + m * t0, lattice_vals[t0]))
        t0 += 1
    if t0:
        ratio = RatFunc(ratio.num.shift(k, t0), ratio.den.shift(k, t0))
    s = s + m * t0
    initial = tay[s]
    display = _ratio_display(ratio, k, initial)
    term = HyperTerm(k, ratio, display)
    out = FormalPowerSeries(x, m, s, term, initial, exceptional)
    # the representation must reproduce the source expansion
    if out.taylor(ncheck) != tay:
        raise MixedSupportError(
            "series reconstruction disagrees with the expansion")
    return out
