"""Exact Maclaurin expansion by structural recursion on expression trees.

Internally the expansion variable is ramified: x = t^m with m the least
common multiple of the fractional-power denominators touching x, so that
sqrt(x) becomes the honest power series t.  Coefficients live in Q(s) with
s = sqrt(pi) treated as a transcendental symbol and pi = s^2; this keeps
erf-with-sqrt-pi combinations exact.  Negative powers of t are carried
internally (Laurent form) and rejected only if they survive to the result.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .expr import (
    Add, Binomial, Call, Expr, Factorial, Gamma, Mul, Num, Pochhammer, Pow,
    Sym, contains,
)
from .poly import MPoly, RatFunc

_SQRTPI = "sqrtpi"
_S = MPoly.var(_SQRTPI)


class SeriesError(ValueError):
    pass


def _rf(c) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    return RatFunc.const(c)


_ZERO = RatFunc.const(0)
_ONE = RatFunc.const(1)


class LSeries:
    """Truncated Laurent series: coeffs[i] is the coefficient of t^(val+i),
    exact for all exponents < prec."""

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val, coeffs, prec):
        coeffs = [_rf(c) for c in coeffs]
        while coeffs and coeffs[0].is_zero:
            coeffs.pop(0)
            val += 1
        if not coeffs:
            val = prec
        if val + len(coeffs) != prec:
            coeffs = coeffs + [_ZERO] * (prec - val - len(coeffs))
            coeffs = coeffs[: prec - val]
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    @property
    def is_zero(self):
        return not self.coeffs

    @staticmethod
    def const(c, prec):
        return LSeries(0, [_rf(c)] + [_ZERO] * (prec - 1), prec)

    @staticmethod
    def tpow(n, prec):
        return LSeries(n, [_ONE] + [_ZERO] * (prec - n - 1), prec)

    def coeff(self, exponent) -> RatFunc:
        if exponent >= self.prec:
            raise SeriesError("insufficient precision")
        i = exponent - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def add(self, other):
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val, prec)
        out = [_ZERO] * (prec - val)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                e = s.val + i
                if e < prec:
                    out[e - val] = out[e - val] + c
        return LSeries(val, out, prec)

    def scale(self, c):
        c = _rf(c)
        if c.is_zero:
            return LSeries(self.prec, [], self.prec)
        return LSeries(self.val, [x * c for x in self.coeffs], self.prec)

    def mul(self, other):
        if self.is_zero or other.is_zero:
            prec = min(self.val + other.prec, other.val + self.prec)
            return LSeries(prec, [], prec)
        val = self.val + other.val
        prec = min(self.val + other.prec, other.val + self.prec)
        out = [_ZERO] * (prec - val)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                e = val + i + j
                if e >= prec:
                    break
                if not b.is_zero:
                    out[e - val] = out[e - val] + a * b
        return LSeries(val, out, prec)

    def inverse(self):
        if self.is_zero:
            raise SeriesError("division by a series that is zero to working precision")
        n = self.prec - self.val  # relative precision of the unit part
        u = self.coeffs
        inv0 = _ONE / u[0]
        out = [inv0] + [_ZERO] * (n - 1)
        for i in range(1, n):
            acc = _ZERO
            for j in range(1, i + 1):
                if j < len(u) and not u[j].is_zero:
                    acc = acc + u[j] * out[i - j]
            out[i] = -inv0 * acc
        return LSeries(-self.val, out, -self.val + n)

    def int_pow(self, n: int):
        if n < 0:
            return self.inverse().int_pow(-n)
        if n == 0:
            return LSeries.const(1, self.prec)
        base = self
        result = None
        while n:
            if n & 1:
                result = base if result is None else result.mul(base)
            n >>= 1
            if n:
                base = base.mul(base)
        return result

    def pow_rational(self, alpha: Fraction):
        if alpha.denominator == 1:
            return self.int_pow(alpha.numerator)
        if self.is_zero:
            raise SeriesError("fractional power of a zero series")
        tshift = self.val * alpha
        if tshift.denominator != 1:
            raise SeriesError("fractional power produces a branch point (odd valuation)")
        c0 = self.coeffs[0]
        lead = _coeff_power(c0, alpha)
        n = self.prec - self.val
        # (1 + v)^alpha with v = unit/c0 - 1
        v = LSeries(1, [c / c0 for c in self.coeffs[1:]], n)
        out = _binomial_series(alpha, v, n)
        shifted = LSeries(tshift.numerator + out.val, out.coeffs, tshift.numerator + out.prec)
        return shifted.scale(lead)


def _binomial_series(alpha: Fraction, v: LSeries, prec: int) -> LSeries:
    """(1+v)^alpha for v with positive valuation, to absolute precision prec."""
    coeffs = []
    c = Fraction(1)
    jmax = prec if v.is_zero else prec // max(v.val, 1) + 1
    for jj in range(jmax + 1):
        coeffs.append(c)
        c = c * (alpha - jj) / (jj + 1)
    return _compose_taylor(coeffs, v, prec)


def _compose_taylor(outer, v: LSeries, prec: int) -> LSeries:
    """Sum outer[j] * v^j by Horner; v must have positive valuation."""
    if not v.is_zero and v.val < 1:
        raise SeriesError("composition requires the inner series to vanish at 0")
    acc = LSeries.const(outer[-1], prec)
    for c in reversed(outer[:-1]):
        acc = acc.mul(v).add(LSeries.const(c, prec))
    return acc


def _coeff_power(c: RatFunc, alpha: Fraction) -> RatFunc:
    """Exact alpha-th power of a constant of the form q * sqrtpi^d."""
    num, den = c.num, c.den
    if len(num.terms) != 1 or len(den.terms) != 1:
        raise SeriesError(f"no exact fractional power of {c}")
    (nexp, nc), = num.terms.items()
    (dexp, dc), = den.terms.items()
    d = (sum(nexp) if num.vars else 0) - (sum(dexp) if den.vars else 0)
    q = nc / dc
    se = d * alpha
    if se.denominator != 1:
        raise SeriesError(f"no exact fractional power of {c}")
    if q < 0:
        raise SeriesError(f"fractional power of negative constant {q}")

    def iroot(m, r):
        if m in (0, 1):
            return m
        g = round(m ** (1 / r))
        for cand in (g - 1, g, g + 1):
            if cand >= 0 and cand ** r == m:
                return cand
        raise SeriesError(f"{m} has no exact {r}th root")

    r = alpha.denominator
    root = Fraction(iroot(q.numerator, r), iroot(q.denominator, r)) ** alpha.numerator
    se = se.numerator
    if se >= 0:
        return RatFunc(MPoly((_SQRTPI,), {(se,): root}))
    return RatFunc(MPoly.const(root), MPoly((_SQRTPI,), {(-se,): 1}))


# ---------------------------------------------------------------------------
# head series
# ---------------------------------------------------------------------------


def _exp_coeffs(n):
    out = [Fraction(1)]
    for j in range(1, n + 1):
        out.append(out[-1] / j)
    return out


def _sin_coeffs(n):
    return [Fraction(0) if j % 2 == 0 else Fraction((-1) ** (j // 2), math.factorial(j))
            for j in range(n + 1)]


def _cos_coeffs(n):
    return [Fraction((-1) ** (j // 2), math.factorial(j)) if j % 2 == 0 else Fraction(0)
            for j in range(n + 1)]


def _arcsin_coeffs(n):
    out = [Fraction(0)] * (n + 1)
    for j in range(0, (n - 1) // 2 + 1):
        out[2 * j + 1] = Fraction(math.factorial(2 * j),
                                  4 ** j * math.factorial(j) ** 2 * (2 * j + 1))
    return out


def _arctan_coeffs(n):
    out = [Fraction(0)] * (n + 1)
    for j in range(0, (n - 1) // 2 + 1):
        out[2 * j + 1] = Fraction((-1) ** j, 2 * j + 1)
    return out


def _ln1p_coeffs(n):
    return [Fraction(0)] + [Fraction((-1) ** (j + 1), j) for j in range(1, n + 1)]


# ---------------------------------------------------------------------------
# ramification analysis
# ---------------------------------------------------------------------------


def _ramification(e: Expr, var: str) -> int:
    if isinstance(e, (Num, Sym)):
        return 1
    if isinstance(e, Pow):
        inner = _ramification(e.base, var)
        if isinstance(e.exponent, Num) and e.exponent.value.denominator != 1 \
                and contains(e.base, var):
            return _lcm(inner * e.exponent.value.denominator, inner)
        return inner
    if isinstance(e, Call) and e.name == "sqrt" and contains(e.args[0], var):
        return 2 * _ramification(e.args[0], var)
    m = 1
    for c in e.children():
        if isinstance(c, Expr):
            m = _lcm(m, _ramification(c, var))
    return m


def _lcm(a, b):
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# main recursion
# ---------------------------------------------------------------------------


def _series(e: Expr, var: str, m: int, prec: int) -> LSeries:
    if isinstance(e, Num):
        return LSeries.const(e.value, prec)
    if isinstance(e, Sym):
        if e.name == var:
            return LSeries.tpow(m, prec)
        if e.name == "pi":
            return LSeries.const(RatFunc(_S ** 2), prec)
        raise SeriesError(f"unbound symbol {e.name} in series expansion")
    if isinstance(e, Add):
        out = LSeries.const(0, prec)
        for a in e.args:
            out = out.add(_series(a, var, m, prec))
        return out
    if isinstance(e, Mul):
        out = LSeries.const(1, prec)
        for a in e.args:
            out = out.mul(_series(a, var, m, prec))
        return out
    if isinstance(e, Pow):
        if not isinstance(e.exponent, Num):
            raise SeriesError(f"symbolic exponent in series: {e!r}")
        # negative powers of series with positive valuation lose precision;
        # pad the base computation to compensate
        pad = 4 * m * (abs(e.exponent.value.numerator) + 1)
        base = _series(e.base, var, m, prec + pad)
        out = base.pow_rational(e.exponent.value)
        return LSeries(out.val, out.coeffs[: max(prec - out.val, 0)], min(out.prec, prec))
    if isinstance(e, Call):
        return _call_series(e, var, m, prec)
    if isinstance(e, (Factorial, Binomial, Pochhammer, Gamma)):
        raise SeriesError(f"discrete head {type(e).__name__} is not analytic in {var}")
    raise SeriesError(f"cannot expand {e!r}")


def _call_series(e: Call, var: str, m: int, prec: int) -> LSeries:
    name = e.name
    if name == "sqrt":
        return _series(Pow(e.args[0], Num(Fraction(1, 2))), var, m, prec)
    if name == "besselj":
        return _besselj_series(e, var, m, prec)
    (arg,) = e.args
    u = _series(arg, var, m, prec)
    if name == "ln":
        if u.is_zero or u.val != 0 or u.coeffs[0] != _ONE:
            raise SeriesError("ln is only expandable in the ln(1 + u) form with u(0) = 0")
        v = LSeries(u.val, list(u.coeffs), u.prec).add(LSeries.const(-1, u.prec))
        return _compose_taylor(_ln1p_coeffs(prec), v, prec)
    if not u.is_zero and u.val < 1:
        raise SeriesError(f"{name} applied to a series not vanishing at 0")
    table = {
        "exp": _exp_coeffs,
        "sin": _sin_coeffs,
        "cos": _cos_coeffs,
        "arcsin": _arcsin_coeffs,
        "arctan": _arctan_coeffs,
    }
    if name in table:
        return _compose_taylor([_rf(c) for c in table[name](prec)], u, prec)
    if name == "erf":
        # erf(u) = 2/sqrt(pi) * sum (-1)^j u^(2j+1) / (j! (2j+1))
        inv_s = RatFunc(MPoly.const(2), _S)
        coeffs = [_ZERO] * (prec + 1)
        for j in range(0, (prec - 1) // 2 + 1):
            coeffs[2 * j + 1] = _rf(Fraction((-1) ** j, math.factorial(j) * (2 * j + 1)))
        return _compose_taylor(coeffs, u, prec).scale(inv_s)
    raise SeriesError(f"no series rule for {name}")


def _besselj_series(e: Call, var: str, m: int, prec: int) -> LSeries:
    nu, arg = e.args
    if not isinstance(nu, Num) or nu.value.denominator != 1:
        raise SeriesError("besselj requires a concrete integer order for expansion")
    n = nu.value.numerator
    sign = Fraction(1)
    if n < 0:
        n = -n
        sign = Fraction((-1) ** n)
    u = _series(arg, var, m, prec)
    if not u.is_zero and u.val < 1:
        raise SeriesError("besselj applied to a series not vanishing at 0")
    w = u.scale(Fraction(1, 2))
    w2 = w.mul(w)
    out = LSeries.const(0, prec)
    term = w.int_pow(n) if n else LSeries.const(1, prec)
    j = 0
    while term.val < prec:
        c = Fraction((-1) ** j, math.factorial(j) * math.factorial(j + n))
        out = out.add(term.scale(c))
        term = term.mul(w2)
        j += 1
        if term.is_zero:
            break
    return out.scale(sign)


# ---------------------------------------------------------------------------
# public interface
# ---------------------------------------------------------------------------


def taylor_coeffs(e: Expr, var: str, order: int):
    """Exact Maclaurin coefficients [a_0, .., a_order] of e around var = 0."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    m = _ramification(e, var)
    prec = m * (order + 1)
    s = None
    for pad in (0, 8 * m, 32 * m, 128 * m):
        s = _series(e, var, m, prec + pad)
        if s.prec >= prec:
            break
    if s.prec < prec:
        raise SeriesError("could not reach the requested precision")
    if s.val < 0:
        raise SeriesError("expression is singular at the origin")
    out = [Fraction(0)] * (order + 1)
    for i, c in enumerate(s.coeffs):
        exponent = s.val + i
        if c.is_zero or exponent > m * order:
            continue
        if exponent % m:
            raise SeriesError("fractional powers of the variable survive expansion")
        if not c.is_constant:
            raise SeriesError(f"irrational coefficient {c} in expansion")
        out[exponent // m] = c.constant_value()
    return out
