"""Linear shift and differential operators with polynomial coefficients.

A Recurrence holds sum_j c_j(n) F(n+j) = 0 and a DiffEq holds
sum_j c_j(x) F^(j)(x) = 0.  Coefficient lists are normalized to a canonical
representative of the operator's line: denominators cleared, common
polynomial and numeric content removed, and the leading coefficient's
leading term made positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .factorize import parametric_factor
from .poly import MPoly, RatFunc, poly_gcd, poly_lcm


def normalize_coefficients(coeffs) -> list:
    """Canonical content-free MPoly list for rational coefficients c_0..c_J."""
    rs = [c if isinstance(c, RatFunc) else RatFunc(c) for c in coeffs]
    den = MPoly.one()
    for c in rs:
        den = poly_lcm(den, c.den)
    polys = [(c * RatFunc(den)).as_poly() for c in rs]
    g = MPoly.zero()
    for p in polys:
        g = poly_gcd(g, p)
    if not g.is_zero and g != MPoly.one():
        polys = [p.divexact(g) if not p.is_zero else p for p in polys]
    # strip the common numeric content as well
    num = 0
    dlc = 1
    for p in polys:
        if p.is_zero:
            continue
        c = p.content()
        num = gcd(num, c.numerator)
        dlc = dlc * c.denominator // gcd(dlc, c.denominator)
    if num:
        scale = Fraction(dlc, num)
        polys = [p * scale for p in polys]
    lead = next((p for p in reversed(polys) if not p.is_zero), None)
    if lead is not None and lead.leading_coeff() < 0:
        polys = [-p for p in polys]
    return polys


def factored_coeff(p: MPoly, v: str):
    """(sign, display string) for a coefficient, factored where possible."""
    unit, factors = parametric_factor(p, v)
    sign = 1
    if unit < 0:
        sign, unit = -1, -unit
    pieces = []
    if unit != 1 or not factors:
        pieces.append(str(unit))
    for f, m in factors:
        s = str(f)
        if len(f.terms) > 1 or m > 1:
            s = f"({s})"
        if m > 1:
            s = f"{s}^{m}"
        pieces.append(s)
    return sign, "*".join(pieces)


def _join_terms(terms):
    """Assemble [(sign, text)] into 'a - b + c = 0'."""
    out = ""
    for i, (sign, text) in enumerate(terms):
        if i == 0:
            out = ("-" if sign < 0 else "") + text
        else:
            out += (" - " if sign < 0 else " + ") + text
    return out + " = 0"


@dataclass
class Recurrence:
    """sum_{j=0}^{order} coeffs[j](var) * func(var + j) = 0."""

    func: str
    var: str
    coeffs: list  # MPoly in var (and parameters), index j = 0..order

    def __post_init__(self):
        while len(self.coeffs) > 1 and self.coeffs[-1].is_zero:
            self.coeffs = self.coeffs[:-1]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (isinstance(other, Recurrence) and self.func == other.func
                and self.var == other.var and self.coeffs == other.coeffs)

    def __str__(self):
        terms = []
        for j in range(self.order, -1, -1):
            if self.coeffs[j].is_zero:
                continue
            sign, text = factored_coeff(self.coeffs[j], self.var)
            arg = self.var if j == 0 else f"{self.var} + {j}"
            call = f"{self.func}({arg})"
            terms.append((sign, call if text == "1" else f"{text}*{call}"))
        return _join_terms(terms)

    def holds_at(self, values, bindings) -> bool:
        """Exact check of the recurrence on a window of sequence values.

        ``values`` maps integers m to exact values; the recurrence is checked
        at the base point bindings[var] with the remaining parameters bound.
        """
        n0 = bindings[self.var]
        total = Fraction(0)
        for j, c in enumerate(self.coeffs):
            total += c.eval(bindings) * values[n0 + j]
        return total == 0


def _derivative_name(func: str, var: str, j: int) -> str:
    if j == 0:
        return f"{func}({var})"
    if j <= 3:
        primes = "'" * j
        return f"{func}{primes}({var})"
    return f"{func}^({j})({var})"


@dataclass
class DiffEq:
    """sum_{j=0}^{order} coeffs[j](var) * (d/d var)^j func = 0."""

    func: str
    var: str
    coeffs: list  # MPoly in var (and parameters), index j = 0..order

    def __post_init__(self):
        while len(self.coeffs) > 1 and self.coeffs[-1].is_zero:
            self.coeffs = self.coeffs[:-1]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (isinstance(other, DiffEq) and self.func == other.func
                and self.var == other.var and self.coeffs == other.coeffs)

    def __str__(self):
        terms = []
        for j in range(self.order, -1, -1):
            if self.coeffs[j].is_zero:
                continue
            sign, text = factored_coeff(self.coeffs[j], self.var)
            name = _derivative_name(self.func, self.var, j)
            terms.append((sign, name if text == "1" else f"{text}*{name}"))
        return _join_terms(terms)
