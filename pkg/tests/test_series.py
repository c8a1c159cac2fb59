from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypersum.expr import Num, Sym, parse
from hypersum.series import SeriesError, taylor_coeffs


def tc(text, order):
    return taylor_coeffs(parse(text), "x", order)


class TestBasics:
    def test_exp(self):
        assert tc("exp(x)", 3) == [1, 1, Fraction(1, 2), Fraction(1, 6)]

    def test_geometric(self):
        assert tc("x*(1+x)^(-1)", 3) == [0, 1, -1, 1]

    def test_arcsin_squared(self):
        c = tc("arcsin(x)^2", 6)
        assert c[2] == 1
        assert c[4] == Fraction(1, 3)
        assert c[6] == Fraction(8, 45)
        assert c[0] == c[1] == c[3] == c[5] == 0

    def test_sin_cos(self):
        assert tc("sin(x)", 5) == [0, 1, 0, Fraction(-1, 6), 0, Fraction(1, 120)]
        assert tc("cos(x)", 4) == [1, 0, Fraction(-1, 2), 0, Fraction(1, 24)]

    def test_ln_one_plus(self):
        assert tc("ln(1+x)", 4) == [0, 1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]

    def test_arctan(self):
        assert tc("arctan(x)", 5) == [0, 1, 0, Fraction(-1, 3), 0, Fraction(1, 5)]

    def test_polynomial(self):
        assert tc("(1+x)^3", 4) == [1, 3, 3, 1, 0]


class TestRamified:
    def test_sqrt_x_times_arcsin_sqrt_x_plus_sqrt_1mx(self):
        # known closed coefficients: 4^(-k) (2k)! / ((k!)^2 (2k-1)^2)
        c = tc("sqrt(x)*arcsin(sqrt(x))+sqrt(1-x)", 8)
        for k in range(9):
            import math
            expected = Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k) ** 2 * (2 * k - 1) ** 2)
            assert c[k] == expected, k

    def test_sqrt_one_minus_x(self):
        c = tc("sqrt(1-x)", 4)
        assert c == [1, Fraction(-1, 2), Fraction(-1, 8), Fraction(-1, 16), Fraction(-5, 128)]

    def test_erf_with_sqrt_pi(self):
        # -(sqrt(pi)/2 * sqrt(x) * erf(sqrt(x)) * (1 + 1/(2x)) + exp(-x)/2)
        # has coefficients (-1)^k / (k! (2k+1)(2k-1))
        e = parse("-(pi^(1/2)/2*sqrt(x)*erf(sqrt(x))*(1+1/(2*x))+exp(-x)/2)")
        c = taylor_coeffs(e, "x", 8)
        import math
        for k in range(9):
            expected = Fraction((-1) ** k, math.factorial(k) * (2 * k + 1) * (2 * k - 1))
            assert c[k] == expected, k

    def test_plain_sqrt_pi_is_rejected_as_final_coefficient(self):
        with pytest.raises(SeriesError):
            taylor_coeffs(parse("pi^(1/2)*x"), "x", 2)


class TestBessel:
    def test_besselj0(self):
        c = tc("besselj(0,x)", 6)
        assert c[0] == 1
        assert c[2] == Fraction(-1, 4)
        assert c[4] == Fraction(1, 64)
        assert c[6] == Fraction(-1, 2304)

    def test_besselj1(self):
        c = tc("besselj(1,x)", 5)
        assert c[1] == Fraction(1, 2)
        assert c[3] == Fraction(-1, 16)
        assert c[5] == Fraction(1, 384)

    def test_negative_order(self):
        assert tc("besselj(-1,x)", 5) == [-c for c in tc("besselj(1,x)", 5)]


class TestErrors:
    def test_singular(self):
        with pytest.raises(SeriesError):
            tc("1/x", 3)

    def test_ln_at_zero(self):
        with pytest.raises(SeriesError):
            tc("ln(x)", 3)

    def test_unbound_symbol(self):
        with pytest.raises(SeriesError):
            tc("exp(y*x)", 3)


class TestProperties:
    CASES = ["exp(x)", "sin(x)", "cos(x)", "arcsin(x)", "arctan(x)",
             "exp(x-x^2)", "arcsin(x)^2", "x^3+2*x", "besselj(0,x)",
             "sin(x)*cos(x)", "exp(x)*arctan(x)"]

    def test_derivative_commutes_with_taylor(self):
        from hypersum.expr import differentiate
        for text in self.CASES:
            e = parse(text)
            d = differentiate(e, "x")
            base = taylor_coeffs(e, "x", 11)
            deriv = taylor_coeffs(d, "x", 10)
            assert deriv == [base[j + 1] * (j + 1) for j in range(11)], text

    @given(st.integers(min_value=-3, max_value=3), st.sampled_from(CASES[:6]),
           st.sampled_from(CASES[:6]))
    @settings(max_examples=30, deadline=None)
    def test_linearity(self, a, t1, t2):
        e1, e2 = parse(t1), parse(t2)
        combined = Num(a) * e1 + e2
        c1 = taylor_coeffs(e1, "x", 8)
        c2 = taylor_coeffs(e2, "x", 8)
        assert taylor_coeffs(combined, "x", 8) == [a * x + y for x, y in zip(c1, c2)]

    def test_eval_agrees_with_taylor_for_polynomials(self):
        e = parse("3*x^4-x^2+7")
        c = taylor_coeffs(e, "x", 6)
        from hypersum.expr import eval_at
        assert eval_at(e, {"x": 2}) == sum(ci * 2 ** i for i, ci in enumerate(c))
