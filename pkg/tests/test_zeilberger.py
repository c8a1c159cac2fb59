from fractions import Fraction

import pytest

from hypersum import expr as E
from hypersum.expr import eval_at, parse, to_string
from hypersum.hyperterm import eval_term_at_int, expand_hyper
from hypersum.operators import DiffEq, Recurrence
from hypersum.poly import MPoly
from hypersum.zeilberger import (
    DegenerateIntegrandError, NoRecurrenceError, OrderNotOneError,
    closedform, int_recursion, sum_diffeq, sum_recursion,
)


def term(text):
    return expand_hyper(parse(text))


def poly(text):
    return E.to_poly(parse(text))


def direct_sum(e, k, bindings, lo=0, hi=None):
    """Exact finite sum over the natural support, for small integer data."""
    base = E.subs(e, {v: E.Num(Fraction(x)) for v, x in bindings.items()})
    total = Fraction(0)
    k0 = lo
    zeros = 0
    while True:
        v = eval_at(eval_term_at_int(base, k, k0), {})
        total += v
        zeros = zeros + 1 if v == 0 else 0
        k0 += 1
        if hi is not None and k0 > hi:
            break
        if hi is None and zeros >= 3 and k0 > 3:
            break
    return total


LEGENDRE_FORMS = [
    "binomial(n,k)*binomial(-n-1,k)*((1-x)/2)^k",
    "binomial(n,k)^2*(x-1)^(n-k)*(x+1)^k/2^n",
    "binomial(n,k)*binomial(2*n-2*k,n)*x^(n-2*k)*(-1)^k/2^n",
    "x^n*hyperterm([-n/2,-n/2+1/2],[1],1-1/x^2,k)",
]


class TestSumRecursion:
    def test_binomial_row_sum(self):
        rec, cert = sum_recursion(term("binomial(n,k)"), "k", "n")
        assert rec.coeffs == [MPoly.const(-2), MPoly.one()]
        assert str(rec) == "S(n + 1) - 2*S(n) = 0"

    def test_legendre_all_forms_agree(self):
        expected = [poly("n+1"), poly("-(2*n+3)*x"), poly("n+2")]
        for src in LEGENDRE_FORMS:
            rec, cert = sum_recursion(term(src), "k", "n", func="P")
            assert rec.coeffs == expected, src

    def test_apery(self):
        rec, cert = sum_recursion(
            term("binomial(n,k)^2*binomial(n+k,k)^2"), "k", "n", func="A")
        assert rec.coeffs == [
            poly("(n+1)^3"),
            poly("-(2*n+3)*(17*n^2+51*n+39)"),
            poly("(n+2)^3"),
        ]

    def test_apery_matches_direct_sums(self):
        e = term("binomial(n,k)^2*binomial(n+k,k)^2")
        rec, cert = sum_recursion(e, "k", "n", func="A")
        values = {m: direct_sum(e, "k", {"n": m}, hi=m) for m in range(15)}
        for m in range(13):
            assert rec.holds_at(values, {"n": m})

    def test_dougall(self):
        e = term("hyperterm([a,1+a/2,b,c,d,1+2*a-b-c-d+n,-n],"
                 "[a/2,1+a-b,1+a-c,1+a-d,b+c+d-a-n,1+a+n],1,k)")
        rec, cert = sum_recursion(e, "k", "n")
        assert rec.order == 1
        assert rec.coeffs == [
            poly("-(a+n+1)*(a-b-c+n+1)*(a-b-d+n+1)*(a-c-d+n+1)"),
            poly("(a-b+n+1)*(a-b-c-d+n+1)*(a-c+n+1)*(a-d+n+1)"),
        ]

    def test_certificate_telescopes_pointwise(self):
        # Delta_k (R F) = F + sigma_1 F(n+1, k) at integer points
        e = term("binomial(n,k)^2*binomial(n+k,k)^2")
        rec, cert = sum_recursion(e, "k", "n")
        R = cert.multiplier
        for n0, k0 in [(5, 2), (6, 3), (7, 5)]:
            pt = {"n": Fraction(n0), "k": Fraction(k0)}
            pt1 = {"n": Fraction(n0), "k": Fraction(k0 + 1)}
            f = lambda nn, kk: eval_at(
                eval_term_at_int(E.subs(e, {"n": E.Num(Fraction(nn))}), "k", kk), {})
            lhs = (R.num.eval(pt1) / R.den.eval(pt1)) * f(n0, k0 + 1) \
                - (R.num.eval(pt) / R.den.eval(pt)) * f(n0, k0)
            rhs = f(n0, k0)
            for j, s in enumerate(cert.sigma, start=1):
                rhs += (s.num.eval(pt) / s.den.eval(pt)) * f(n0 + j, k0)
            assert lhs == rhs

    def test_order_cap_raises(self):
        with pytest.raises(NoRecurrenceError):
            sum_recursion(term("binomial(n,k)^2*binomial(n+k,k)^2"),
                          "k", "n", order_max=1)


class TestClosedform:
    def test_binomial_row_sum(self):
        cf = closedform(term("binomial(n,k)"), "k", "n")
        assert to_string(cf) == "2^n"

    def test_central_binomial(self):
        cf = closedform(term("binomial(n,k)^2"), "k", "n")
        assert to_string(cf) == "(2*n)!/n!^2"

    def test_vandermonde_value(self):
        e = term("hyperterm([-n,b],[c],1,k)")
        cf = closedform(e, "k", "n")
        for n0 in range(6):
            got = eval_at(E.subs(cf, {"n": E.Num(n0), "b": E.Num(Fraction(1, 3)),
                                      "c": E.Num(Fraction(7, 2))}), {})
            want = direct_sum(e, "k", {"n": n0, "b": Fraction(1, 3),
                                       "c": Fraction(7, 2)}, hi=n0)
            assert got == want

    def test_dougall_closedform(self):
        e = term("hyperterm([a,1+a/2,b,c,d,1+2*a-b-c-d+n,-n],"
                 "[a/2,1+a-b,1+a-c,1+a-d,b+c+d-a-n,1+a+n],1,k)")
        cf = closedform(e, "k", "n")
        assert to_string(cf) == (
            "pochhammer(a + 1,n)*pochhammer(a - b - c + 1,n)"
            "*pochhammer(a - b - d + 1,n)*pochhammer(a - c - d + 1,n)"
            "/pochhammer(a - b + 1,n)/pochhammer(a - b - c - d + 1,n)"
            "/pochhammer(a - c + 1,n)/pochhammer(a - d + 1,n)")

    def test_higher_order_refused(self):
        with pytest.raises(OrderNotOneError) as info:
            closedform(term("binomial(n,k)^2*binomial(n+k,k)^2"), "k", "n")
        assert info.value.recurrence.order == 2


class TestSumDiffeq:
    def test_legendre_generating_equation(self):
        de, cert = sum_diffeq(term(LEGENDRE_FORMS[0]), "k", "x", func="P")
        assert de.coeffs == [poly("-n*(n+1)"), poly("2*x"), poly("x^2-1")]
        assert str(de) == \
            "(x + 1)*(x - 1)*P''(x) + 2*x*P'(x) - n*(n + 1)*P(x) = 0"

    def test_exponential(self):
        de, cert = sum_diffeq(term("x^k/k!"), "k", "x", func="Q")
        assert de.coeffs == [poly("-1"), poly("1")]

    def test_quadratic_transformation_sides_agree(self):
        de1, _ = sum_diffeq(term("hyperterm([a,b],[2*b],4*x/(1+x)^2,k)"),
                            "k", "x", func="Q")
        de2, _ = sum_diffeq(term("(1+x)^(2*a)*hyperterm([a,a-b+1/2],[b+1/2],x^2,k)"),
                            "k", "x", func="Q")
        assert de1 == de2
        assert de1.coeffs == [
            poly("-4*a*b*(x-1)"),
            poly("-2*(x+1)*(b*x^2-2*a*x-x^2+b)"),
            poly("x*(x+1)^2*(x-1)"),
        ]

    def test_cubic_transformation_argument_side(self):
        de, cert = sum_diffeq(term("hyperterm([A,B],[C],1-((1-x)/(1+2*x))^3,k)"),
                              "k", "x", func="S")
        assert de.coeffs == [
            poly("9*A*B*(x-1)^2"),
            poly("(2*x+1)*(4*x^4+9*A*x^3+9*B*x^3-8*C*x^3+3*x^3+9*A*x^2"
                 "+9*B*x^2-12*C*x^2+3*x^2+9*A*x+9*B*x-6*C*x-x-C)"),
            poly("x*(2*x+1)^2*(x-1)*(x^2+x+1)"),
        ]


class TestIntRecursion:
    def test_beta_integrand(self):
        res = int_recursion(
            term("t^(c-1)*(1-t)^(d-1)*hyperterm([a,b],[c],t*x,k)"), "t", "k")
        assert res.recurrence.coeffs == [
            poly("-(a+k)*(b+k)*x"), poly("(c+d+k)*(k+1)")]
        assert "boundary terms" in res.note

    def test_gamma_integrand(self):
        res = int_recursion(term("t^k*exp(-t)"), "t", "k")
        assert res.recurrence.coeffs == [poly("-(k+1)"), poly("1")]
        assert str(res.recurrence) == "B(k + 1) - (k + 1)*B(k) = 0"

    def test_k_free_integrand_rejected(self):
        with pytest.raises(DegenerateIntegrandError):
            int_recursion(term("exp(-t)"), "t", "k")
