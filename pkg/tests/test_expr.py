from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypersum import expr as E
from hypersum.expr import (
    Binomial, Call, Mul, Num, ParseError, Pow, Sym,
    differentiate, eval_at, parse, to_poly, to_ratfunc, to_string,
)
from hypersum.poly import MPoly, RatFunc

# expressions exercised throughout: every one of these strings appears in
# the documented input/output corpus
CORPUS = [
    "(-1)^k*binomial(n,k)",
    "arcsin(x)^2",
    "(2*k)!/(k!*4^k)",
    "(-1)^(k+1)*(4*k+1)*(2*k)!/(k!*4^k*(2*k-1)*(k+1)!)",
    "binomial(n,k)*binomial(-n-1,k)*((1-x)/2)^k",
    "binomial(n,k)^2*binomial(n+k,k)^2",
    "1/k",
    "exp(x-x^2)*sin(x^6-1)",
    "sqrt(x)*arcsin(sqrt(x))+sqrt(1-x)",
    "pochhammer(3,4)",
    "x*(1+x)^(-1)",
    "binomial(2*n,n)*x^n/2^n",
    "1/2-1/2*x",
    "2^n",
    "(2*n)!/(n!)^2",
    "besselj(n,x)*exp(x)",
    "17*n^2+51*n+39",
]


class TestParser:
    def test_shapes(self):
        e = parse("(-1)^k*binomial(n,k)")
        assert isinstance(e, Mul)
        kinds = {type(a).__name__ for a in e.args}
        assert kinds == {"Pow", "Binomial"}

    def test_power_of_call(self):
        e = parse("arcsin(x)^2")
        assert isinstance(e, Pow)
        assert isinstance(e.base, Call) and e.base.name == "arcsin"

    def test_factorial_precedence(self):
        # ! binds tighter than ^ : k!^2 is (k!)^2
        e = parse("k!^2")
        assert isinstance(e, Pow)
        assert type(e.base).__name__ == "Factorial"

    def test_pow_right_assoc(self):
        e = parse("2^3^2")
        assert eval_at(e, {}) == 2 ** 9

    def test_unary_minus_looser_than_pow(self):
        assert eval_at(parse("-2^2"), {}) == -4

    def test_rational_literal(self):
        assert parse("1/2") == Num(Fraction(1, 2))
        # but not when a tighter operator follows the denominator
        assert eval_at(parse("1/2!"), {}) == Fraction(1, 2)
        assert eval_at(parse("1/2^2"), {}) == Fraction(1, 4)

    def test_errors_carry_position(self):
        with pytest.raises(ParseError) as exc:
            parse("1+*2")
        assert exc.value.position == 2
        with pytest.raises(ParseError):
            parse("unknownfn(x)")
        with pytest.raises(ParseError):
            parse("(1+2")

    def test_corpus_roundtrip(self):
        for text in CORPUS:
            e = parse(text)
            assert parse(to_string(e)) == e, text

    def test_canonical_ordering_stable(self):
        assert parse("x*2") == parse("2*x")
        assert parse("a+b") == parse("b+a")


class TestDifferentiate:
    def test_product_chain(self):
        # derivative of exp(x-x^2)*sin(x^6-1)
        e = parse("exp(x-x^2)*sin(x^6-1)")
        d = differentiate(e, "x")
        expected = parse("(1-2*x)*exp(x-x^2)*sin(x^6-1)+6*exp(x-x^2)*cos(x^6-1)*x^5")
        # canonical constructors make the comparison structural
        assert d == expected

    def test_constant(self):
        assert differentiate(Num(5), "x") == Num(0)
        assert differentiate(Sym("y"), "x") == Num(0)

    def test_arcsin_rule(self):
        d = differentiate(parse("arcsin(x)"), "x")
        assert d == parse("(1-x^2)^(-1/2)")

    def test_polynomial(self):
        d = differentiate(parse("x^3+2*x"), "x")
        assert to_poly(d) == 3 * MPoly.var("x") ** 2 + 2

    def test_unknown_function(self):
        with pytest.raises(E.DifferentiationError):
            differentiate(Call("hyperterm", (Sym("x"),)), "x")
        with pytest.raises(E.DifferentiationError):
            differentiate(E.Factorial(Sym("x")), "x")


class TestEval:
    def test_binomial(self):
        assert eval_at(parse("binomial(n,k)"), {"n": 4, "k": 2}) == 6

    def test_pochhammer(self):
        assert eval_at(parse("pochhammer(3,4)"), {}) == 360

    def test_siam_summand(self):
        e = parse("(-1)^(k+1)*(4*k+1)*(2*k)!/(k!*4^k*(2*k-1)*(k+1)!)")
        # at k=1: (+1)*(5)*(2)/(1*4*1*2) = 5/4
        assert eval_at(e, {"k": 1}) == Fraction(5, 4)

    def test_negative_binomial_top(self):
        assert eval_at(parse("binomial(-3,2)"), {}) == 6

    def test_gamma_factorial(self):
        assert eval_at(parse("gamma(5)"), {}) == 24

    def test_fractional_power_exact(self):
        assert eval_at(parse("4^(1/2)"), {}) == 2
        with pytest.raises(E.EvalError):
            eval_at(parse("2^(1/2)"), {})

    def test_unbound(self):
        with pytest.raises(E.EvalError):
            eval_at(parse("x+1"), {})

    def test_transcendental_rejected(self):
        with pytest.raises(E.EvalError):
            eval_at(parse("exp(1)"), {})


class TestBridges:
    def test_to_ratfunc(self):
        r = to_ratfunc(parse("(1-x^10)/(1-x^5)"))
        assert r.as_poly() == MPoly.var("x") ** 5 + 1

    def test_to_poly_rejects_rational(self):
        with pytest.raises(E.NotRationalError):
            to_poly(parse("1/(x+1)"))

    def test_from_poly_roundtrip(self):
        p = 3 * MPoly.var("x") ** 2 - MPoly.var("x") + 5
        assert to_poly(E.from_poly(p)) == p

    def test_from_ratfunc_roundtrip(self):
        r = RatFunc(MPoly.var("x") + 1, MPoly.var("x") ** 2 + 2)
        assert to_ratfunc(E.from_ratfunc(r)) == r


simple_exprs = st.recursive(
    st.one_of(
        st.integers(min_value=-4, max_value=4).map(Num),
        st.sampled_from([Sym("x"), Sym("y")]),
    ),
    lambda children: st.one_of(
        st.tuples(children, children).map(lambda t: t[0] + t[1]),
        st.tuples(children, children).map(lambda t: t[0] * t[1]),
        st.tuples(children, st.integers(min_value=0, max_value=3)).map(
            lambda t: E.pow_(t[0], Num(t[1]))
        ),
    ),
    max_leaves=12,
)


class TestProperties:
    @given(simple_exprs)
    @settings(max_examples=80, deadline=None)
    def test_print_parse_roundtrip(self, e):
        assert parse(to_string(e)) == e

    @given(simple_exprs)
    @settings(max_examples=60, deadline=None)
    def test_eval_matches_poly_eval(self, e):
        binding = {"x": Fraction(3, 2), "y": Fraction(-2)}
        p = to_ratfunc(e)
        try:
            expected = p.eval(binding)
        except ZeroDivisionError:
            return
        assert eval_at(e, binding) == expected
