"""Hypergeometric solutions of recurrences (rec_hyper)."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hypersum.expr as E
from hypersum.expr import parse
from hypersum.operators import Recurrence
from hypersum.petkovsek import ParameterizedRecurrenceError, rec_hyper, ratio_solves
from hypersum.poly import MPoly, RatFunc


def poly(s):
    return E.to_poly(parse(s))


def ratio(s):
    return E.to_ratfunc(parse(s))


def witness_holds(re, r, upto=20):
    """Run S from S(0)=1 by the ratio and check the recurrence exactly."""
    values = [Fraction(1)]
    for m in range(upto + re.order):
        b = {re.var: Fraction(m)}
        values.append(values[-1] * r.num.eval(b) / r.den.eval(b))
    for m in range(upto):
        total = sum(c.eval({re.var: Fraction(m)}) * values[m + j]
                    for j, c in enumerate(re.coeffs))
        if total != 0:
            return False
    return True


class TestPaperExamples:
    def test_neg_three(self):
        re = Recurrence("S", "n",
                        [poly("9*(n+1)"), poly("3*(7+5*n)"), poly("2*(3+2*n)")])
        out = rec_hyper(re)
        assert out == [ratio("-3")]

    def test_two_ratio_set(self):
        re = Recurrence("s", "n", [poly("-(n+1)"), poly("1"), poly("n+4")])
        out = rec_hyper(re)
        assert set(map(str, out)) == {
            "(n + 1)/(n + 3)",
            "(-2*n^2 - 7*n - 5)/(2*n^2 + 9*n + 9)",
        }
        assert out[1] == ratio("-(5+2*n)*(n+1)/((3+2*n)*(n+3))")

    def test_first_order(self):
        re = Recurrence("S", "n", [poly("-2"), poly("1")])
        assert rec_hyper(re) == [ratio("2")]


class TestInvariants:
    def test_substitution_identity(self):
        re = Recurrence("s", "n", [poly("-(n+1)"), poly("1"), poly("n+4")])
        for r in rec_hyper(re):
            assert ratio_solves(re, r)

    def test_witness_sequences(self):
        cases = [
            Recurrence("S", "n",
                       [poly("9*(n+1)"), poly("3*(7+5*n)"), poly("2*(3+2*n)")]),
            Recurrence("s", "n", [poly("-(n+1)"), poly("1"), poly("n+4")]),
        ]
        for re in cases:
            out = rec_hyper(re)
            assert out
            for r in out:
                assert witness_holds(re, r)

    def test_completeness_two_known_solutions(self):
        # solutions 2^n and n!: (n-1)S(n+2) - (n^2+3n-2)S(n+1) + 2n(n+1)S(n)
        re = Recurrence("S", "n",
                        [poly("2*n*(n+1)"), poly("-(n^2+3*n-2)"), poly("n-1")])
        out = rec_hyper(re)
        assert set(map(str, out)) == {"2", "n + 1"}

    def test_parameterized_rejected(self):
        re = Recurrence("S", "n", [poly("a"), poly("n+1")])
        with pytest.raises(ParameterizedRecurrenceError):
            rec_hyper(re)

    def test_no_solution_is_empty(self):
        # a(n+2) = -a(n) has no hypergeometric solution over Q
        re = Recurrence("S", "n", [poly("1"), poly("0"), poly("1")])
        assert rec_hyper(re) == []


@settings(max_examples=25, deadline=None)
@given(z1=st.integers(-6, 6).filter(lambda z: z != 0),
       z2=st.integers(-6, 6).filter(lambda z: z != 0))
def test_geometric_pair_recovered(z1, z2):
    # S(n+2) - (z1+z2) S(n+1) + z1 z2 S(n) = 0 has solutions z1^n, z2^n
    re = Recurrence("S", "n", [
        MPoly.const(z1 * z2), MPoly.const(-(z1 + z2)), MPoly.one()])
    out = rec_hyper(re)
    expected = {RatFunc.const(z1), RatFunc.const(z2)}
    assert set(map(str, out)) == set(map(str, expected))
