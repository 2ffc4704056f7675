from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from bialg.errors import ScalarParseError
from bialg.scalar import Poly, format_scalar, is_rational, parse_scalar, simplify, substitute

NAMES = ["a", "b", "c"]
SYMS = {n: sp.Symbol(n) for n in NAMES}

monomial = st.tuples(st.integers(-5, 5), st.integers(1, 3),
                     st.lists(st.sampled_from(NAMES), max_size=3))
polys = st.lists(monomial, max_size=4)


def build(spec):
    ours, ref = Fraction(0), sp.Integer(0)
    for num, den, vs in spec:
        term, rterm = Fraction(num, den), sp.Rational(num, den)
        for v in vs:
            term = term * Poly.var(v)
            rterm = rterm * SYMS[v]
        ours, ref = simplify(ours + term), ref + rterm
    return ours, sp.expand(ref)


def to_sympy(x):
    return sp.sympify(format_scalar(x).replace("^", "**"), locals=SYMS)


@given(polys, polys)
def test_ring_operations_match_sympy(p, q):
    (a, ra), (b, rb) = build(p), build(q)
    assert sp.expand(to_sympy(simplify(a + b)) - (ra + rb)) == 0
    assert sp.expand(to_sympy(simplify(a - b)) - (ra - rb)) == 0
    assert sp.expand(to_sympy(simplify(a * b)) - ra * rb) == 0


@given(polys)
def test_format_parse_round_trip(p):
    a, _ = build(p)
    assert parse_scalar(format_scalar(a)) == a


@given(polys, st.integers(-4, 4), st.integers(1, 3))
def test_substitution_matches_sympy(p, num, den):
    a, ra = build(p)
    val = Fraction(num, den)
    got = substitute(a, {n: val for n in NAMES})
    assert is_rational(got)
    want = ra.subs({SYMS[n]: sp.Rational(num, den) for n in NAMES})
    assert sp.Rational(got.numerator, got.denominator) == want


def test_constant_polys_collapse_to_fractions():
    x = Poly.var("x")
    assert simplify(x - x) == 0
    assert isinstance(simplify(x - x + 3), Fraction)


@pytest.mark.parametrize("text", ["", "a +", "1/0", "a/b", "a^b", "2.5", "f(a)"])
def test_parse_errors(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text)


def test_undeclared_parameter_rejected():
    with pytest.raises(ScalarParseError):
        parse_scalar("alpha + beta", ["alpha"])
    assert parse_scalar("alpha^2 - 3/2*alpha", ["alpha"]) == \
        Poly.var("alpha") ** 2 - Poly.var("alpha") * Fraction(3, 2)
