import random

import pytest
from hypothesis import given, settings, strategies as st

from harmcrit.field import make_gaussian
from harmcrit.harmonic import HarmonicGerm, complexify
from harmcrit.intersection import (IntersectionError, bivariate_gcd, has_common_branch,
                                   local_intersection, mu_complexified, truncated_intersection)
from harmcrit.series import OrderValue, Series2
from harmcrit.textfmt import parse_series1, parse_series2
from oracles import intersection_oracle

X, Y = Series2.x(), Series2.y()


def P(expr: str) -> Series2:
    """Polynomial from an expression in x, y; the text format has no products of sums."""
    if "(" not in expr or "O(" in expr:
        return parse_series2(expr)
    return eval(expr.replace("^", "**"), {"x": X, "y": Y})


@pytest.mark.parametrize("F, G, expected", [
    ("x", "y", 1),
    ("x", "y^2", 2),
    ("x", "x*y + y^3", 3),
    ("y^2 - x^3", "y^3 - x^2", 4),
    ("x", "x^2*y^2 + y^4", 4),
    ("x^2 + y^2", "x^5 + x^3*y^2 + x*y^4", 10),
    ("y - x^2", "y", 2),
    ("x^2 - y^3", "x^3 - y^2 + x*y^5", 4),
])
def test_known_values(F, G, expected):
    assert local_intersection(P(F), P(G)) == OrderValue.exact(expected)


@pytest.mark.parametrize("F, G", [
    ("x^2 + y^2", "x*(x^2 + y^2)^2"),
    ("x^2 + y^2", "x^5 + 2*x^3*y^2 + x*y^4"),
    ("x", "x*y"),
    ("x*y", "x*(1 + y)"),
])
def test_common_branch_is_infinite(F, G):
    assert local_intersection(P(F), P(G)).is_infinite


def test_not_through_origin():
    assert local_intersection(P("x - 1"), P("y")) == OrderValue.exact(0)


def test_common_factor_away_from_origin():
    # shared factor (1 + x) does not pass through 0
    F, G = P("x*(1 + x)"), P("y*(1 + x)")
    assert not has_common_branch(F, G)
    assert local_intersection(F, G) == OrderValue.exact(1)


@pytest.mark.parametrize("F, G, g", [
    ("x*y", "x*(x + y)", "x"),
    ("x^2 + y^2", "x^5 + 2*x^3*y^2 + x*y^4", "x^2 + y^2"),
    ("x", "y", "1"),
])
def test_gcd_up_to_unit(F, G, g):
    d = bivariate_gcd(P(F), P(G))
    want = P(g)
    lead = max(d.terms)
    c = want.terms[lead] / d.terms[lead]
    assert d.scale(c) == want


def test_rejects_truncated_input():
    with pytest.raises(IntersectionError):
        local_intersection(P("x + O(4)"), P("y"))


def test_complexified_generic_case():
    g = HarmonicGerm(parse_series1("z + z^2"), parse_series1("-z"))
    assert mu_complexified(*complexify(g)) == OrderValue.exact(2)


def test_complexified_real_pairs():
    assert mu_complexified(P("x"), P("x*y")).is_infinite
    assert mu_complexified(P("x"), P("x*y + y^3")) == OrderValue.exact(3)


def test_truncated_certifies_or_bounds():
    exact = truncated_intersection(P("x + x^9 + O(12)"), P("x*y + y^3 + O(12)"))
    assert exact == OrderValue.exact(3)
    bound = truncated_intersection(P("x + O(8)"), P("x*y + O(8)"))
    assert bound.is_at_least and bound.k >= 2


# -- randomized ------------------------------------------------------------

def _rand_poly(rng: random.Random, deg: int) -> Series2:
    terms = {}
    for a in range(deg + 1):
        for b in range(deg + 1 - a):
            if a + b and rng.random() < 0.45:
                terms[(a, b)] = make_gaussian(rng.randint(-3, 3), rng.randint(-2, 2))
    return Series2(terms)


@st.composite
def poly_pair(draw):
    rng = random.Random(draw(st.integers(0, 10**6)))
    while True:
        F, G = _rand_poly(rng, 3), _rand_poly(rng, 3)
        if not F.is_zero() and not G.is_zero():
            return F, G


@settings(max_examples=40, deadline=None)
@given(poly_pair())
def test_agrees_with_linear_algebra(pair):
    F, G = pair
    oracle = intersection_oracle(F.terms, G.terms, max_n=14)
    got = local_intersection(F, G)
    if oracle is None:
        assert got.is_infinite or got.k >= 13
    else:
        assert got == OrderValue.exact(oracle)


@settings(max_examples=40, deadline=None)
@given(poly_pair())
def test_symmetric(pair):
    F, G = pair
    assert local_intersection(F, G) == local_intersection(G, F)


@settings(max_examples=30, deadline=None)
@given(poly_pair(), poly_pair())
def test_multiplicative_in_second_argument(p1, p2):
    F, G1 = p1
    _, G2 = p2
    a, b = local_intersection(F, G1), local_intersection(F, G2)
    prod = local_intersection(F, G1 * G2)
    if a.is_infinite or b.is_infinite:
        assert prod.is_infinite
    else:
        assert prod == OrderValue.exact(a.k + b.k)


@settings(max_examples=30, deadline=None)
@given(poly_pair(), st.integers(-3, 3), st.integers(-3, 3))
def test_invariant_under_linear_change(pair, s, t):
    F, G = pair
    # (x, y) -> (x + s y, y + t x); invertible unless s t = 1
    if s * t == 1:
        return
    X = Series2({(1, 0): 1, (0, 1): s})
    Y = Series2({(0, 1): 1, (1, 0): t})
    F2, G2 = F.substitute(X, Y), G.substitute(X, Y)
    assert local_intersection(F2, G2) == local_intersection(F, G)


@settings(max_examples=30, deadline=None)
@given(poly_pair(), st.integers(-3, 3))
def test_adding_multiple_of_other(pair, k):
    F, G = pair
    assert local_intersection(F, G + F * Series2({(0, 1): k, (1, 0): 1})) == local_intersection(F, G)
