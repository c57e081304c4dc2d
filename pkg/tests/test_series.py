import pytest
from hypothesis import assume, given, settings, strategies as st

from harmcrit.field import make_gaussian
from harmcrit.series import (OrderValue, Series1, Series2, SeriesError, compose, conj_series,
                             derivative, order, partial, reversion, series_pow)
from harmcrit.textfmt import parse_series1, parse_series2

I = make_gaussian(0, 1)


def S(text, trunc=None):
    return parse_series1(text, trunc)


def same(a: Series1, b: Series1, through: int = 20) -> bool:
    return a.agrees_with(b, through)


@st.composite
def poly(draw, min_ord=0, max_deg=5, trunc=24):
    n = draw(st.integers(min_value=max(min_ord, 1), max_value=max_deg))
    cs = [0] * min_ord
    for _ in range(min_ord, n + 1):
        re = draw(st.integers(-4, 4))
        im = draw(st.integers(-4, 4))
        cs.append(make_gaussian(re, im))
    return Series1(cs, trunc=trunc)


class TestOrder:
    def test_exact(self):
        assert order(S("z^2 - z^3")) == OrderValue.exact(2)

    def test_zero_polynomial(self):
        assert order(Series1([], trunc=8)).is_infinite

    def test_truncated_zero(self):
        assert order(Series1([], trunc=8, exact=False)) == OrderValue.at_least(9)

    def test_bivariate(self):
        assert order(parse_series2("x^2*y + y^4")) == OrderValue.exact(3)

    def test_ordering(self):
        assert OrderValue.exact(3).bound < OrderValue.at_least(5).bound < OrderValue.infinite().bound

    @pytest.mark.parametrize("value", [OrderValue.exact(4), OrderValue.at_least(9), OrderValue.infinite()])
    def test_json_round_trip(self, value):
        assert OrderValue.from_json(value.to_json()) == value


class TestCompose:
    def test_worked_expansion(self):
        r = compose(S("z + z^2"), S("z + z^3"))
        assert r.exact and same(r, S("z + z^2 + z^3 + 2*z^4 + z^6"))

    def test_identity_outer(self):
        s = S("z + (0,1)*z^2 - 3*z^5")
        assert same(compose(S("z"), s), s)

    def test_conjugate_then_compose(self):
        p = S("z + (0,1)*z^2")
        assert same(compose(conj_series(p), p), S("z + 2*z^3 + (0,1)*z^4"))

    def test_inner_needs_zero_constant(self):
        with pytest.raises(SeriesError):
            compose(S("z"), S("1 + z"))

    def test_truncation_propagates(self):
        r = compose(S("z + z^2"), S("z + z^2 + O(z^6)"))
        assert not r.exact and r.trunc == 5


class TestConj:
    def test_gaussian(self):
        assert same(conj_series(S("z + (0,1)*z^2")), S("z - (0,1)*z^2"))

    def test_real_fixed(self):
        s = S("z - 2*z^3 + 1/2*z^4")
        assert same(conj_series(s), s)


class TestReversion:
    def test_identity(self):
        assert same(reversion(S("z")), S("z"))

    def test_catalan(self):
        r = reversion(S("z + z^2", 12))
        assert same(r, S("z - z^2 + 2*z^3 - 5*z^4 + 14*z^5 - 42*z^6"), 6)

    def test_linear(self):
        r = reversion(Series1([0, I]))
        assert same(r, Series1([0, -I]))

    def test_bad_input(self):
        with pytest.raises(SeriesError):
            reversion(S("z^2"))


class TestDerivatives:
    def test_univariate(self):
        d = derivative(S("z^3"))
        assert same(d, S("3*z^2"))

    def test_truncation_drops(self):
        assert derivative(S("z + O(z^6)")).trunc == 4

    def test_partials(self):
        s = parse_series2("x^2*y")
        assert partial(s, "x").agrees_with(parse_series2("2*x*y"), 10)
        assert partial(s, "y").agrees_with(parse_series2("x^2"), 10)


class TestPow:
    def test_square(self):
        assert same(series_pow(S("z + z^2"), 2), S("z^2 + 2*z^3 + z^4"))

    def test_first_power(self):
        s = S("z + 7*z^4")
        assert same(series_pow(s, 1), s)

    def test_cube_with_i(self):
        r = series_pow(S("z + (0,1)*z^2"), 3)
        assert same(r, S("z^3 + (0,3)*z^4 - 3*z^5 - (0,1)*z^6"))

    def test_bivariate_truncation(self):
        s = parse_series2("x + y + O(4)")
        assert (s**3).trunc == 3 and (s * s).trunc == 3


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(poly(), poly())
    def test_order_adds(self, a, b):
        assume(not a.is_zero() and not b.is_zero())
        assert order(a * b).k == order(a).k + order(b).k

    @settings(max_examples=25, deadline=None)
    @given(poly(1, 4, 12), poly(1, 4, 12), poly(1, 4, 12))
    def test_compose_associative(self, a, b, c):
        lhs = compose(compose(a, b), c)
        rhs = compose(a, compose(b, c))
        assert lhs.agrees_with(rhs, min(lhs.trunc, rhs.trunc))

    @settings(max_examples=30, deadline=None)
    @given(poly(1, 5, 16), poly(1, 5, 16))
    def test_conj_commutes_with_compose(self, a, b):
        lhs = conj_series(compose(a, b))
        rhs = compose(conj_series(a), conj_series(b))
        assert lhs.agrees_with(rhs, 16)

    @settings(max_examples=30, deadline=None)
    @given(poly(2, 5, 14), st.integers(1, 3), st.integers(-3, 3))
    def test_reversion(self, tail, re, im):
        lead = make_gaussian(re, im)
        if lead.is_zero():
            lead = make_gaussian(1, 0)
        s = Series1([0, lead], trunc=14) + tail
        r = reversion(s)
        ident = Series1([0, 1], trunc=14)
        assert compose(s, r).agrees_with(ident, 14)
        assert compose(r, s).agrees_with(ident, 14)

    @settings(max_examples=30, deadline=None)
    @given(poly(), poly())
    def test_leibniz_and_linearity(self, a, b):
        assert derivative(a * b).agrees_with(derivative(a) * b + a * derivative(b), 20)
        assert derivative(a + b).agrees_with(derivative(a) + derivative(b), 20)

    @settings(max_examples=20, deadline=None)
    @given(poly(1, 3, 10), poly(1, 3, 10))
    def test_bivariate_leibniz(self, a, b):
        lin = Series2({(1, 0): 1, (0, 1): I}, trunc=10)
        from harmcrit.series import from_univariate

        A, B = from_univariate(a, lin), from_univariate(b, lin)
        lhs = (A * B).partial("x")
        rhs = A.partial("x") * B + A * B.partial("x")
        assert lhs.agrees_with(rhs, 9)
