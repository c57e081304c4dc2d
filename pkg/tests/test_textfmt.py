import pytest
from hypothesis import given, settings, strategies as st

from harmcrit.cli import DEMO_FIXTURES
from harmcrit.field import make_gaussian, root_of_unity
from harmcrit.series import Series1
from harmcrit.textfmt import (ParseError, format_cyclo, format_germ_spec, format_series1,
                              format_series2, parse_coeff, parse_germ_spec, parse_series1,
                              parse_series2)


@pytest.mark.parametrize("text, shown", [
    ("0", "0"),
    ("3/4", "3/4"),
    ("(0,1)", "(0, 1)"),
    ("(1/2, -3)", "(1/2, -3)"),
    ("zeta(8)", "zeta(8)"),
    ("zeta(3)", "zeta(12)^4"),
    ("-zeta(5)", "zeta(20)^14"),
    ("1 + zeta(12)^2", "(1 + zeta(12)^2)"),
    ("2*zeta(8) + zeta(8)^3", "(2*zeta(8) + zeta(8)^3)"),
])
def test_coefficient_canonical_form(text, shown):
    c = parse_coeff(text)
    assert format_cyclo(c) == shown
    assert parse_coeff(shown) == c


def test_zeta_levels():
    assert parse_coeff("zeta(3)").level == 12
    assert parse_coeff("-zeta(5)").level == 20
    assert parse_coeff("zeta(8)") == root_of_unity(1, 8, 8)


def test_univariate_truncation_marker():
    s = parse_series1("z + z^2 + O(z^5)")
    assert s.trunc == 4 and not s.exact
    assert format_series1(s) == "z + z^2 + O(z^5)"


def test_bivariate_truncation_marker():
    s = parse_series2("x^2*y + 3*y + O(5)")
    assert s.trunc == 4 and not s.exact
    assert format_series2(s) == "3*y + x^2*y + O(5)"


def test_whitespace_insensitive():
    assert parse_series1("z+(0,1)*z^2") == parse_series1("  z + ( 0 , 1 ) * z ^ 2 ")


@pytest.mark.parametrize("text, column", [
    ("z + z", 5),
    ("z + 2*z^", 9),
    ("z + w", 5),
])
def test_series_errors(text, column):
    with pytest.raises(ParseError) as err:
        parse_series1(text)
    assert err.value.column == column


@pytest.mark.parametrize("text, column, fragment", [
    ("p = z + ; q = z", 9, "coefficient"),
    ("pm: p = z; m = 0", 17, "positive"),
    ("p = z; q = z; r = 1", 15, "unknown field"),
    ("f1 = x; f2 = y^", 16, "integer"),
    ("p = z; p = z^2", 8, "twice"),
])
def test_germ_spec_errors(text, column, fragment):
    with pytest.raises(ParseError) as err:
        parse_germ_spec(text)
    assert err.value.column == column and fragment in err.value.reason


@pytest.mark.parametrize("text", [
    "pm: p = z + (0, 1)*z^2; m = 2",
    "pm: p = z + zeta(8)*z^2; m = 2",
    "p = z + z^2; q = z",
    "p = z + O(z^5); q = z; at = 1/2",
    "f1 = x^2 + y^2; f2 = x^5 + x^3*y^2 + x*y^4",
    "f1 = x; f2 = x*y + y^3",
])
def test_germ_spec_round_trip(text):
    assert format_germ_spec(parse_germ_spec(text)) == text


def test_demo_corpus_round_trips():
    specs = [f[2] for f in DEMO_FIXTURES if isinstance(f[2], str)]
    assert specs
    for text in specs:
        once = format_germ_spec(parse_germ_spec(text))
        assert format_germ_spec(parse_germ_spec(once)) == once


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=7),
       st.sampled_from([4, 8, 12]), st.booleans())
def test_random_series_round_trip(pairs, level, truncated):
    w = root_of_unity(1, level, level)
    cs = [make_gaussian(a, b, level) * w**k for k, (a, b) in enumerate(pairs)]
    s = Series1(cs, trunc=6 if truncated else 64, exact=not truncated)
    back = parse_series1(format_series1(s))
    assert back.exact == s.exact and back.agrees_with(s, s.trunc)
    if truncated:
        assert back.trunc == s.trunc
