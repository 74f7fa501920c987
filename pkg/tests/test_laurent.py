from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st
import pytest

from realfree.laurent import LaurentValue, monomial_name, parse_monomial

terms = st.dictionaries(
    st.tuples(st.integers(-6, 3), st.integers(0, 3)),
    st.fractions(max_denominator=50),
    max_size=6,
)


def test_rendering():
    assert str(LaurentValue({(0, 0): 1, (-1, 0): 1})) == "1 + 1/N"
    assert str(LaurentValue({(0, 1): 2})) == "2*c"
    assert str(LaurentValue()) == "0"
    assert monomial_name(-2, 1) == "c/N^2"
    assert monomial_name(1, 0) == "N"
    assert monomial_name(2, 2) == "c^2*N^2"


def test_zero_terms_are_dropped():
    v = LaurentValue({(0, 0): 1}) - 1
    assert v.is_zero() and v.terms == {}


def test_evaluate_and_substitute():
    v = LaurentValue({(0, 1): 2, (-1, 0): 3})
    assert v.evaluate(3, Fraction(1, 2)) == 2
    assert v.substitute_c(2) == LaurentValue({(0, 0): 4, (-1, 0): 3})
    with pytest.raises(ValueError):
        v.evaluate(3)
    with pytest.raises(ValueError):
        v.as_number()


@given(terms)
def test_json_round_trip(t):
    v = LaurentValue(t)
    assert LaurentValue.from_json(v.to_json()) == v


@given(st.integers(-8, 8), st.integers(0, 5))
def test_monomial_names_round_trip(n_exp, c_exp):
    assert parse_monomial(monomial_name(n_exp, c_exp)) == (n_exp, c_exp)


@given(terms, terms, terms)
def test_ring_laws(a, b, c):
    x, y, z = LaurentValue(a), LaurentValue(b), LaurentValue(c)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0


@given(terms, st.integers(-3, 3))
def test_shift_and_constant_term(t, k):
    v = LaurentValue(t)
    assert v.shift(k).shift(-k) == v
    assert v.constant_term() + (v - v.constant_term()) == v
