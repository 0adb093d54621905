from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sik.arith import (Surd, ceil, decode_scalar, encode_scalar, floor, frac, is_integer, sign,
                       surd, varphi)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)
radicands = st.sampled_from([2, 3, 5, 6, 7, 10, 13])


def test_floor_examples():
    assert floor(F(5, 3)) == 1
    assert floor(F(-1, 3)) == -1
    assert floor(surd(0, 1, 2)) == 1


def test_ceil_frac_varphi():
    assert ceil(F(2, 3)) == 1
    assert varphi(F(2, 3)) == 1
    assert varphi(F(1)) == 0
    assert frac(F(7, 3)) == F(1, 3)


def test_surd_with_zero_coefficient_collapses():
    assert surd(F(3, 2), 0, 5) == F(3, 2)
    assert not isinstance(surd(F(3, 2), 0, 5), Surd)


def test_non_squarefree_rejected():
    with pytest.raises(ValueError):
        surd(0, 1, 4)


@given(rationals, rationals.filter(bool), radicands)
def test_floor_and_sign_match_sympy(a, b, d):
    x = surd(a, b, d)
    ref = sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(d)
    assert floor(x) == int(sympy.floor(ref))
    assert ceil(x) == int(sympy.ceiling(ref))
    assert sign(x) == int(sympy.sign(ref))


@given(rationals, rationals.filter(bool), radicands)
def test_frac_in_unit_interval(a, b, d):
    x = surd(a, b, d)
    f = frac(x)
    assert 0 <= f < 1
    assert is_integer(x - f)


@given(rationals, rationals, rationals, rationals, radicands)
def test_field_operations(a, b, c, e, d):
    x, y = surd(a, b, d), surd(c, e, d)
    assert (x + y) - y == x
    if y != 0:
        assert (x * y) / y == x
    assert abs(x) >= 0


@given(rationals, rationals.filter(bool), radicands)
def test_json_round_trip(a, b, d):
    x = surd(a, b, d)
    assert decode_scalar(encode_scalar(x)) == x
    assert decode_scalar(encode_scalar(a)) == a


def test_mixed_radicands_rejected():
    with pytest.raises(ValueError):
        surd(0, 1, 2) + surd(0, 1, 3)
