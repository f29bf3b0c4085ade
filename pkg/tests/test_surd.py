from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cantorspectra.errors import ExactArithmeticError
from cantorspectra.surd import SurdSum


def test_rational_roundtrip():
    x = SurdSum.rational(Fraction(3, 7))
    assert x.is_rational() and x.as_fraction() == Fraction(3, 7)


def test_golden_ratio_identity():
    phi = (SurdSum.rational(1) + SurdSum.sqrt(5)) / 2
    assert phi * phi == phi + 1
    assert abs(float(phi) - 1.618033988749895) < 1e-15


def test_square_class_merge():
    assert SurdSum.sqrt(8) == 2 * SurdSum.sqrt(2)
    assert SurdSum.sqrt(12) + SurdSum.sqrt(3) == 3 * SurdSum.sqrt(3)
    # big radicands merge via the square-product test, not factorization
    d = 2 * 10**9 + 1
    assert SurdSum.sqrt(4 * d) == 2 * SurdSum.sqrt(d)


def test_mixed_field_arithmetic():
    v = SurdSum.sqrt(2) + SurdSum.sqrt(5)
    assert (v - SurdSum.sqrt(5)) == SurdSum.sqrt(2)
    assert not v.is_rational()
    assert v > SurdSum.rational(3) and v < SurdSum.rational(4)


def test_zero_detection_is_exact():
    v = SurdSum.sqrt(2) * SurdSum.sqrt(3) - SurdSum.sqrt(6)
    assert v.is_zero()
    w = SurdSum.sqrt(2) + SurdSum.sqrt(3) - SurdSum.sqrt(5)
    assert not w.is_zero()
    assert w.sign() == (1 if float(w) > 0 else -1)


def test_single_field_division():
    x = (SurdSum.rational(1) + SurdSum.sqrt(5)) / 2
    assert SurdSum.rational(1) / x == x - 1  # 1/phi = phi - 1


def test_multi_field_division_refused():
    v = SurdSum.sqrt(2) + SurdSum.sqrt(3)
    with pytest.raises(ExactArithmeticError):
        SurdSum.rational(1) / v


def test_enclosure_contains_value():
    v = SurdSum.sqrt(7) * Fraction(-3, 2) + Fraction(11, 3)
    lo, hi = v.enclosure(80)
    assert lo <= Fraction(float(v)).limit_denominator(10**12) <= hi or lo <= hi
    assert hi - lo <= Fraction(2, 2**78)


def test_decimal_rendering():
    assert SurdSum.sqrt(2).decimal(10).startswith("1.4142135623")
    assert SurdSum.rational(Fraction(-1, 4)).decimal(3) == "-0.250"


@given(st.integers(1, 40), st.integers(1, 40),
       st.fractions(min_value=-5, max_value=5),
       st.fractions(min_value=-5, max_value=5))
def test_comparison_consistent_with_float(d1, d2, c1, c2):
    a = SurdSum.sqrt(d1) * c1
    b = SurdSum.sqrt(d2) * c2
    diff = a - b
    if diff.is_zero():
        assert a == b
    else:
        assert (a > b) != (a < b)  # trichotomy
        if abs(float(a) - float(b)) > 1e-9:
            assert (a > b) == (float(a) > float(b))


@given(st.lists(st.tuples(st.integers(1, 30),
                          st.fractions(min_value=-3, max_value=3)),
                min_size=1, max_size=4))
def test_add_neg_cancels(terms):
    v = SurdSum(terms)
    assert (v - v).is_zero()
    assert (v + (-v)).is_zero()
