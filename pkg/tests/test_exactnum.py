import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beurling.exactnum import (CertifiedInterval, ExpRatio, ExpSum,
                               InconclusiveComparison, exp_enclosure)


def test_zero_and_rational_forms():
    assert ExpSum().is_zero()
    assert ExpSum.from_rational(Fraction(3, 4)).as_rational() == Fraction(3, 4)
    assert (ExpSum.exp(2) - ExpSum.exp(2)).is_zero()
    assert ExpSum.exp(0, 5) == ExpSum.from_rational(5)


def test_single_term_arithmetic():
    x = ExpSum.exp(3, Fraction(1, 2))
    y = ExpSum.exp(-1, 4)
    assert (x * y).single_term() == (Fraction(2), 2)
    assert (x / y).single_term() == (Fraction(1, 8), 4)
    assert (x ** 2).single_term() == (Fraction(1, 4), 6)
    assert (x ** -1).single_term() == (Fraction(2), -3)


def test_equality_is_exact_not_numeric():
    # e**1 differs from any rational, however close
    close = Fraction(271828182845904523536, 10 ** 20)
    assert ExpSum.exp(1) != ExpSum.from_rational(close)
    assert ExpSum.exp(1).compare(close) > 0 or ExpSum.exp(1).compare(close) < 0


def test_sign_same_sign_shortcut_and_mixed():
    assert (ExpSum.exp(5) + ExpSum.exp(1)).sign() == 1
    assert (-ExpSum.exp(5) - 1).sign() == -1
    assert (ExpSum.exp(1) - ExpSum.from_rational(3)).sign() < 0
    assert (ExpSum.exp(1) - ExpSum.from_rational(Fraction(5, 2))).sign() > 0


def test_comparisons_at_tiny_margins():
    # e**-40 margins around a nearby rational still get decided
    tiny = ExpSum.exp(-40)
    mid = tiny.interval(256)
    probe = (mid.lo + mid.hi) / 2
    assert tiny.compare(probe) in (-1, 1)


def test_interval_encloses_value():
    v = ExpSum.exp(3, Fraction(1, 3)) + ExpSum.exp(-2, 7) - 1
    box64 = v.interval(64)
    box256 = v.interval(256)
    assert box64.lo <= box256.lo <= box256.hi <= box64.hi
    assert box256.width < Fraction(1, 10 ** 60)


def test_str_parse_roundtrip_handpicked():
    cases = [
        ExpSum(),
        ExpSum.from_rational(Fraction(-7, 3)),
        ExpSum.exp(4, Fraction(3, 2)) - ExpSum.exp(2) + 7,
        ExpSum.exp(-3, Fraction(1, 2)) + ExpSum.exp(12, -5),
    ]
    for v in cases:
        assert ExpSum.parse(str(v)) == v


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.integers(-20, 20),
                       st.fractions(min_value=-100, max_value=100),
                       max_size=5))
def test_str_parse_roundtrip_random(terms):
    v = ExpSum(terms)
    assert ExpSum.parse(str(v)) == v


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(st.integers(-8, 8), st.fractions(min_value=-9, max_value=9), max_size=4),
       st.dictionaries(st.integers(-8, 8), st.fractions(min_value=-9, max_value=9), max_size=4),
       st.dictionaries(st.integers(-8, 8), st.fractions(min_value=-9, max_value=9), max_size=4))
def test_ring_laws(a, b, c):
    x, y, z = ExpSum(a), ExpSum(b), ExpSum(c)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + ExpSum() == x
    assert x * ExpSum.from_rational(1) == x


def test_certified_interval_ops():
    a = CertifiedInterval(Fraction(1), Fraction(2))
    b = CertifiedInterval(Fraction(-1), Fraction(3))
    assert (a + b).lo == 0 and (a + b).hi == 5
    assert (a * b).lo == -2 and (a * b).hi == 6
    with pytest.raises(ValueError):
        CertifiedInterval(Fraction(2), Fraction(1))


def test_nth_root_contains_truth():
    box = CertifiedInterval(Fraction(4), Fraction(4)).nth_root(2)
    assert box.lo <= 2 <= box.hi
    assert box.width < Fraction(1, 10 ** 20)
    zero = CertifiedInterval(Fraction(0), Fraction(0)).nth_root(5)
    assert zero.lo == zero.hi == 0


def test_exp_enclosure_monotone_precision():
    e1 = exp_enclosure(1, 64)
    e2 = exp_enclosure(1, 256)
    assert e1.lo <= e2.lo <= e2.hi <= e1.hi


def test_expratio_compare_and_abs():
    r = ExpRatio(ExpSum.exp(1), ExpSum.exp(1) + 1)  # e/(e+1) ~ 0.731
    assert r.compare(Fraction(3, 4)) < 0
    assert r.compare(Fraction(7, 10)) > 0
    assert abs(ExpRatio(-ExpSum.exp(2), ExpSum.exp(1))) == \
        ExpRatio(ExpSum.exp(2), ExpSum.exp(1))


def test_expratio_rational_display_and_parse():
    r = ExpRatio(ExpSum.from_rational(3), ExpSum.from_rational(4))
    assert str(r) == "3/4"
    q = ExpRatio(ExpSum.exp(2) + 1, ExpSum.exp(3))
    assert ExpRatio.parse(str(q)) == q


def test_division_requires_single_term():
    with pytest.raises(ValueError):
        (ExpSum.exp(1) + 1) / (ExpSum.exp(1) + 1)
    with pytest.raises(ZeroDivisionError):
        ExpSum.exp(1) / ExpSum()
