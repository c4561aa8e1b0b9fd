import random
from fractions import Fraction

import pytest

from beurling.exactnum import ExpSum, exp_enclosure
from beurling.weights import (ExpAbsoluteWeight, TrivialWeight,
                              check_submultiplicative, radius_normalize,
                              rho_upper, weight_exp_wordlength)
from beurling.wordlen import GeneratorSchedule

S2 = GeneratorSchedule.squares2()


def test_trivial_weight():
    w = TrivialWeight()
    assert w.eval(0) == ExpSum.from_rational(1)
    assert w.eval(12345) == ExpSum.from_rational(1)
    assert w.radius() == ExpSum.from_rational(1)


def test_exp_wordlength_values():
    w = weight_exp_wordlength(S2)
    assert w.eval(0) == ExpSum.from_rational(1)
    assert w.eval(3) == ExpSum.exp(2)
    assert w.eval(24) == ExpSum.exp(5)
    assert w.eval(-24) == ExpSum.exp(5)
    # repeated evaluation is bit-identical
    assert w.eval(531) == w.eval(531) == ExpSum.exp(4)


def test_exp_wordlength_bulk_matches_pointwise():
    w = weight_exp_wordlength(S2)
    etas = w.eta_range(400)
    for n in (0, 1, 2, 3, 24, 100, 255, 400):
        assert etas[n] == w.eta(n)


def test_radius_closed_forms():
    assert weight_exp_wordlength(S2).radius() == ExpSum.from_rational(1)
    assert weight_exp_wordlength(GeneratorSchedule.unit()).radius() == ExpSum.exp(1)
    assert ExpAbsoluteWeight().radius() == ExpSum.exp(1)
    assert weight_exp_wordlength(
        GeneratorSchedule.explicit([1, 7])).radius() is None


class TestRhoUpper:
    def test_trivial(self):
        box = rho_upper(TrivialWeight(), 10)
        assert box.contains(1)
        assert box.width < Fraction(1, 10 ** 10)

    def test_exp_absolute_is_constant_e(self):
        box = rho_upper(ExpAbsoluteWeight(), 10)
        e = exp_enclosure(1, 192)
        assert box.lo <= e.hi and e.lo <= box.hi

    def test_exp_wordlength_squares2_dips_at_generators(self):
        # the minimum over n <= 2**16 sits at the generator 2**16 itself,
        # where the word length is 1
        box = rho_upper(weight_exp_wordlength(S2), 1 << 16)
        truth = exp_enclosure(Fraction(1, 1 << 16), 192)
        assert box.lo <= truth.hi and truth.lo <= box.hi
        assert box.hi < Fraction(100002, 100000)
        assert box.lo > 1


class TestRadiusNormalize:
    def test_identity_normalization(self):
        w = TrivialWeight()
        assert radius_normalize(w, ExpSum.from_rational(1)) is w

    def test_exp_absolute_by_e(self):
        gamma = radius_normalize(ExpAbsoluteWeight(), ExpSum.exp(1))
        for n in range(0, 6):
            assert gamma.eval(n) == ExpSum.from_rational(1)
        for m in range(1, 6):
            assert gamma.eval(-m) == ExpSum.exp(2 * m)
        assert gamma.eval(0) == ExpSum.from_rational(1)
        assert gamma.radius() == ExpSum.from_rational(1)

    def test_invalid_rho(self):
        with pytest.raises(ValueError):
            radius_normalize(TrivialWeight(), ExpSum.exp(1, -2))

    def test_normalized_submultiplicative(self):
        gamma = radius_normalize(ExpAbsoluteWeight(), ExpSum.exp(1))
        rng = random.Random(3)
        pairs = [(rng.randint(-50, 50), rng.randint(-50, 50))
                 for _ in range(200)]
        assert check_submultiplicative(gamma, pairs).ok


class TestGeqOne:
    def test_builtins_stay_at_least_one(self):
        rng = random.Random(9)
        ns = [rng.randint(-2000, 2000) for _ in range(100)]
        for w in (TrivialWeight(), ExpAbsoluteWeight(),
                  weight_exp_wordlength(S2)):
            assert w.check_geq_one(ns) == []

    def test_normalized_on_nonnegative_axis(self):
        gamma = radius_normalize(ExpAbsoluteWeight(), ExpSum.exp(1))
        assert gamma.check_geq_one(range(0, 50)) == []


class TestSubmultiplicativity:
    def test_spec_pair(self):
        w = weight_exp_wordlength(S2)
        rep = check_submultiplicative(w, [(3, 16)])
        assert rep.ok and rep.checked == 1

    def test_trivial_any_pairs(self):
        rep = check_submultiplicative(TrivialWeight(), [(5, -3), (0, 0)])
        assert rep.ok

    def test_exp_wordlength_random_pairs(self):
        w = weight_exp_wordlength(S2)
        rng = random.Random(4)
        pairs = [(rng.randint(-10 ** 4, 10 ** 4), rng.randint(-10 ** 4, 10 ** 4))
                 for _ in range(1000)]
        rep = check_submultiplicative(w, pairs)
        assert rep.checked == 1000
        assert not rep.violations and not rep.inconclusive
