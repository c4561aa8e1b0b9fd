import random

import pytest

from beurling.witness5 import (cor45_lower, eta_upper_telescoping,
                               jmin_for_lemma44, nk5, r_of, rep_r_nj,
                               verify_lemma42, verify_lemma43, verify_lemma44)
from beurling.wordlen import GeneratorSchedule, word_length_exact

S2 = GeneratorSchedule.squares2()


class TestAnchorSequence:
    def test_first_values(self):
        assert [nk5(k) for k in range(5)] == [1, 3, 19, 531, 66067]

    def test_recursion_identity(self):
        for k in range(1, 9):
            assert nk5(k) == nk5(k - 1) + (1 << (k * k))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            nk5(-1)


class TestLemma42:
    def test_exact_lengths_up_to_five(self):
        rep = verify_lemma42(5)
        assert rep.passed
        assert [e.eta for e in rep.entries] == [2, 3, 4, 5, 6]

    def test_oracle_cross_checks_small_k(self):
        rep = verify_lemma42(4, oracle_k_max=3)
        for e in rep.entries:
            if e.k <= 3:
                assert e.oracle == e.expected
            else:
                assert e.oracle is None

    def test_witnesses_are_telescoping(self):
        rep = verify_lemma42(4)
        for e in rep.entries:
            assert e.witness == tuple((i, 1) for i in range(e.k + 1))


class TestExplicitRepresentation:
    def test_small_cases(self):
        r1 = rep_r_nj(1)
        assert r1.terms == ((1, 4), (4, 1))
        assert r1.length == 5 and r1.target == 24
        r2 = rep_r_nj(2)
        assert r2.terms == ((1, 9), (4, 4), (16, 1))
        assert r2.length == 21 and r2.target == 608

    def test_exact_sum_and_cap_through_j5(self):
        for j in range(1, 6):
            rep = rep_r_nj(j)
            rep.validate()
            assert rep.length == ((1 << (2 * j + 2)) - 1) // 3
            assert rep.length <= rep.r


class TestLemma43:
    def test_all_ones_tuple(self):
        cert = verify_lemma43(1, [(1,) * 8])
        rec = cert.records[0]
        assert rec.passed
        assert rec.eta_upper == 5 and rec.required == 8
        # consistent with the exact value eta(8 * n_1) = eta(24) = 5
        assert word_length_exact(24, S2).length == 5

    def test_mixed_tuple(self):
        cert = verify_lemma43(1, [(2, 1, 1, 1, 1, 1, 1, 1)])
        assert cert.passed

    def test_level_two_random_tuples(self):
        rng = random.Random(11)
        tuples = [tuple(rng.randint(2, 6) for _ in range(32))
                  for _ in range(100)]
        assert verify_lemma43(2, tuples).passed

    def test_rejects_malformed_tuples(self):
        with pytest.raises(ValueError):
            verify_lemma43(1, [(1, 1)])
        with pytest.raises(ValueError):
            verify_lemma43(2, [(1,) * 32])

    def test_upper_bound_dominates_exact(self):
        rng = random.Random(12)
        bound_fn = eta_upper_telescoping(1)
        for _ in range(30):
            ks = tuple(rng.randint(1, 4) for _ in range(8))
            ns = [nk5(k) for k in ks]
            upper = bound_fn(ks, ns)
            exact = word_length_exact(sum(ns), S2).length
            assert upper >= exact


class TestLemma44:
    def test_threshold_level_one(self):
        jm = jmin_for_lemma44(1)
        assert jm.J == 4
        # the inequality genuinely fails one step earlier
        assert not ((1 << 5) > 8 * 3 + 16)

    def test_threshold_level_two(self):
        jm = jmin_for_lemma44(2)
        r = r_of(2)
        assert (1 << (2 * jm.J - 1)) > r * jm.J + 2 * r
        assert jm.J >= 2

    def test_listed_instances(self):
        instances = [(4,) * 8, (5, 4, 4, 4, 4, 4, 4, 4),
                     (6, 5, 4, 4, 4, 4, 4, 4)]
        rep = verify_lemma44(1, 4, instances)
        assert rep.passed and not rep.budget_exceeded
        assert [e.lower_bound for e in rep.entries] == [0, 1, 3]
        assert all(e.eta is not None for e in rep.entries)

    def test_rejects_bad_instances(self):
        with pytest.raises(ValueError):
            verify_lemma44(1, 4, [(4, 5, 4, 4, 4, 4, 4, 4)])  # not sorted
        with pytest.raises(ValueError):
            verify_lemma44(1, 4, [(4, 4, 4, 4, 4, 4, 4, 3)])  # below J
        with pytest.raises(ValueError):
            verify_lemma44(1, 3, [(4,) * 8])  # J below threshold

    def test_budget_exhaustion_reported_not_passed(self):
        rep = verify_lemma44(1, 4, [(6, 5, 4, 4, 4, 4, 4, 4)], length_cap=3)
        assert rep.budget_exceeded and not rep.passed
        assert rep.entries[0].status == "budget-exceeded"


class TestCor45:
    def test_exact_exponents(self):
        rep = cor45_lower(1, [(4,) * 8, (5,) * 8])
        assert rep.passed
        for e in rep.entries:
            assert e.method == "exact"
            assert e.exponent is not None
            assert e.exponent >= -40

    def test_required_bound_value(self):
        rep = cor45_lower(1, [(4,) * 8])
        assert rep.entries[0].required == -40  # -r(J+1) = -8*5

    def test_budget_fallback_uses_lower_bound(self):
        rep = cor45_lower(1, [(5, 5, 4, 4, 4, 4, 4, 4)], length_cap=2)
        e = rep.entries[0]
        assert e.method == "lower-bound" and e.passed


class TestCrossModuleConsistency:
    def test_upper_vs_exact_on_shared_tuples(self):
        rng = random.Random(13)
        bound_fn = eta_upper_telescoping(1)
        for _ in range(20):
            ks = tuple(rng.randint(1, 4) for _ in range(8))
            cert = verify_lemma43(1, [ks])
            exact = word_length_exact(sum(nk5(k) for k in ks), S2).length
            assert cert.records[0].eta_upper >= exact
            assert cert.records[0].eta_upper == bound_fn(ks, None)
