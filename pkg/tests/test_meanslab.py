import json
import random
from fractions import Fraction

import pytest

from beurling.exactnum import ExpRatio, ExpSum
from beurling.meanslab import (CesaroState, ConstWindow, PsiCertificate,
                               RadiusError, SearchExhaustedError,
                               StateTooShortError, WeightWindow, build_nk,
                               build_psi, default_tol_schedule,
                               invariance_defect, pair_cesaro,
                               state_from_anchors, verify_psi)
from beurling.weights import (ExpAbsoluteWeight, TrivialWeight,
                              radius_normalize, weight_exp_wordlength)
from beurling.wordlen import GeneratorSchedule

F = Fraction
TRIV = TrivialWeight()
W5 = weight_exp_wordlength(GeneratorSchedule.squares2())


def _grow_psi(state, J):
    while True:
        try:
            return build_psi(state, J)
        except StateTooShortError as exc:
            state.extend(exc.hint)


class TestBuildNk:
    def test_trivial_example(self):
        st = build_nk(TRIV, 5, tol_schedule=lambda k: F(1, 2 ** k))
        assert st.nk == [0, 1, 3, 7, 15, 31]
        assert [c.as_rational() for c in st.Ck] == [1, 2, 4, 8, 16, 32]
        for k in range(2, 6):
            assert st.ratio(k) == ExpRatio.from_rational(F(1, st.nk[k] + 1))

    def test_trivial_closed_form_matches_linear_scan(self):
        # the binary-search shortcut must agree with a literal least-n scan
        st = build_nk(TRIV, 10)
        n_prev = 1
        C = F(2)
        for k in range(2, 11):
            tol = default_tol_schedule(k)
            n = n_prev
            while True:
                n += 1
                C_here = F(n + 1)
                if F(1) / C_here <= tol:
                    break
            assert st.nk[k] == n
            n_prev = n

    def test_rejects_radius_not_one(self):
        with pytest.raises(RadiusError):
            build_nk(ExpAbsoluteWeight(), 4)
        with pytest.raises(RadiusError):
            build_nk(weight_exp_wordlength(GeneratorSchedule.unit()), 4)

    def test_normalized_weight_accepted(self):
        gamma = radius_normalize(ExpAbsoluteWeight(), ExpSum.exp(1))
        st = build_nk(gamma, 5)
        # constant 1 on the nonnegative axis: same windows as the trivial weight
        assert st.nk == build_nk(TRIV, 5).nk

    def test_search_exhausted_reports_best(self):
        with pytest.raises(SearchExhaustedError) as err:
            build_nk(TRIV, 30, search_bound=100)
        assert err.value.best

    def test_exp_weight_ratios_certified(self):
        st = build_nk(W5, 4)
        for k in range(2, 5):
            assert st.ratio(k).compare(default_tol_schedule(k)) <= 0

    def test_ratios_non_increasing(self):
        st = build_nk(W5, 12)
        for k in range(1, st.depth + 1):
            assert st.ratio(k).compare(st.ratio(k - 1)) <= 0

    def test_extend_matches_fresh_build(self):
        a = build_nk(W5, 6)
        a.extend(10)
        b = build_nk(W5, 10)
        assert a.nk == b.nk
        assert all(x == y for x, y in zip(a.Ck, b.Ck))


class TestPairCesaro:
    def test_weight_window_pairs_to_one(self):
        for st in (build_nk(TRIV, 6), build_nk(W5, 6)):
            for k in range(st.depth + 1):
                assert pair_cesaro(st, k, WeightWindow()) == 1

    def test_weight_window_matches_direct_sum(self):
        st = build_nk(W5, 5)
        k = st.depth
        direct = pair_cesaro(st, k, lambda i: st.weight.eval(i))
        assert direct == pair_cesaro(st, k, WeightWindow())

    def test_const_windows(self):
        st = build_nk(TRIV, 5)
        assert pair_cesaro(st, 3, ConstWindow(F(0))) == 0
        assert pair_cesaro(st, 3, ConstWindow(F(1))) == 1

    def test_one_pairing_values_recorded(self):
        st = build_nk(W5, 5)
        vals = [st.one_pairing(k) for k in range(st.depth + 1)]
        assert vals[0] == 1  # (0+1)/C_0 = 1
        assert all(v.compare(0) > 0 for v in vals)


class TestBuildPsi:
    def test_base_level(self):
        st = build_nk(TRIV, 8)
        cert = build_psi(st, 1)
        assert cert.sj == [0] and cert.tj == [1]
        assert cert.pairings_s[0] == 0
        assert cert.pairings_t[0] == 1
        assert cert.points[1] == st.Ck[1]

    def test_trivial_level_two_anchors(self):
        # regression anchors from the construction run, values exact
        st = build_nk(TRIV, 40)
        cert = build_psi(st, 2)
        assert cert.sj == [0, 4] and cert.tj == [1, 8]
        assert cert.pairings_s[1] == ExpRatio.from_rational(F(1, 8))
        assert cert.pairings_t[1] == ExpRatio.from_rational(F(121, 128))

    def test_oscillation_thresholds(self):
        st = build_nk(TRIV, 40)
        cert = build_psi(st, 6)
        for j in range(len(cert.sj)):
            assert abs(cert.pairings_s[j]).compare(F(1, 4)) < 0
            assert abs(cert.pairings_t[j]).compare(F(3, 4)) > 0

    def test_oscillation_gap_exceeds_half(self):
        st = build_nk(TRIV, 40)
        cert = build_psi(st, 5)
        worst_t = min(abs(p).as_rational() for p in cert.pairings_t)
        worst_s = max(abs(p).as_rational() for p in cert.pairings_s)
        assert worst_t - worst_s > F(1, 2)

    def test_gap_blocks_are_zero(self):
        st = build_nk(TRIV, 40)
        cert = build_psi(st, 3)
        zero_blocks = [b for b in cert.blocks if b.kind == "zero"]
        assert zero_blocks
        for b in zero_blocks:
            mid = (b.lo + b.hi + 1) // 2
            assert cert.psi_value(mid, TRIV).is_zero()

    def test_too_short_raises_with_hint(self):
        st = build_nk(TRIV, 6)
        with pytest.raises(StateTooShortError):
            build_psi(st, 4)

    def test_deterministic_rebuild(self):
        st1 = build_nk(TRIV, 40)
        st2 = build_nk(TRIV, 40)
        doc1 = json.dumps(build_psi(st1, 6).as_doc())
        doc2 = json.dumps(build_psi(st2, 6).as_doc())
        assert doc1 == doc2


class TestVerifyPsi:
    def test_accepts_built_certificates(self):
        for weight, K in ((TRIV, 40), (W5, 46)):
            st = build_nk(weight, K)
            cert = _grow_psi(st, 4)
            report = verify_psi(cert, st)
            assert report.passed, [e.name for e in report.failures()]

    def test_roundtrip_through_doc(self):
        st = build_nk(TRIV, 40)
        cert = build_psi(st, 5)
        again = PsiCertificate.from_doc(cert.as_doc())
        assert verify_psi(again, st).passed

    def test_detects_zeroed_base_point(self):
        st = build_nk(TRIV, 40)
        cert = PsiCertificate.from_doc(build_psi(st, 4).as_doc())
        cert.points[1] = ExpSum()
        report = verify_psi(cert, st)
        assert not report.passed
        assert any("oscillation-high[1]" == e.name and not e.passed
                   for e in report.entries)

    def test_detects_overweight_point(self):
        st = build_nk(TRIV, 40)
        cert = PsiCertificate.from_doc(build_psi(st, 4).as_doc())
        cert.points[5] = TRIV.eval(5) + 2
        report = verify_psi(cert, st)
        assert any(e.name == "bound-point[5]" and not e.passed
                   for e in report.entries)

    def test_detects_tampered_prefix_sums(self):
        st = build_nk(TRIV, 40)
        cert = PsiCertificate.from_doc(build_psi(st, 4).as_doc())
        cert.Ck[3] = cert.Ck[3] + 1
        report = verify_psi(cert, st)
        assert any(e.name == "prefix-sum[3]" and not e.passed
                   for e in report.entries)

    def test_state_from_anchors_rederives_prefixes(self):
        st = build_nk(W5, 8)
        rebuilt = state_from_anchors(W5, st.nk)
        assert rebuilt.nk == st.nk
        assert all(a == b for a, b in zip(rebuilt.Ck, st.Ck))


class TestInvarianceDefect:
    def test_trivial_closed_form(self):
        st = build_nk(TRIV, 10)
        for k in range(st.depth + 1):
            d = invariance_defect(st, k)
            assert d.exact == ExpRatio.from_rational(F(2, st.nk[k] + 1))

    def test_strictly_decreasing_for_trivial(self):
        st = build_nk(TRIV, 12)
        vals = [invariance_defect(st, k).exact for k in range(st.depth + 1)]
        for a, b in zip(vals, vals[1:]):
            assert b.compare(a) < 0

    def test_coarse_dominates_exact(self):
        for weight, K in ((TRIV, 8), (W5, 8)):
            st = build_nk(weight, K)
            for k in range(st.depth + 1):
                d = invariance_defect(st, k)
                assert d.coarse.compare(d.exact) >= 0

    def test_decays_below_tolerance(self):
        st = build_nk(TRIV, 20)
        assert invariance_defect(st, 20).exact.compare(F(1, 10 ** 5)) < 0
