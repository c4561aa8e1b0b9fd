import json

import pytest
from fastapi.testclient import TestClient

from beurling import service
from beurling.api import app
from beurling.schemas import (DecayRequest, Lemma43Request, Lemma44Request,
                              Sec3BuildRequest, Sec3CheckRequest,
                              Sec4LadderRequest, WordlenRequest,
                              exit_code_for, finalize_report, CheckResult)

client = TestClient(app)


class TestReportAggregation:
    def test_all_verified(self):
        rep = finalize_report("x", {}, [CheckResult(name="a", status="verified")])
        assert rep.status == "verified"
        assert exit_code_for([rep]) == 0

    def test_failure_dominates(self):
        rep = finalize_report("x", {}, [
            CheckResult(name="a", status="verified"),
            CheckResult(name="b", status="failed"),
            CheckResult(name="c", status="budget-exceeded")])
        assert rep.status == "failed"
        assert exit_code_for([rep]) == 2

    def test_budget_without_failure(self):
        rep = finalize_report("x", {}, [
            CheckResult(name="a", status="verified"),
            CheckResult(name="b", status="budget-exceeded")])
        assert rep.status == "budget-exceeded"
        assert exit_code_for([rep]) == 3

    def test_empty_checks_never_verified(self):
        assert finalize_report("x", {}, []).status == "failed"


class TestServiceFunctions:
    def test_schedule_grammar(self):
        assert service.parse_schedule("squares2").kind == "squares2"
        assert service.parse_schedule("unit").kind == "unit"
        sched = service.parse_schedule("explicit:3,5")
        assert sched.generator(0) == 3 and sched.generator(1) == 5
        with pytest.raises(ValueError):
            service.parse_schedule("fib")

    def test_wordlen_budget_exceeded_status(self):
        resp = service.run_wordlen(WordlenRequest(n=10 ** 6, schedule="unit",
                                                  cap=8))
        assert resp.report.status == "budget-exceeded"
        assert resp.length is None

    def test_lemma43_reports_are_deterministic(self):
        req = Lemma43Request(j=1, kmin=1, kmax=4, samples=40, seed=7)
        a = service.run_lemma43(req).report.model_dump()
        b = service.run_lemma43(req).report.model_dump()
        assert json.dumps(a) == json.dumps(b)
        c = service.run_lemma43(Lemma43Request(j=1, kmin=1, kmax=4,
                                               samples=40, seed=8))
        assert json.dumps(c.report.model_dump()) != json.dumps(a)

    def test_lemma43_rejects_kmin_below_j(self):
        with pytest.raises(ValueError):
            service.run_lemma43(Lemma43Request(j=2, kmin=1, kmax=4, samples=5))

    def test_lemma44_uses_threshold_default(self):
        resp = service.run_lemma44(Lemma44Request(j=1, instances=[[4] * 8]))
        assert resp.report.parameters["J"] == 4
        assert resp.report.status == "verified"

    def test_sec3_trivial_build_and_check(self):
        built = service.sec3_build(Sec3BuildRequest(weight="trivial", levels=4))
        assert built.report.status == "verified"
        assert built.certificate["schema_version"] == "1"
        for field in ("nk", "Ck", "psi", "sj", "tj", "pairings"):
            assert field in built.certificate
        checked = service.sec3_check(
            Sec3CheckRequest(certificate=built.certificate))
        assert checked.report.status == "verified"

    def test_sec3_check_flags_tampering(self):
        built = service.sec3_build(Sec3BuildRequest(weight="trivial", levels=3))
        doc = built.certificate
        doc["psi"]["points"]["1"] = "0"
        checked = service.sec3_check(Sec3CheckRequest(certificate=doc))
        assert checked.report.status == "failed"

    def test_sec4_ladder_value(self):
        resp = service.sec4_ladder(Sec4LadderRequest(j=1, base=4, growth=4,
                                                     power=2))
        assert resp.value == "-1/16"
        assert resp.report.status == "verified"

    def test_decay_rows_and_csv(self):
        resp = service.profile_decay(DecayRequest(jmax=2, samples=50, seed=7))
        assert resp.report.status == "verified"
        lines = resp.csv.strip().split("\n")
        assert lines[0] == "r,j,bound_numerator_exponent,sample_count"
        assert len(lines) == 3
        r8 = resp.rows[0]
        assert r8.r == 8 and r8.j == 1
        assert r8.bound_numerator_exponent <= -8
        r32 = resp.rows[1]
        assert r32.r == 32 and r32.bound_numerator_exponent <= -64


class TestHttpSurface:
    def test_health(self):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"

    def test_wordlen_endpoint(self):
        r = client.post("/wordlen", json={"n": 531, "schedule": "squares2",
                                          "cap": 64})
        assert r.status_code == 200
        body = r.json()
        assert body["length"] == 4
        assert body["report"]["schema_version"] == "1"
        assert body["report"]["status"] == "verified"

    def test_lemma42_endpoint(self):
        r = client.post("/verify/lemma42", json={"kmax": 3})
        assert r.status_code == 200
        checks = r.json()["report"]["checks"]
        assert [c["value"] for c in checks] == ["2", "3", "4"]

    def test_lemma43_endpoint(self):
        r = client.post("/verify/lemma43",
                        json={"j": 1, "kmin": 1, "kmax": 4, "samples": 20,
                              "seed": 7})
        assert r.status_code == 200
        assert r.json()["report"]["status"] == "verified"

    def test_lemma44_endpoint(self):
        r = client.post("/verify/lemma44",
                        json={"j": 1, "J": 4, "instances": [[4] * 8]})
        assert r.status_code == 200
        assert r.json()["report"]["status"] == "verified"

    def test_sec3_roundtrip_over_http(self):
        r = client.post("/sec3/build", json={"weight": "trivial", "levels": 3})
        assert r.status_code == 200
        cert = r.json()["certificate"]
        r2 = client.post("/sec3/check", json={"certificate": cert})
        assert r2.status_code == 200
        assert r2.json()["report"]["status"] == "verified"

    def test_ladder_endpoint(self):
        r = client.post("/sec4/ladder",
                        json={"j": 1, "base": 4, "growth": 4, "power": 2})
        assert r.json()["value"] == "-1/16"

    def test_decay_endpoint(self):
        r = client.post("/profile/decay", json={"jmax": 1, "samples": 20,
                                                "seed": 7})
        assert r.status_code == 200
        assert r.json()["csv"].startswith(
            "r,j,bound_numerator_exponent,sample_count")

    def test_validation_errors_are_422(self):
        assert client.post("/wordlen", json={"n": 3, "schedule": "fib"}
                           ).status_code == 422
        assert client.post("/verify/lemma43",
                           json={"j": 2, "kmin": 1, "kmax": 3, "samples": 5}
                           ).status_code == 422
        assert client.post("/sec4/ladder", json={"j": 1, "growth": 1}
                           ).status_code == 422
