"""Verification service: parameter models in, reports out.

This is the single orchestration layer; the FastAPI app and the CLI are
both thin wrappers around these functions.  Everything is deterministic
given the request (sampling is seeded and the seed is recorded in the
report parameters).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, List, Optional

from . import dsum, l1z, meanslab, weights, witness5, wordlen
from .exactnum import InconclusiveComparison
from .schemas import (CheckResult, DecayRequest, DecayResponse, DecayRowModel,
                      LadderResponse, Lemma42Request, Lemma43Request,
                      Lemma44Request, Report, ReportResponse, SCHEMA_VERSION,
                      Sec3BuildRequest, Sec3BuildResponse, Sec3CheckRequest,
                      Sec4LadderRequest, WordlenRequest, WordlenResponse,
                      finalize_report)


def parse_schedule(text: str) -> wordlen.GeneratorSchedule:
    """CLI/service schedule grammar: squares2 | unit | explicit:g1,g2,..."""
    if text == "squares2":
        return wordlen.GeneratorSchedule.squares2()
    if text == "unit":
        return wordlen.GeneratorSchedule.unit()
    if text.startswith("explicit:"):
        gens = [int(g) for g in text[len("explicit:"):].split(",") if g]
        return wordlen.GeneratorSchedule.explicit(gens)
    raise ValueError(f"unknown schedule {text!r}")


def parse_weight(text: str) -> weights.Weight:
    if text == "trivial":
        return weights.TrivialWeight()
    if text == "exp-squares2":
        return weights.weight_exp_wordlength(wordlen.GeneratorSchedule.squares2())
    raise ValueError(f"unknown weight {text!r}")


# ---------------------------------------------------------------------------


def run_wordlen(req: WordlenRequest) -> WordlenResponse:
    sched = parse_schedule(req.schedule)
    params = {"n": str(req.n), "schedule": req.schedule, "cap": req.cap}
    try:
        res = wordlen.word_length_exact(req.n, sched, req.cap)
    except wordlen.BudgetExceededError as exc:
        report = finalize_report("wordlen", params, [CheckResult(
            name="word-length", status="budget-exceeded", detail=str(exc))])
        return WordlenResponse(report=report)
    res.validate()
    check = CheckResult(
        name="word-length", status="verified", value=str(res.length),
        witness=[[i, c] for i, c in res.witness],
        detail="witness re-evaluates to the input with matching weight")
    report = finalize_report("wordlen", params, [check])
    return WordlenResponse(report=report, length=res.length,
                           witness=[[i, c] for i, c in res.witness])


def run_lemma42(req: Lemma42Request) -> ReportResponse:
    rep = witness5.verify_lemma42(req.kmax)
    checks = []
    for e in rep.entries:
        checks.append(CheckResult(
            name=f"eta(n_{e.k})",
            status=e.status,
            value=None if e.eta is None else str(e.eta),
            expected=str(e.expected),
            witness=[[i, c] for i, c in e.witness],
            detail=(f"oracle agrees at {e.oracle}" if e.oracle is not None
                    else "exact solver certificate")))
    return ReportResponse(report=finalize_report(
        "lemma42", {"kmax": req.kmax}, checks))


def _sample_tuples(rng: random.Random, r: int, lo: int, hi: int,
                   samples: int) -> List[tuple]:
    return [tuple(rng.randint(lo, hi) for _ in range(r))
            for _ in range(samples)]


def run_lemma43(req: Lemma43Request) -> ReportResponse:
    if req.kmin < req.j:
        raise ValueError(f"kmin = {req.kmin} below j = {req.j}")
    if req.kmax < req.kmin:
        raise ValueError("kmax below kmin")
    r = witness5.r_of(req.j)
    rng = random.Random(req.seed)
    tuples = _sample_tuples(rng, r, req.kmin, req.kmax, req.samples)
    cert = witness5.verify_lemma43(req.j, tuples)
    checks = []
    for rec in cert.records:
        checks.append(CheckResult(
            name=f"tuple{list(rec.ks)}",
            status=rec.status,
            value=f"eta_upper={rec.eta_upper}",
            expected=f"<= {rec.required}",
            detail=f"ratio-root exponent bound (eta_upper - sum(k_i+1))/r = "
                   f"{rec.eta_upper - sum(rec.ks) - r}/{r} <= -{req.j}"))
    params = {"j": req.j, "r": r, "kmin": req.kmin, "kmax": req.kmax,
              "samples": req.samples, "seed": req.seed}
    return ReportResponse(report=finalize_report("lemma43", params, checks))


def run_lemma44(req: Lemma44Request) -> ReportResponse:
    jm = witness5.jmin_for_lemma44(req.j)
    J = req.J if req.J is not None else jm.J
    rep = witness5.verify_lemma44(req.j, J, req.instances)
    checks = [CheckResult(
        name="threshold",
        status="verified",
        value=str(jm.J),
        detail=f"2^(2k-1) > r*k + 2r checked exactly on [{jm.J}, "
               f"{jm.J + jm.window_checked}], squared consequence on "
               f"[{jm.J}, {jm.J + jm.cond2_checked}]")]
    for e in rep.entries:
        checks.append(CheckResult(
            name=f"instance{list(e.ks)}",
            status=e.status,
            value=None if e.eta is None else f"eta={e.eta}",
            expected=f">= {e.lower_bound}",
            detail="exact solver value" if e.eta is not None
                   else "length cap exhausted; reported, not asserted"))
    params = {"j": req.j, "J": J, "r": rep.r,
              "instances": [list(i) for i in req.instances]}
    return ReportResponse(report=finalize_report("lemma44", params, checks))


# ---------------------------------------------------------------------------


def _build_state_and_cert(weight: weights.Weight, levels: int
                          ) -> tuple[meanslab.CesaroState, meanslab.PsiCertificate]:
    state = meanslab.build_nk(weight, max(2, 6 * levels))
    while True:
        try:
            return state, meanslab.build_psi(state, levels)
        except meanslab.StateTooShortError as exc:
            state.extend(exc.hint)


def _psi_checks(report: meanslab.PsiReport) -> List[CheckResult]:
    out = []
    for e in report.entries:
        out.append(CheckResult(name=e.name,
                               status="verified" if e.passed else "failed",
                               detail=e.detail))
    return out


def sec3_build(req: Sec3BuildRequest) -> Sec3BuildResponse:
    weight = parse_weight(req.weight)
    state, cert = _build_state_and_cert(weight, req.levels)
    verification = meanslab.verify_psi(cert, state)
    checks = _psi_checks(verification)
    final = cert.tj[-1]
    defect = meanslab.invariance_defect(state, final)
    checks.append(CheckResult(
        name=f"invariance-defect[{final}]",
        status="verified" if defect.exact.compare(Fraction(1, 1000)) < 0
        else "failed",
        value=str(defect.exact),
        expected="< 1/1000",
        detail=f"coarse bound {defect.coarse}"))
    doc = cert.as_doc()
    doc["schema_version"] = SCHEMA_VERSION
    params = {"weight": req.weight, "levels": req.levels}
    return Sec3BuildResponse(
        report=finalize_report("psi", params, checks), certificate=doc)


def sec3_check(req: Sec3CheckRequest) -> ReportResponse:
    cert = meanslab.PsiCertificate.from_doc(req.certificate)
    weight = parse_weight(cert.weight_desc)
    state = meanslab.state_from_anchors(weight, cert.nk)
    verification = meanslab.verify_psi(cert, state)
    params = {"weight": cert.weight_desc, "levels": len(cert.sj)}
    return ReportResponse(report=finalize_report(
        "psi", params, _psi_checks(verification)))


def sec4_ladder(req: Sec4LadderRequest) -> LadderResponse:
    sched = dsum.StaircaseSchedule(base=req.base, growth=req.growth)
    params = {"j": req.j, "base": req.base, "growth": req.growth,
              "power": req.power}
    try:
        value = dsum.ladder_powers(req.j, sched, req.power)
    except l1z.ResourceLimitError as exc:
        report = finalize_report("ladder", params, [CheckResult(
            name="positive-cone-pairing", status="budget-exceeded",
            detail=str(exc))])
        return LadderResponse(report=report, value="")
    check = CheckResult(
        name="positive-cone-pairing", status="verified", value=str(value),
        detail="exact rational; occurrences use disjoint staircase blocks")
    return LadderResponse(
        report=finalize_report("ladder", params, [check]), value=str(value))


def profile_decay(req: DecayRequest) -> DecayResponse:
    weight = parse_weight("exp-squares2")
    rows: List[DecayRowModel] = []
    checks: List[CheckResult] = []
    for j in range(1, req.jmax + 1):
        r = witness5.r_of(j)
        grid = list(range(j, j + 5))
        out = l1z.decay_profile(
            weight, witness5.nk5, [r], grid,
            samples=req.samples, seed=req.seed,
            eta_upper=witness5.eta_upper_telescoping(j))
        row = out[0]
        rows.append(DecayRowModel(r=row.r, j=row.j,
                                  bound_numerator_exponent=row.exponent,
                                  sample_count=row.sample_count))
        ok = row.exponent <= -j * r
        checks.append(CheckResult(
            name=f"row[j={j}]",
            status="verified" if ok else "failed",
            value=f"e^({row.exponent}/{r})",
            expected=f"<= e^-{j}",
            detail=f"max exponent over {row.sample_count} sampled tuples, "
                   f"grid {grid}"))
    csv_lines = ["r,j,bound_numerator_exponent,sample_count"]
    for row in rows:
        csv_lines.append(f"{row.r},{row.j},{row.bound_numerator_exponent},"
                         f"{row.sample_count}")
    params = {"jmax": req.jmax, "samples": req.samples, "seed": req.seed}
    return DecayResponse(report=finalize_report("decay", params, checks),
                         rows=rows, csv="\n".join(csv_lines) + "\n")
