"""Request/response models shared by the HTTP service and the CLI client.

Every numeric value in a report is an exact decimal-free string (integers,
rationals "p/q", e-power sums "e^m"); no floating point appears anywhere in
the wire format.  Reports are deterministic for identical parameters, so
byte-identical responses are part of the contract.
"""

from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = "1"

CheckStatus = Literal["verified", "failed", "inconclusive", "budget-exceeded"]


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    value: Optional[str] = None
    expected: Optional[str] = None
    witness: Optional[List] = None
    detail: Optional[str] = None


class Report(BaseModel):
    """Versioned machine-readable outcome of one verification claim."""

    schema_version: str = SCHEMA_VERSION
    claim: str
    parameters: Dict
    status: CheckStatus
    counts: Dict[str, int]
    checks: List[CheckResult]


def finalize_report(claim: str, parameters: Dict,
                    checks: List[CheckResult]) -> Report:
    """Aggregate per-check statuses; a report is verified only when every
    check is."""
    counts = {"verified": 0, "failed": 0, "inconclusive": 0,
              "budget-exceeded": 0}
    for c in checks:
        counts[c.status] += 1
    if counts["failed"]:
        status = "failed"
    elif counts["inconclusive"] or counts["budget-exceeded"]:
        status = "inconclusive" if counts["inconclusive"] else "budget-exceeded"
    elif counts["verified"] == len(checks) and checks:
        status = "verified"
    else:
        status = "failed"
    return Report(claim=claim, parameters=parameters, status=status,
                  counts=counts, checks=checks)


def exit_code_for(reports: List[Report]) -> int:
    """0 iff everything verified; 2 on any failure; 3 when something was
    inconclusive or ran out of budget but nothing failed."""
    statuses = [c.status for r in reports for c in r.checks]
    if any(s == "failed" for s in statuses):
        return 2
    if any(s in ("inconclusive", "budget-exceeded") for s in statuses):
        return 3
    return 0


# -- requests ----------------------------------------------------------------


class WordlenRequest(BaseModel):
    n: int
    schedule: str = "squares2"   # squares2 | unit | explicit:g1,g2,...
    cap: int = 64


class Lemma42Request(BaseModel):
    kmax: int = 5


class Lemma43Request(BaseModel):
    j: int = 1
    kmin: int = 1
    kmax: int = 6
    samples: int = 200
    seed: int = 7


class Lemma44Request(BaseModel):
    j: int = 1
    J: Optional[int] = None      # defaults to the least admissible threshold
    instances: List[List[int]]


class Sec3BuildRequest(BaseModel):
    weight: Literal["trivial", "exp-squares2"] = "trivial"
    levels: int = 6


class Sec3CheckRequest(BaseModel):
    certificate: Dict


class Sec4LadderRequest(BaseModel):
    j: int = 1
    base: int = 4
    growth: int = 4
    power: int = 1


class DecayRequest(BaseModel):
    jmax: int = 3
    samples: int = 200
    seed: int = 7


# -- responses ---------------------------------------------------------------


class WordlenResponse(BaseModel):
    report: Report
    length: Optional[int] = None
    witness: Optional[List[List[int]]] = None


class ReportResponse(BaseModel):
    report: Report


class Sec3BuildResponse(BaseModel):
    report: Report
    certificate: Dict


class LadderResponse(BaseModel):
    report: Report
    value: str


class DecayRowModel(BaseModel):
    r: int
    j: Optional[int]
    bound_numerator_exponent: int
    sample_count: int


class DecayResponse(BaseModel):
    report: Report
    rows: List[DecayRowModel]
    csv: str
