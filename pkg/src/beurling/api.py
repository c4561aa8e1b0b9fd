"""HTTP surface for the verification service.

Long verifications are plain synchronous endpoints: callers that want
concurrency run several requests against a multi-worker server.  All
responses are deterministic for identical request bodies.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import service
from .schemas import (DecayRequest, DecayResponse, LadderResponse,
                      Lemma42Request, Lemma43Request, Lemma44Request,
                      ReportResponse, SCHEMA_VERSION, Sec3BuildRequest,
                      Sec3BuildResponse, Sec3CheckRequest, Sec4LadderRequest,
                      WordlenRequest, WordlenResponse)

app = FastAPI(
    title="beurling",
    description="Exact word-length metrics and weighted convolution-algebra "
                "verification",
    version="0.1.0",
)


def _guard(fn, *args):
    try:
        return fn(*args)
    except (ValueError, KeyError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "schema_version": SCHEMA_VERSION}


@app.post("/wordlen", response_model=WordlenResponse)
def wordlen(req: WordlenRequest) -> WordlenResponse:
    return _guard(service.run_wordlen, req)


@app.post("/verify/lemma42", response_model=ReportResponse)
def lemma42(req: Lemma42Request) -> ReportResponse:
    return _guard(service.run_lemma42, req)


@app.post("/verify/lemma43", response_model=ReportResponse)
def lemma43(req: Lemma43Request) -> ReportResponse:
    return _guard(service.run_lemma43, req)


@app.post("/verify/lemma44", response_model=ReportResponse)
def lemma44(req: Lemma44Request) -> ReportResponse:
    return _guard(service.run_lemma44, req)


@app.post("/sec3/build", response_model=Sec3BuildResponse)
def sec3_build(req: Sec3BuildRequest) -> Sec3BuildResponse:
    return _guard(service.sec3_build, req)


@app.post("/sec3/check", response_model=ReportResponse)
def sec3_check(req: Sec3CheckRequest) -> ReportResponse:
    return _guard(service.sec3_check, req)


@app.post("/sec4/ladder", response_model=LadderResponse)
def sec4_ladder(req: Sec4LadderRequest) -> LadderResponse:
    return _guard(service.sec4_ladder, req)


@app.post("/profile/decay", response_model=DecayResponse)
def profile_decay(req: DecayRequest) -> DecayResponse:
    return _guard(service.profile_decay, req)
