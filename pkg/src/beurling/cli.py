"""Batch command-line client for the verification service.

The CLI builds typed requests and dispatches them either in process
(default; no server required) or to a running service via ``--server``.
It only shapes requests, writes report files, and maps check statuses to
exit codes:

    0  every check verified
    2  at least one check failed
    3  something was inconclusive or ran out of budget, nothing failed

Reports are byte-identical across runs with the same flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import service
from .schemas import (DecayRequest, DecayResponse, LadderResponse,
                      Lemma42Request, Lemma43Request, Lemma44Request,
                      Report, ReportResponse, Sec3BuildRequest,
                      Sec3BuildResponse, Sec3CheckRequest, Sec4LadderRequest,
                      WordlenRequest, WordlenResponse, exit_code_for)


class _Client:
    """Local in-process dispatch, or HTTP when a server URL is given."""

    def __init__(self, server: Optional[str]):
        self.server = server.rstrip("/") if server else None

    def call(self, path: str, request, response_model):
        if self.server is None:
            fn = {
                "/wordlen": service.run_wordlen,
                "/verify/lemma42": service.run_lemma42,
                "/verify/lemma43": service.run_lemma43,
                "/verify/lemma44": service.run_lemma44,
                "/sec3/build": service.sec3_build,
                "/sec3/check": service.sec3_check,
                "/sec4/ladder": service.sec4_ladder,
                "/profile/decay": service.profile_decay,
            }[path]
            return fn(request)
        import httpx

        resp = httpx.post(self.server + path, json=request.model_dump(),
                          timeout=3600.0)
        resp.raise_for_status()
        return response_model.model_validate(resp.json())


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit_report(report: Report, out: Optional[str]) -> None:
    text = _dump(report.model_dump())
    if out:
        Path(out).write_text(text)
        counts = ", ".join(f"{k}={v}" for k, v in report.counts.items() if v)
        print(f"{report.claim}: {report.status} ({counts}) -> {out}")
    else:
        sys.stdout.write(text)


def _parse_schedule_arg(text: str) -> str:
    """Map the CLI grammar (squares2 | unit | file:PATH) onto the service
    grammar; schedule files hold a JSON list of generators."""
    if text in ("squares2", "unit"):
        return text
    if text.startswith("file:"):
        gens = json.loads(Path(text[len("file:"):]).read_text())
        return "explicit:" + ",".join(str(int(g)) for g in gens)
    raise argparse.ArgumentTypeError(f"unknown schedule {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="beurling",
        description="Exact word-length and convolution-algebra verification")
    ap.add_argument("--server", default=None,
                    help="base URL of a running service (default: in-process)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wordlen", help="exact word length of one integer")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--schedule", default="squares2", type=_parse_schedule_arg)
    p.add_argument("--cap", default=64, type=int)
    p.add_argument("--out", default=None)

    pv = sub.add_parser("verify", help="run one lemma verifier")
    vsub = pv.add_subparsers(dest="lemma", required=True)

    p = vsub.add_parser("lemma42")
    p.add_argument("--kmax", default=5, type=int)
    p.add_argument("--out", default=None)

    p = vsub.add_parser("lemma43")
    p.add_argument("--j", default=1, type=int)
    p.add_argument("--kmin", default=1, type=int)
    p.add_argument("--kmax", default=6, type=int)
    p.add_argument("--samples", default=200, type=int)
    p.add_argument("--seed", default=7, type=int)
    p.add_argument("--out", default=None)

    p = vsub.add_parser("lemma44")
    p.add_argument("--j", default=1, type=int)
    p.add_argument("--J", default=None, type=int)
    p.add_argument("--instances", required=True,
                   help="JSON file holding a list of integer tuples")
    p.add_argument("--out", default=None)

    p3 = sub.add_parser("sec3", help="build or check a divergence witness")
    s3 = p3.add_subparsers(dest="action", required=True)

    p = s3.add_parser("build")
    p.add_argument("--weight", default="trivial",
                   choices=["trivial", "exp-squares2"])
    p.add_argument("--levels", default=6, type=int)
    p.add_argument("--out", default="psi.json",
                   help="certificate output path")
    p.add_argument("--report-out", default=None)

    p = s3.add_parser("check")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p4 = sub.add_parser("sec4", help="ladder surrogate pairings")
    s4 = p4.add_subparsers(dest="action", required=True)
    p = s4.add_parser("ladder")
    p.add_argument("--j", default=1, type=int)
    p.add_argument("--base", default=4, type=int)
    p.add_argument("--growth", default=4, type=int)
    p.add_argument("--power", default=1, type=int)
    p.add_argument("--out", default=None)

    pp = sub.add_parser("profile", help="ratio decay tables")
    ps = pp.add_subparsers(dest="what", required=True)
    p = ps.add_parser("decay")
    p.add_argument("--jmax", default=3, type=int)
    p.add_argument("--samples", default=200, type=int)
    p.add_argument("--seed", default=7, type=int)
    p.add_argument("--out", default="decay.csv", help="CSV output path")
    p.add_argument("--report-out", default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", default=8000, type=int)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "serve":
        import uvicorn

        from .api import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    client = _Client(args.server)

    if args.command == "wordlen":
        resp = client.call("/wordlen",
                           WordlenRequest(n=args.n, schedule=args.schedule,
                                          cap=args.cap),
                           WordlenResponse)
        _emit_report(resp.report, args.out)
        if resp.length is not None and args.out:
            print(f"length {resp.length}")
        return exit_code_for([resp.report])

    if args.command == "verify":
        if args.lemma == "lemma42":
            resp = client.call("/verify/lemma42",
                               Lemma42Request(kmax=args.kmax), ReportResponse)
        elif args.lemma == "lemma43":
            resp = client.call("/verify/lemma43",
                               Lemma43Request(j=args.j, kmin=args.kmin,
                                              kmax=args.kmax,
                                              samples=args.samples,
                                              seed=args.seed),
                               ReportResponse)
        else:
            instances = json.loads(Path(args.instances).read_text())
            resp = client.call("/verify/lemma44",
                               Lemma44Request(j=args.j, J=args.J,
                                              instances=instances),
                               ReportResponse)
        _emit_report(resp.report, args.out)
        return exit_code_for([resp.report])

    if args.command == "sec3":
        if args.action == "build":
            resp = client.call("/sec3/build",
                               Sec3BuildRequest(weight=args.weight,
                                                levels=args.levels),
                               Sec3BuildResponse)
            Path(args.out).write_text(_dump(resp.certificate))
            print(f"certificate -> {args.out}")
            _emit_report(resp.report, args.report_out)
            return exit_code_for([resp.report])
        doc = json.loads(Path(args.infile).read_text())
        resp = client.call("/sec3/check", Sec3CheckRequest(certificate=doc),
                           ReportResponse)
        _emit_report(resp.report, args.out)
        return exit_code_for([resp.report])

    if args.command == "sec4":
        resp = client.call("/sec4/ladder",
                           Sec4LadderRequest(j=args.j, base=args.base,
                                             growth=args.growth,
                                             power=args.power),
                           LadderResponse)
        _emit_report(resp.report, args.out)
        if args.out:
            print(f"value {resp.value}")
        return exit_code_for([resp.report])

    if args.command == "profile":
        resp = client.call("/profile/decay",
                           DecayRequest(jmax=args.jmax, samples=args.samples,
                                        seed=args.seed),
                           DecayResponse)
        Path(args.out).write_text(resp.csv)
        print(f"decay table -> {args.out}")
        _emit_report(resp.report, args.report_out)
        return exit_code_for([resp.report])

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
