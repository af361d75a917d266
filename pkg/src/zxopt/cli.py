"""Command-line client for evaluation, simplification, optimisation,
equivalence checking and rule validation.

The CLI is a thin client over the service layer: it builds the same
request models, runs them through the in-process handlers by default,
or posts them to a running service when ``--server URL`` is given.
JSON output is the source of truth; the human format is a rendering of
it.  Exit codes: 0 success / equal, 1 not-equal / soundness violation,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from .service import models
from .service.handlers import (
    HandlerError,
    handle_equal,
    handle_eval,
    handle_optimize,
    handle_simplify,
    handle_validate_rules,
)

DEFAULT_MAX_LEGS = 12


class _Client:
    """Dispatches requests either in-process or to a remote service."""

    def __init__(self, server: Optional[str]):
        self.server = server.rstrip("/") if server else None

    def call(self, endpoint: str, request, response_model):
        if self.server is None:
            local = {
                "/eval": handle_eval,
                "/simplify": handle_simplify,
                "/optimize": handle_optimize,
                "/equal": handle_equal,
                "/validate-rules": handle_validate_rules,
            }[endpoint]
            return local(request)
        import httpx

        reply = httpx.post(
            f"{self.server}{endpoint}", json=request.model_dump(), timeout=300.0
        )
        if reply.status_code != 200:
            raise HandlerError("remote", f"{reply.status_code}: {reply.text}")
        return response_model.model_validate(reply.json())


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise HandlerError("io", f"cannot read {path}: {exc}")


def _load_diagram_model(path: str) -> models.DiagramModel:
    try:
        return models.DiagramModel.model_validate(json.loads(_read_text(path)))
    except (json.JSONDecodeError, ValidationError) as exc:
        raise HandlerError("format", f"{path} is not diagram JSON: {exc}")


def _load_source(path: str) -> models.SourceModel:
    if path.endswith(".qasm"):
        return models.SourceModel(qasm=_read_text(path))
    return models.SourceModel(diagram=_load_diagram_model(path))


def _max_legs(args) -> int:
    if args.max_legs is not None:
        return args.max_legs
    env = os.environ.get("ZX_MAX_LEGS")
    return int(env) if env else DEFAULT_MAX_LEGS


def _cmd_eval(args, client: _Client) -> int:
    req = models.EvalRequest(diagram=_load_diagram_model(args.diagram), max_legs=_max_legs(args))
    resp = client.call("/eval", req, models.EvalResponse)
    print(_dump([[list(entry) for entry in row] for row in resp.matrix]))
    return 0


def _cmd_simplify(args, client: _Client) -> int:
    req = models.SimplifyRequest(
        diagram=_load_diagram_model(args.diagram),
        strategy=args.strategy,
        include_trace=args.trace is not None,
    )
    resp = client.call("/simplify", req, models.SimplifyResponse)
    out = _dump(resp.diagram.model_dump(exclude_none=True))
    if args.output:
        Path(args.output).write_text(out + "\n")
    else:
        print(out)
    if args.trace is not None:
        trace = [step.model_dump() for step in resp.trace or []]
        Path(args.trace).write_text(_dump(trace) + "\n")
    return 0


def _render_optimize_report(path: str, report: models.OptimizeReport, fmt: str) -> str:
    if fmt == "json":
        return _dump({"input": path, **report.model_dump()})
    b, a = report.metrics_before, report.metrics_after
    lines = [
        f"{path}:",
        f"  gates     {b.total_gates} -> {a.total_gates}",
        f"  two-qubit {b.two_qubit} -> {a.two_qubit}",
        f"  t-count   {b.t_count} -> {a.t_count}",
        f"  h-count   {b.h_count} -> {a.h_count}",
        f"  rewrite steps: {report.rewrite_steps}; verified: {report.verified}",
    ]
    return "\n".join(lines)


def _cmd_optimize(args, client: _Client) -> int:
    verify = None
    if args.verify:
        verify = True
    elif args.no_verify:
        verify = False
    inputs = args.qasm
    if len(inputs) > 1 and args.output and not Path(args.output).is_dir():
        raise HandlerError("usage", "-o must name a directory for multiple inputs")

    def work(path: str) -> models.OptimizeResponse:
        req = models.OptimizeRequest(qasm=_read_text(path), verify=verify, tolerance=args.tol)
        return client.call("/optimize", req, models.OptimizeResponse)

    if args.jobs > 1 and len(inputs) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            responses = list(pool.map(work, inputs))
    else:
        responses = [work(path) for path in inputs]

    for path, resp in zip(inputs, responses):  # output ordering fixed by input order
        if args.output:
            target = Path(args.output)
            if target.is_dir():
                target = target / Path(path).name
            target.write_text(resp.qasm)
        elif not args.report:
            sys.stdout.write(resp.qasm)
        if args.report:
            print(_render_optimize_report(path, resp.report, args.format))
    return 0


def _cmd_equal(args, client: _Client) -> int:
    req = models.EqualRequest(
        a=_load_source(args.a),
        b=_load_source(args.b),
        up_to_scalar=args.up_to_scalar,
        tolerance=args.tol,
    )
    resp = client.call("/equal", req, models.EqualResponse)
    print(_dump(resp.model_dump()))
    return 0 if resp.equal else 1


def _cmd_validate_rules(args, client: _Client) -> int:
    req = models.ValidateRulesRequest(trials=args.trials, seed=args.seed, tolerance=args.tol)
    resp = client.call("/validate-rules", req, models.ValidateRulesResponse)
    if args.format == "json":
        print(_dump(resp.model_dump()))
    else:
        for rule in resp.rules:
            state = "ok " if rule.passed else "FAIL"
            print(f"{state} {rule.name:<18} trials={rule.trials} max_dev={rule.max_deviation:.3e}")
        print("all rules sound" if resp.ok else "SOUNDNESS VIOLATION")
    return 0 if resp.ok else 1


def _cmd_serve(args, _client: _Client) -> int:
    import uvicorn

    uvicorn.run("zxopt.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zxopt",
        description="ZX-diagram evaluation, simplification and verified circuit optimisation",
    )
    parser.add_argument("--server", help="post requests to a running zxopt service instead")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="print the matrix of a diagram as JSON [re, im] pairs")
    p.add_argument("diagram", help="diagram JSON file (.zx.json)")
    p.add_argument("--max-legs", type=int, default=None, help="leg budget (env ZX_MAX_LEGS)")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("simplify", help="rewrite a diagram to a normal form")
    p.add_argument("diagram")
    p.add_argument("--strategy", choices=["full", "circuit-safe"], default="full")
    p.add_argument("-o", "--output", help="write the simplified diagram here (default stdout)")
    p.add_argument("--trace", help="write the rewrite trace JSON here")
    p.set_defaults(func=_cmd_simplify)

    p = sub.add_parser("optimize", help="optimise QASM circuits with verified equivalence")
    p.add_argument("qasm", nargs="+", help="input .qasm file(s)")
    p.add_argument("-o", "--output", help="output file (or directory for multiple inputs)")
    p.add_argument("--report", action="store_true", help="print the metrics report")
    p.add_argument("--format", choices=["human", "json"], default="json")
    p.add_argument("--verify", action="store_true", help="force oracle verification")
    p.add_argument("--no-verify", action="store_true", help="skip oracle verification")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for batch mode")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("equal", help="compare two circuits/diagrams; exit 0 iff equal")
    p.add_argument("a", help=".qasm or diagram JSON")
    p.add_argument("b")
    p.add_argument("--up-to-scalar", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_equal)

    p = sub.add_parser("validate-rules", help="soundness-check the rule catalogue")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=["human", "json"], default="json")
    p.set_defaults(func=_cmd_validate_rules)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    client = _Client(args.server)
    try:
        return args.func(args, client)
    except HandlerError as exc:
        print(f"error ({exc.code}): {exc.message}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error (request): {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error (io): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
