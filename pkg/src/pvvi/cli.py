"""Command-line client for the solver service.

Every subcommand posts to the HTTP service and formats the response; with
no --server flag the service runs in-process, so the tool works standalone
while staying a thin client.  Exit codes: 0 success, 1 verification
failure, 2 usage or schema errors (including missing files), 3 solver
resource guards.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class ClientError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


class ServiceClient:
    """POSTs to a remote server, or to the in-process app by default."""

    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code == 200:
            return response.json()
        try:
            detail = response.json().get("detail")
        except ValueError:
            detail = response.text
        if isinstance(detail, dict):
            code = detail.get("code")
            message = detail.get("message", str(detail))
            if code == "solver_guard":
                raise ClientError(EXIT_GUARD, f"solver guard: {message}")
            raise ClientError(EXIT_USAGE, message)
        raise ClientError(EXIT_USAGE, f"request failed ({response.status_code}): {detail}")


def _problem_payload(target: str) -> dict:
    """Builtin name or problem file path -> request fields."""
    if target in ("po", "vop") and not os.path.exists(target):
        return {"builtin": target}
    if not os.path.exists(target):
        raise ClientError(EXIT_USAGE, f"no such file: {target}")
    try:
        with open(target) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ClientError(EXIT_USAGE, f"{target}: not valid JSON ({exc})")
    if not isinstance(data, dict):
        raise ClientError(EXIT_USAGE, f"{target}: expected a JSON object")
    return {"problem": data}


def _sweep_fields(args) -> dict:
    out = {"grid": args.grid, "seed": args.seed, "box": args.box}
    if args.threads is not None:
        out["threads"] = args.threads
    return out


def _print_json(data: dict) -> None:
    print(json.dumps(data, indent=2))


def cmd_bound(client: ServiceClient, args) -> int:
    result = client.post("/bound", _problem_payload(args.file))
    _print_json(result)
    return EXIT_OK


def cmd_validate(client: ServiceClient, args) -> int:
    payload = _problem_payload(args.file)
    payload["probe"] = not args.no_probe
    result = client.post("/validate", payload)
    _print_json(result)
    return EXIT_OK


def cmd_sweep(client: ServiceClient, args) -> int:
    from .sweep import graph_from_dict, graph_to_csv, write_csv

    payload = _problem_payload(args.file) | _sweep_fields(args)
    result = client.post("/sweep", payload)
    graph = graph_from_dict(result)
    total = sum(len(e.solutions) for e in graph.entries)
    empty = sum(1 for e in graph.entries if not e.solutions)
    outside = sum(
        1 for e in graph.entries
        if any(max(abs(v) for v in s.point) > args.box for s in e.solutions))
    summary = (f"grid {graph.resolution}: {len(graph.entries)} fibers, "
               f"{total} solutions, {empty} empty fibers, "
               f"{outside} fibers with solutions outside the start box")
    if args.out:
        write_csv(graph, args.out)
        print(summary)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(graph_to_csv(graph))
        print(summary, file=sys.stderr)
    return EXIT_OK


def _parse_eps_list(spec: str) -> list[float]:
    if spec == "default":
        from .topo import DEFAULT_EPS_GRID

        return list(DEFAULT_EPS_GRID)
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ClientError(EXIT_USAGE,
                              f"--eps-sweep range must be lo:hi:step, got {spec!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ClientError(EXIT_USAGE, f"bad --eps-sweep range {spec!r}")
        out, v, k = [], lo, 0
        while v <= hi + 1e-12:
            out.append(round(v, 12))
            k += 1
            v = lo + k * step
        return out
    try:
        return [float(p) for p in spec.split(",") if p.strip()]
    except ValueError:
        raise ClientError(EXIT_USAGE, f"bad --eps-sweep list {spec!r}")


def cmd_components(client: ServiceClient, args) -> int:
    if args.input.endswith(".csv"):
        if not os.path.exists(args.input):
            raise ClientError(EXIT_USAGE, f"no such file: {args.input}")
        with open(args.input) as fh:
            payload: dict = {"csv": fh.read()}
    else:
        payload = _problem_payload(args.input) | _sweep_fields(args)
        payload["cloud"] = args.cloud
    payload["eps"] = args.eps
    if args.eps_sweep is not None:
        payload["eps_list"] = _parse_eps_list(args.eps_sweep)
    result = client.post("/components", payload)
    _print_json(result)
    return EXIT_OK


def cmd_formula(client: ServiceClient, args) -> int:
    payload = _problem_payload(args.file)
    payload["target"] = args.target
    payload["dialect"] = args.format
    result = client.post("/formula", payload)
    sys.stdout.write(result["content"])
    return EXIT_OK


def cmd_verify(client: ServiceClient, args) -> int:
    name = args.example
    if name not in ("po", "vop"):
        if not os.path.exists(name):
            raise ClientError(
                EXIT_USAGE,
                f"unknown example {name!r}: expected 'po', 'vop', or a file "
                f"matching a bundled problem")
        from .model import load_problem
        from .sweep import problem_hash
        from .model import builtin_problem

        try:
            given = problem_hash(load_problem(name))
        except Exception as exc:
            raise ClientError(EXIT_USAGE, f"{name}: {exc}")
        matched = None
        for candidate in ("po", "vop"):
            if problem_hash(builtin_problem(candidate)) == given:
                matched = candidate
                break
        if matched is None:
            raise ClientError(
                EXIT_USAGE,
                f"{name}: golden expectations exist only for the bundled "
                f"problems; this file matches neither")
        name = matched
    payload = {"name": name, "grid": args.grid, "seed": args.seed,
               "box": args.box, "eps": args.eps}
    if args.threads is not None:
        payload["threads"] = args.threads
    result = client.post("/verify", payload)
    print(result["table"])
    return EXIT_OK if result["passed"] else EXIT_VERIFY


def cmd_serve(client: ServiceClient, args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=400,
                   help="simplex grid resolution N (default 400)")
    p.add_argument("--seed", type=int, default=42,
                   help="solver RNG seed (default 42)")
    p.add_argument("--box", type=float, default=10.0,
                   help="start box half-width (default 10)")
    p.add_argument("--threads", type=int, default=None,
                   help="parallel fiber solves (default: PVVI_THREADS or 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvvi",
        description="Solve, sweep, and describe polynomial vector "
                    "variational inequalities and vector optimization "
                    "problems.")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service "
                             "(default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="exact component-count bound")
    p.add_argument("file", help="problem file or builtin name (po, vop)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("validate", help="schema and hypothesis checks")
    p.add_argument("file", help="problem file or builtin name")
    p.add_argument("--no-probe", action="store_true",
                   help="skip the numeric convexity probe")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="solve every fiber of a simplex grid")
    p.add_argument("file", help="problem file or builtin name")
    _add_sweep_flags(p)
    p.add_argument("--out", default=None,
                   help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("components",
                       help="count connected components of a solution cloud")
    p.add_argument("input",
                   help="problem file, builtin name, or a prior sweep *.csv")
    p.add_argument("--eps", type=float, default=0.5,
                   help="neighborhood radius (default 0.5)")
    p.add_argument("--eps-sweep", nargs="?", const="default", default=None,
                   metavar="LO:HI:STEP",
                   help="also scan an eps range (default 0.05:2.0:0.05)")
    p.add_argument("--cloud", choices=("weak", "proper"), default="weak",
                   help="which cloud to assemble (default weak)")
    _add_sweep_flags(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("formula", help="export a first-order formula")
    p.add_argument("file", help="problem file or builtin name")
    p.add_argument("--target", choices=("weak", "pareto", "proper", "graph"),
                   default="weak")
    p.add_argument("--format", choices=("text", "smt"), default="text")
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("verify",
                       help="golden checks for the bundled examples")
    p.add_argument("example", help="'po', 'vop', or a file matching one")
    _add_sweep_flags(p)
    p.add_argument("--eps", type=float, default=0.5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        client = None if args.command == "serve" else ServiceClient(args.server)
        return args.func(client, args)
    except ClientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
