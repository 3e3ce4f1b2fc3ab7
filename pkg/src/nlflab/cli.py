"""Command-line client for the service.

Every subcommand except ``serve`` talks to the HTTP API: against a remote
base URL when ``--server`` is given, otherwise against an in-process
instance of the app over an ASGI transport (no socket, same code path).
File handling is strictly client-side: ``run`` loads and validates the TOML
config here, posts it, and writes the returned report next to the config
(or to ``--out``).

Exit codes: 0 success, 1 experiment or verification reported failures,
2 request rejected (bad config, violated hypothesis, transport error).
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path

import httpx

from .config import load_config
from .experiments import Report, ReportRow, write_report


class ApiClient:
    """Minimal JSON request helper, in-process by default."""

    def __init__(self, server: str | None = None):
        self.server = server

    def request(self, method: str, path: str, *, params=None, body=None) -> tuple[int, dict]:
        if self.server is not None:
            with httpx.Client(base_url=self.server, timeout=600.0) as client:
                resp = client.request(method, path, params=params, json=body)
                return resp.status_code, resp.json()

        from .service import create_app

        async def go() -> tuple[int, dict]:
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://nlflab.internal", timeout=600.0
            ) as client:
                resp = await client.request(method, path, params=params, json=body)
                return resp.status_code, resp.json()

        return asyncio.run(go())


def _fail(payload: dict) -> int:
    detail = payload.get("detail", payload)
    print(f"error: {detail}", file=sys.stderr)
    return 2


def _cmd_run(client: ApiClient, args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if overrides:
        cfg = type(cfg).model_validate({**cfg.model_dump(), **overrides})
    status, payload = client.request("POST", "/experiments/run", body=cfg.model_dump(mode="json"))
    if status != 200:
        return _fail(payload)
    out_prefix = args.out or cfg.out or str(Path(args.config).with_suffix("")) + "_results"
    rows = tuple(
        ReportRow(r["lambda"], r["value"], r["error"], r["reference"], r["bound"], r["pass"])
        for r in payload["rows"]
    )
    report = Report(payload["kind"], rows, payload["summary"])
    csv_path, json_path = write_report(report, out_prefix)
    n_fail = sum(r.status == "fail" for r in rows)
    print(f"{payload['kind']}: {len(rows)} rows, {n_fail} failures")
    print(f"wrote {csv_path} and {json_path}")
    return 0 if payload["ok"] else 1


def _cmd_constants(client: ApiClient, args: argparse.Namespace) -> int:
    status, payload = client.request(
        "GET", "/constants", params={"gamma": args.gamma, "p": args.p, "dim": args.dim}
    )
    if status != 200:
        return _fail(payload)
    for key in ("gamma", "p", "dim", "c_np", "c_gamma", "sphere_area", "threshold_exponent"):
        print(f"{key} = {payload[key]!r}")
    return 0


def _cmd_verify(client: ApiClient, args: argparse.Namespace) -> int:
    status, payload = client.request("POST", "/verify", body={"seed": args.seed})
    if status != 200:
        return _fail(payload)
    for check in payload["checks"]:
        print(f"{'PASS' if check['ok'] else 'FAIL'} {check['name']:<20} {check['detail']}")
    print("verification passed" if payload["passed"] else "verification FAILED")
    return 0 if payload["passed"] else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlflab",
        description="Threshold-exceedance energy laboratory (thin client over the HTTP API).",
    )
    parser.add_argument(
        "--server",
        default=None,
        metavar="URL",
        help="base URL of a running service; default runs the app in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment described by a TOML config")
    run_p.add_argument("config", type=Path, help="path to the config file")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.add_argument("--threads", type=int, default=None, help="override the thread count")
    run_p.add_argument(
        "--out", default=None, metavar="PREFIX",
        help="output prefix for PREFIX.csv and PREFIX.json "
        "(default: config path with _results appended)",
    )

    const_p = sub.add_parser("constants", help="print the slicing and dyadic constants")
    const_p.add_argument("--gamma", type=float, required=True)
    const_p.add_argument("--p", type=float, required=True)
    const_p.add_argument("--dim", type=int, default=1)

    verify_p = sub.add_parser("verify", help="run the built-in verification corpus")
    verify_p.add_argument("--seed", type=int, default=0)

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    client = ApiClient(args.server)
    try:
        if args.command == "run":
            return _cmd_run(client, args)
        if args.command == "constants":
            return _cmd_constants(client, args)
        return _cmd_verify(client, args)
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
