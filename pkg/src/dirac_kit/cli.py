"""dirac-kit command line client.

The CLI is a thin client of the verification service: by default it talks to
an in-process ASGI instance of the FastAPI app over httpx, so no server needs
to be running; --server switches to a remote instance.  Exit codes: 0 all
checks pass, 1 a check failed, 2 parse/usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

from .scenarios import ScenarioError, load_scenario, report_json, report_text

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process ASGI client: the CLI stays a thin client of the service
    # without requiring a running server
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient
    from .service.app import app
    return TestClient(app)


def _settings_args(args) -> dict:
    out = {}
    if args.seed is not None:
        out["seed"] = args.seed
    elif os.environ.get("DIRAC_KIT_SEED"):
        try:
            out["seed"] = int(os.environ["DIRAC_KIT_SEED"], 0)
        except ValueError:
            raise ScenarioError("DIRAC_KIT_SEED is not an integer")
    if args.samples is not None:
        out["samples"] = args.samples
    if args.tol is not None:
        out["tol"] = args.tol
    if args.fd_step is not None:
        out["fd_step"] = args.fd_step
    return out


def _emit(report: dict, fmt: str) -> int:
    if fmt == "json":
        print(report_json(report))
    else:
        print(report_text(report))
    return EXIT_PASS if report.get("pass") else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="dirac-kit",
        description="verification suites for Dirac structures, Courant "
                    "algebroids and multiplicative moment maps")
    parser.add_argument("--server", help="URL of a running service "
                                         "(default: in-process)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--fd-step", dest="fd_step", type=float, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a scenario file")
    p_verify.add_argument("scenario", help="path to a scenario JSON file")

    p_catalog = sub.add_parser("catalog", help="run a prebuilt suite")
    p_catalog.add_argument("name", nargs="?",
                           help="suite name; omit to list the registry")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8471)

    args = parser.parse_args(argv)

    try:
        settings = _settings_args(args)
    except ScenarioError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE

    if args.command == "serve":
        import uvicorn
        from .service.app import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_PASS

    try:
        with _client(args.server) as client:
            if args.command == "catalog":
                if not args.name:
                    resp = client.get("/catalog")
                    resp.raise_for_status()
                    for name in resp.json()["names"]:
                        print(name)
                    return EXIT_PASS
                resp = client.post("/catalog/%s" % args.name,
                                   json={"settings": settings})
                if resp.status_code == 404:
                    print("error: %s" % resp.json().get("detail"), file=sys.stderr)
                    return EXIT_USAGE
                resp.raise_for_status()
                return _emit(resp.json(), args.format)

            # verify
            try:
                doc = load_scenario(args.scenario)
            except ScenarioError as exc:
                print("error: %s" % exc, file=sys.stderr)
                return EXIT_USAGE
            resp = client.post("/verify", json={"scenario": doc,
                                                "settings": settings})
            if resp.status_code in (400, 422):
                detail = resp.json().get("detail")
                print("error: invalid scenario: %s" % detail, file=sys.stderr)
                return EXIT_USAGE
            resp.raise_for_status()
            return _emit(resp.json(), args.format)
    except httpx.HTTPError as exc:
        print("error: service request failed: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
