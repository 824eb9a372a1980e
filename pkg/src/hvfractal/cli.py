"""Thin CLI client for the pipeline service.

Subcommands verify | solve | attractor | analyze | all post the parsed
config to the corresponding service endpoint; by default an in-process
application instance is used, or point --server at a running instance
(`hvfractal serve`). Exit status is nonzero on any pipeline failure, with a
machine-readable error category in the JSON printed to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import load_config
from .errors import ConfigError

STAGE_ENDPOINTS = {
    "verify": "/verify",
    "solve": "/solve",
    "attractor": "/attractor",
    "analyze": "/analyze",
    "all": "/run",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hvfractal",
        description="hidden-variable fractal interpolation pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in STAGE_ENDPOINTS:
        p = sub.add_parser(name, help=f"run the {name} stage")
        p.add_argument("--config", required=True, help="path to YAML run config")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--seed", type=int, default=None, help="override all seeds")
        p.add_argument(
            "--server",
            default=None,
            help="base URL of a running service (default: in-process)",
        )
    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(json.dumps({"category": exc.category, "message": str(exc)}), file=sys.stderr)
        return 2
    payload = {
        "config": cfg.model_dump(),
        "out_dir": args.out,
        "seed": args.seed,
    }
    with _client(args.server) as client:
        resp = client.post(STAGE_ENDPOINTS[args.command], json=payload)
    body = resp.json()
    if resp.status_code != 200:
        print(json.dumps(body, indent=2), file=sys.stderr)
        return 1
    print(json.dumps(body, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
