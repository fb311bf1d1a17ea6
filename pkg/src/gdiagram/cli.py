"""Command-line front end.

Three ways to run:

    gdiagram --theory theories/johnny.thy            # interactive REPL
    gdiagram --theory theories/johnny.thy --transcript cmds.txt
    gdiagram --serve 127.0.0.1:8787                  # HTTP service

With --connect URL the CLI becomes a thin client of a running service,
sending each command over the wire; otherwise commands run in-process
through the same session machinery the service uses.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .errors import EngineError
from .session import Session, SessionConfig


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gdiagram",
        description="Build finite models from logical theories and expand them interactively.",
    )
    parser.add_argument("--theory", metavar="FILE", help="theory file to load")
    parser.add_argument(
        "--transcript", metavar="FILE", help="run commands from a file instead of stdin"
    )
    parser.add_argument("--depth", type=int, default=2, help="universe depth bound (default 2)")
    parser.add_argument(
        "--mode",
        choices=["paper", "exhaustive"],
        default="paper",
        help="existential witness mode",
    )
    parser.add_argument(
        "--batch-policy",
        choices=["leave", "force-true", "force-false"],
        default="leave",
        help="what to do when an evaluation comes out unknown",
    )
    parser.add_argument("--serve", metavar="ADDR", help="serve the HTTP interface on host:port")
    parser.add_argument(
        "--connect", metavar="URL", help="drive a running service instead of evaluating locally"
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_arg_parser().parse_args(argv)

    if args.serve:
        return _serve(args.serve)

    if not args.theory:
        print("error: --theory is required unless --serve is given", file=sys.stderr)
        return 2

    config = SessionConfig(depth=args.depth, mode=args.mode, batch_policy=args.batch_policy)

    if args.connect:
        runner = _RemoteRunner(args.connect, Path(args.theory), config)
    else:
        try:
            runner = _LocalRunner(Path(args.theory), config)
        except EngineError as err:
            print(f"ERROR: {err}", file=sys.stderr)
            return 1

    print(runner.initial_report())

    if args.transcript:
        lines = Path(args.transcript).read_text().splitlines()
        for line in lines:
            _run_line(runner, line, echo=True)
        return 0

    while True:
        try:
            line = input("> ")
        except EOFError:
            return 0
        if line.strip() in ("quit", "exit"):
            return 0
        _run_line(runner, line, echo=False)
    return 0


def _run_line(runner, line: str, echo: bool) -> None:
    line = line.strip()
    if not line or line.startswith("#"):
        return
    if echo:
        print(f"> {line}")
    try:
        output = runner.run(line)
    except EngineError as err:
        print(f"ERROR: {err}")
        return
    if output:
        print(output)


class _LocalRunner:
    def __init__(self, theory_path: Path, config: SessionConfig) -> None:
        self.session = Session(theory_path.read_text(), config, name=theory_path.stem)

    def initial_report(self) -> str:
        return self.session.run("model").output

    def run(self, line: str) -> str:
        return self.session.run(line).output


class _RemoteRunner:
    def __init__(self, base_url: str, theory_path: Path, config: SessionConfig) -> None:
        import httpx

        self.client = httpx.Client(base_url=base_url.rstrip("/"), timeout=30.0)
        response = self.client.post(
            "/sessions",
            json={
                "theory": theory_path.read_text(),
                "name": theory_path.stem,
                "depth": config.depth,
                "mode": config.mode,
                "batchPolicy": config.batch_policy,
            },
        )
        self._check(response)
        body = response.json()
        self.session_id = body["session_id"]
        self._report = body["report"]

    def initial_report(self) -> str:
        return self._report

    def run(self, line: str) -> str:
        response = self.client.post(
            f"/sessions/{self.session_id}/command", json={"line": line}
        )
        self._check(response)
        return response.json()["output"]

    @staticmethod
    def _check(response) -> None:
        if response.status_code >= 400:
            detail = response.json().get("detail", response.text)
            raise EngineError(detail)


def _serve(addr: str) -> int:
    import uvicorn

    from .service import create_app

    host, _, port_text = addr.rpartition(":")
    host = host or "127.0.0.1"
    port = int(port_text) if port_text else 8787
    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
