from __future__ import annotations

import subprocess
import sys
import threading
import time
from pathlib import Path

import httpx
import pytest

from conftest import THEORY_DIR

HERE = Path(__file__).resolve().parent


def run_cli(args: list[str], cwd: Path) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "gdiagram.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=60,
    )


def test_cli_transcript_matches_golden(tmp_path):
    result = run_cli(
        [
            "--theory", str(THEORY_DIR / "johnny.thy"),
            "--transcript", str(HERE / "transcripts" / "johnny.txt"),
        ],
        cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    golden = (HERE / "goldens" / "johnny.golden").read_text()
    assert result.stdout == golden


def test_cli_flags_reach_the_session(tmp_path):
    result = run_cli(
        [
            "--theory", str(THEORY_DIR / "blocks.thy"),
            "--depth", "1",
            "--mode", "exhaustive",
            "--transcript", str(HERE / "transcripts" / "blocks.txt"),
        ],
        cwd=tmp_path,
    )
    assert result.returncode == 0, result.stderr
    assert "DEPTH: 1" in result.stdout


def test_cli_batch_policy_flag(tmp_path):
    transcript = tmp_path / "t.txt"
    transcript.write_text("eval forall u:entity. (man(u) -> walk(u))\n")
    result = run_cli(
        [
            "--theory", str(THEORY_DIR / "johnny.thy"),
            "--batch-policy", "force-true",
            "--transcript", str(transcript),
        ],
        cwd=tmp_path,
    )
    assert "AUTO-FORCED: walk(B) = true" in result.stdout
    assert "VALUE: true" in result.stdout


def test_cli_requires_theory(tmp_path):
    result = run_cli([], cwd=tmp_path)
    assert result.returncode == 2
    assert "--theory is required" in result.stderr


def test_cli_reports_build_errors(tmp_path):
    bad = tmp_path / "bad.thy"
    bad.write_text("sort s\nconst a : s\nfact q(a) = true\n")
    result = run_cli(["--theory", str(bad)], cwd=tmp_path)
    assert result.returncode == 1
    assert "ERROR:" in result.stderr


def test_cli_thin_client_against_live_server(tmp_path, free_tcp_port):
    import uvicorn

    from gdiagram.service import create_app

    config = uvicorn.Config(
        create_app(), host="127.0.0.1", port=free_tcp_port, log_level="error"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    base = f"http://127.0.0.1:{free_tcp_port}"
    while time.monotonic() < deadline:
        try:
            if httpx.get(f"{base}/health", timeout=1).status_code == 200:
                break
        except httpx.TransportError:
            time.sleep(0.05)
    else:
        pytest.fail("service did not come up")

    try:
        transcript = tmp_path / "t.txt"
        transcript.write_text(
            "eval forall u:entity. (man(u) -> walk(u))\n"
            "force walk(B) true\n"
            "eval forall u:entity. (man(u) -> walk(u))\n"
        )
        result = run_cli(
            [
                "--theory", str(THEORY_DIR / "johnny.thy"),
                "--transcript", str(transcript),
                "--connect", base,
            ],
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        assert "VALUE: unknown" in result.stdout
        assert "FORCED: walk(B) = true" in result.stdout
        assert "VALUE: true" in result.stdout
    finally:
        server.should_exit = True
        thread.join(timeout=5)
