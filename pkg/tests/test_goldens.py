"""Determinism goldens: each corpus transcript must render byte-identically,
both against the frozen golden file and across repeated runs.

Regenerate with GOLDEN_REGEN=1 after an intentional format change.
"""
from __future__ import annotations

import os
from pathlib import Path

import pytest

from gdiagram import SessionConfig

from conftest import run_transcript

HERE = Path(__file__).resolve().parent
TRANSCRIPT_DIR = HERE / "transcripts"
GOLDEN_DIR = HERE / "goldens"

CASES = [
    ("johnny", "johnny", {}),
    ("johnny_force_false", "johnny", {}),
    ("blocks", "blocks", {"depth": 1}),
    ("talkers", "talkers", {}),
    ("prices_paper", "prices", {}),
    ("prices_exhaustive", "prices", {"mode": "exhaustive"}),
]


def transcript_lines(case: str) -> list[str]:
    return (TRANSCRIPT_DIR / f"{case}.txt").read_text().splitlines()


@pytest.mark.parametrize("case,theory,cfg", CASES)
def test_transcript_matches_golden(case, theory, cfg, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    output = run_transcript(theory, transcript_lines(case), SessionConfig(**cfg))
    golden = GOLDEN_DIR / f"{case}.golden"
    if os.environ.get("GOLDEN_REGEN"):
        golden.write_text(output)
    assert output == golden.read_text()


@pytest.mark.parametrize("case,theory,cfg", CASES)
def test_transcript_is_deterministic_across_runs(case, theory, cfg, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    first = run_transcript(theory, transcript_lines(case), SessionConfig(**cfg))
    second = run_transcript(theory, transcript_lines(case), SessionConfig(**cfg))
    assert first == second
