"""Bundled scenario corpus and its expectation checks.

Each scenario JSON carries an `expect` block describing the request log,
DOM labels, globals, and errors the run must produce. `run_corpus` runs
every scenario twice, once with tracking and once with the plain baseline
interpreter, and reports the informational timing ratio.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from .runner import check_expectations, run_scenario
from .scenario import Scenario, load_scenario

CORPUS_DIR = Path(__file__).resolve().parent / "corpus"

CORPUS_NAMES = (
    "password_meter",
    "password_meter_open",
    "currency_converter",
    "click_counter",
    "click_presence",
    "overlay_shield",
    "site_password_meter",
    "bank_login",
)


def corpus_path(name: str) -> Path:
    return CORPUS_DIR / f"{name}.json"


def load_corpus_scenario(name: str) -> Scenario:
    return load_scenario(corpus_path(name))


def run_corpus(mode: Optional[str] = None) -> dict:
    entries = []
    all_ok = True
    for name in CORPUS_NAMES:
        scenario = load_corpus_scenario(name)
        result = run_scenario(scenario, mode=mode)
        failures = check_expectations(result)
        plain = run_scenario(scenario, mode=mode, plain=True)
        taint_ms = result.report.timings["runMs"]
        plain_ms = plain.report.timings["runMs"]
        ratio = taint_ms / plain_ms if plain_ms > 0 else float("inf")
        ok = not failures
        all_ok = all_ok and ok
        entries.append({
            "scenario": name,
            "ok": ok,
            "failures": failures,
            "taintMs": round(taint_ms, 3),
            "plainMs": round(plain_ms, 3),
            "ratio": round(ratio, 3),
        })
    return {"ok": all_ok, "scenarios": entries}
