"""Command line front end.

    taintgate run <scenario.json> [--mode upgrade|nsu] [--out report.json] [--trace]
    taintgate check-ni <scenario.json> --vary <event>.<field>=<v1>,<v2>[,...] [--mode ...]
    taintgate corpus [--mode ...]

Exit codes: 0 completed and expectations met, 1 noninterference failure or
corpus expectation mismatch, 2 usage or scenario schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .corpus import run_corpus
from .errors import EngineError
from .ni import Assignment, check_ni
from .runner import run_scenario
from .scenario import load_scenario

MODES = ("upgrade", "nsu")


def _parse_vary(specs: list[str]) -> list[Assignment]:
    """Turn repeated --vary flags into per-variant slot assignments."""
    slots: list[tuple[int, str]] = []
    columns: list[list[str]] = []
    for spec in specs:
        if "=" not in spec:
            raise ValueError(f"--vary needs <event>.<field>=<v1>,<v2>: {spec!r}")
        slot_text, _, values_text = spec.partition("=")
        if "." not in slot_text:
            raise ValueError(f"--vary slot must be <event>.<field>: {slot_text!r}")
        index_text, _, field = slot_text.partition(".")
        try:
            index = int(index_text)
        except ValueError as err:
            raise ValueError(f"--vary event index must be an integer: {index_text!r}") from err
        values = values_text.split(",")
        if len(values) < 2:
            raise ValueError(f"--vary needs at least two values: {spec!r}")
        slots.append((index, field))
        columns.append(values)
    counts = {len(col) for col in columns}
    if len(counts) != 1:
        raise ValueError("all --vary flags must list the same number of values")
    variant_count = counts.pop()
    variants: list[Assignment] = []
    for v in range(variant_count):
        variants.append({slot: columns[i][v] for i, slot in enumerate(slots)})
    return variants


def _trace(report) -> None:
    for entry in report.handler_log:
        print(f"[handler] event={entry['eventSeq']} {entry['eventType']} "
              f"{entry['handler']} privileged={entry['privileged']} "
              f"pc={entry['pcAtEntry']}", file=sys.stderr)
    for entry in report.requests:
        print(f"[request] {entry['decision']} {entry['sinkDomain']} {entry['url']}",
              file=sys.stderr)
    for entry in report.errors:
        print(f"[error] {entry['kind']} in {entry['where']}: {entry['message']}",
              file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="taintgate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run one scenario and emit its report")
    run_parser.add_argument("scenario")
    run_parser.add_argument("--mode", choices=MODES, default=None)
    run_parser.add_argument("--out", default=None)
    run_parser.add_argument("--trace", action="store_true")

    ni_parser = sub.add_parser("check-ni", help="differential noninterference check")
    ni_parser.add_argument("scenario")
    ni_parser.add_argument("--vary", action="append", required=True, metavar="SLOT=V1,V2")
    ni_parser.add_argument("--mode", choices=MODES, default=None)

    corpus_parser = sub.add_parser("corpus", help="run the bundled corpus")
    corpus_parser.add_argument("--mode", choices=MODES, default=None)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "run":
        try:
            scenario = load_scenario(args.scenario)
        except EngineError as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        result = run_scenario(scenario, mode=args.mode)
        text = result.report.to_json()
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(text + "\n")
        else:
            print(text)
        if args.trace:
            _trace(result.report)
        return 0

    if args.command == "check-ni":
        try:
            scenario = load_scenario(args.scenario)
            variants = _parse_vary(args.vary)
        except (EngineError, ValueError) as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        verdict = check_ni(scenario, variants, mode=args.mode)
        print(json.dumps({
            "passed": verdict.passed,
            "witness": verdict.witness,
            "observed": [[list(pair) for pair in view] for view in verdict.projections],
        }, indent=2))
        return 0 if verdict.passed else 1

    summary = run_corpus(mode=args.mode)
    print(json.dumps(summary, indent=2))
    return 0 if summary["ok"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
