"""Scenario execution: bootstrap the page, replay the event trace, emit a
report.

Bootstrap order is enforced, not assumed: policy scripts always run
before non-policy scripts, preserving relative order within each class.
After the script phase the load window closes (privileged handler
registration starts failing), queued responses from load-time fetches are
drained, and then each trace event is dispatched followed by a drain of
any responses its handlers requested.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .dom import Event
from .engine import Engine
from .labels import PUBLIC, label_text, parse_label
from .network import CannedResponse
from .report import Report, build_report
from .runtime import TaintedValue, to_display
from .scenario import Scenario, build_dom


@dataclass
class RunResult:
    scenario: Scenario
    report: Report
    engine: Engine


def run_scenario(scenario: Scenario, mode: Optional[str] = None, plain: bool = False,
                 force_block: bool = False) -> RunResult:
    started = time.perf_counter()
    engine = Engine(scenario.host, mode=mode or scenario.mode, plain=plain)
    engine.gate.force_block = force_block
    for spec in scenario.responses:
        engine.gate.responses.append(CannedResponse(
            spec.url_prefix, spec.body, parse_label(spec.body_label_text, scenario.host)))
    engine.attach_document(build_dom(scenario.dom))

    ordered = ([s for s in scenario.scripts if s.policy]
               + [s for s in scenario.scripts if not s.policy])
    for script in ordered:
        engine.run_script(script.name, script.code, script.origin, script.policy)
    engine.finish_load()
    engine.drain_responses()

    for spec in scenario.events:
        target = engine.document.get(spec.target_id)
        event = Event(
            event_type=spec.event_type,
            target=target,
            data={k: TaintedValue(v, PUBLIC) for k, v in spec.data.items()},
        )
        engine.dispatch(event)
        engine.drain_responses()

    elapsed_ms = (time.perf_counter() - started) * 1000.0
    report = build_report(engine, timings={"runMs": elapsed_ms})
    return RunResult(scenario=scenario, report=report, engine=engine)


def _global_snapshot(engine: Engine, name: str):
    slot = engine.globals.lookup(name)
    if slot is None:
        return None
    return slot.value


def check_expectations(result: RunResult) -> list[str]:
    """Compare a run against the scenario's `expect` block; returns a list
    of human-readable mismatches (empty means all expectations met)."""
    scenario = result.scenario
    expect = scenario.expect or {}
    failures: list[str] = []

    if "requests" in expect:
        wanted = expect["requests"]
        got = result.report.requests
        if len(wanted) != len(got):
            failures.append(f"requests: expected {len(wanted)} entries, got {len(got)}")
        for i, (w, g) in enumerate(zip(wanted, got)):
            if "sink" in w and g["sinkDomain"] != w["sink"]:
                failures.append(f"requests[{i}]: sink {g['sinkDomain']!r} != {w['sink']!r}")
            if "decision" in w and g["decision"] != w["decision"]:
                failures.append(f"requests[{i}]: decision {g['decision']!r} != {w['decision']!r}")
            if "url" in w and g["url"] != w["url"]:
                failures.append(f"requests[{i}]: url {g['url']!r} != {w['url']!r}")
            if "urlPrefix" in w and not g["url"].startswith(w["urlPrefix"]):
                failures.append(
                    f"requests[{i}]: url {g['url']!r} lacks prefix {w['urlPrefix']!r}")

    if "dom" in expect:
        dump = {entry["id"]: entry for entry in result.report.dom_dump if entry["id"]}
        for element_id, checks in expect["dom"].items():
            entry = dump.get(element_id)
            if entry is None:
                failures.append(f"dom.{element_id}: no such element in dump")
                continue
            if "value" in checks and entry["value"] != checks["value"]:
                failures.append(
                    f"dom.{element_id}: value {entry['value']!r} != {checks['value']!r}")
            for key in ("valueLabel", "elementLabel"):
                if key in checks:
                    wanted_label = label_text(parse_label(checks[key], scenario.host))
                    if entry[key] != wanted_label:
                        failures.append(
                            f"dom.{element_id}: {key} {entry[key]!r} != {wanted_label!r}")
            if "protected" in checks and entry["protected"] != checks["protected"]:
                failures.append(
                    f"dom.{element_id}: protected {entry['protected']} != {checks['protected']}")

    if "globals" in expect:
        for name, checks in expect["globals"].items():
            tv = _global_snapshot(result.engine, name)
            if tv is None:
                failures.append(f"globals.{name}: not defined")
                continue
            if "value" in checks:
                wanted = checks["value"]
                got_payload = tv.payload
                matches = (
                    got_payload == float(wanted)
                    if isinstance(wanted, (int, float)) and not isinstance(wanted, bool)
                    and isinstance(got_payload, float)
                    else got_payload == wanted
                )
                if not matches:
                    failures.append(
                        f"globals.{name}: value {to_display(got_payload)!r} != {wanted!r}")
            if "label" in checks:
                wanted_label = label_text(parse_label(checks["label"], scenario.host))
                if label_text(tv.label) != wanted_label:
                    failures.append(
                        f"globals.{name}: label {label_text(tv.label)!r} != {wanted_label!r}")

    if "errors" in expect:
        got_kinds = [err["kind"] for err in result.report.errors]
        if got_kinds != expect["errors"]:
            failures.append(f"errors: kinds {got_kinds!r} != {expect['errors']!r}")

    return failures
