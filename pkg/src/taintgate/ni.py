"""Differential noninterference check.

Each variant assigns different values to the scenario's secret event-data
slots. Every variant runs in a fresh engine; its report is projected onto
the public observer's view: the (sink, url) sequence of ALLOWED requests
to sinks that the secret's intended label does not permit. If the secret
is properly confined, those projections cannot differ between variants.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Optional

from .labels import flow_permitted, parse_label
from .runner import run_scenario
from .scenario import Scenario

Assignment = dict[tuple[int, str], str]


@dataclass
class NiVerdict:
    passed: bool
    witness: Optional[dict]
    projections: list[list[tuple[str, str]]]


def apply_assignment(scenario: Scenario, assignment: Assignment) -> Scenario:
    variant = copy.deepcopy(scenario)
    for (index, field), value in assignment.items():
        if not 0 <= index < len(variant.events):
            raise ValueError(f"no event at index {index}")
        variant.events[index].data[field] = value
    return variant


def observer_view(report_requests: list[dict], secret_label, host: str) -> list[tuple[str, str]]:
    view = []
    for entry in report_requests:
        if entry["decision"] != "allowed":
            continue
        sink = entry["sinkDomain"]
        if flow_permitted(secret_label, sink):
            continue  # a sink the secret may legitimately reach sees it by design
        view.append((sink, entry["url"]))
    return view


def check_ni(scenario: Scenario, variants: list[Assignment],
             mode: Optional[str] = None) -> NiVerdict:
    if len(variants) < 2:
        raise ValueError("need at least two variants")
    secret_label = parse_label(scenario.secret_label_text, scenario.host)
    projections: list[list[tuple[str, str]]] = []
    for assignment in variants:
        result = run_scenario(apply_assignment(scenario, assignment), mode=mode)
        projections.append(observer_view(result.report.requests, secret_label,
                                         scenario.host))
    base = projections[0]
    for i, other in enumerate(projections[1:], start=1):
        if other == base:
            continue
        length = max(len(base), len(other))
        for k in range(length):
            a = base[k] if k < len(base) else None
            b = other[k] if k < len(other) else None
            if a != b:
                witness = {
                    "variantA": 0,
                    "variantB": i,
                    "index": k,
                    "a": list(a) if a else None,
                    "b": list(b) if b else None,
                }
                return NiVerdict(passed=False, witness=witness, projections=projections)
    return NiVerdict(passed=True, witness=None, projections=projections)
