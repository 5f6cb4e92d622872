"""Scenario files: the JSON input describing a page, its scripts, canned
network responses, and the event trace to replay.

Validation is strict and reports the JSON path of the offending field.
Script code may be inline (``code``) or referenced (``file``, resolved
relative to the scenario file); a ``.policy`` file suffix forces
``policy: true``. Policy scripts must originate from the host domain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .dom import Element
from .errors import MalformedLabel, PolicyOriginError, SchemaError
from .labels import PUBLIC, is_valid_domain, parse_label
from .runtime import TaintedValue

MODES = ("upgrade", "nsu")


@dataclass
class ScriptSpec:
    name: str
    origin: str
    policy: bool
    code: str


@dataclass
class ResponseSpec:
    url_prefix: str
    body: str
    body_label_text: str = "public"


@dataclass
class EventSpec:
    event_type: str
    target_id: str
    data: dict[str, str] = field(default_factory=dict)


@dataclass
class Scenario:
    name: str
    host: str
    dom: dict
    scripts: list[ScriptSpec]
    responses: list[ResponseSpec]
    events: list[EventSpec]
    mode: str = "upgrade"
    secret_slots: list[tuple[int, str]] = field(default_factory=list)
    secret_label_text: str = "HOST"
    expect: Optional[dict] = None


def _require(data: dict, key: str, path: str) -> Any:
    if key not in data:
        raise SchemaError(f"{path}.{key}: missing required field")
    return data[key]


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{path}: expected a string")
    return value


def _collect_ids(dom: dict, path: str, seen: dict[str, str]) -> None:
    if not isinstance(dom, dict):
        raise SchemaError(f"{path}: expected an object")
    _as_str(_require(dom, "tag", path), f"{path}.tag")
    node_id = dom.get("id")
    if node_id is not None:
        _as_str(node_id, f"{path}.id")
        if node_id in seen:
            raise SchemaError(f"{path}.id: duplicate id {node_id!r} (also at {seen[node_id]})")
        seen[node_id] = path
    attributes = dom.get("attributes", {})
    if not isinstance(attributes, dict):
        raise SchemaError(f"{path}.attributes: expected an object")
    for name, value in attributes.items():
        _as_str(value, f"{path}.attributes.{name}")
    if "value" in dom:
        _as_str(dom["value"], f"{path}.value")
    children = dom.get("children", [])
    if not isinstance(children, list):
        raise SchemaError(f"{path}.children: expected a list")
    for i, child in enumerate(children):
        _collect_ids(child, f"{path}.children[{i}]", seen)


def _parse_script(raw: Any, path: str, host: str, base_dir: Optional[Path]) -> ScriptSpec:
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: expected an object")
    name = _as_str(_require(raw, "name", path), f"{path}.name")
    origin = _as_str(_require(raw, "origin", path), f"{path}.origin").lower()
    if not is_valid_domain(origin):
        raise SchemaError(f"{path}.origin: not a valid domain: {origin!r}")
    policy = raw.get("policy", False)
    if not isinstance(policy, bool):
        raise SchemaError(f"{path}.policy: expected a boolean")
    if "code" in raw and "file" in raw:
        raise SchemaError(f"{path}: give either code or file, not both")
    if "code" in raw:
        code = _as_str(raw["code"], f"{path}.code")
    elif "file" in raw:
        rel = _as_str(raw["file"], f"{path}.file")
        if rel.endswith(".policy"):
            policy = True
        if base_dir is None:
            raise SchemaError(f"{path}.file: file references need a scenario directory")
        target = base_dir / rel
        if not target.is_file():
            raise SchemaError(f"{path}.file: no such file: {rel}")
        code = target.read_text(encoding="utf-8")
    else:
        raise SchemaError(f"{path}: missing code or file")
    if policy and origin != host:
        raise PolicyOriginError(
            f"{path}: policy script {name!r} has origin {origin!r}, not the host {host!r}")
    return ScriptSpec(name=name, origin=origin, policy=policy, code=code)


def scenario_from_dict(data: dict, name: str = "<inline>",
                       base_dir: Optional[Path] = None) -> Scenario:
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    host = _as_str(_require(data, "hostDomain", "$"), "$.hostDomain").lower()
    if not is_valid_domain(host):
        raise SchemaError(f"$.hostDomain: not a valid domain: {host!r}")

    dom = _require(data, "dom", "$")
    ids: dict[str, str] = {}
    _collect_ids(dom, "$.dom", ids)

    raw_scripts = data.get("scripts", [])
    if not isinstance(raw_scripts, list):
        raise SchemaError("$.scripts: expected a list")
    scripts = [_parse_script(raw, f"$.scripts[{i}]", host, base_dir)
               for i, raw in enumerate(raw_scripts)]

    raw_responses = data.get("responses", [])
    if not isinstance(raw_responses, list):
        raise SchemaError("$.responses: expected a list")
    responses = []
    for i, raw in enumerate(raw_responses):
        path = f"$.responses[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}: expected an object")
        prefix = _as_str(_require(raw, "urlPrefix", path), f"{path}.urlPrefix")
        body = _as_str(_require(raw, "body", path), f"{path}.body")
        label_txt = _as_str(raw.get("bodyLabel", "public"), f"{path}.bodyLabel")
        try:
            parse_label(label_txt, host)
        except MalformedLabel as err:
            raise SchemaError(f"{path}.bodyLabel: {err.message}") from err
        responses.append(ResponseSpec(prefix, body, label_txt))

    raw_events = data.get("events", [])
    if not isinstance(raw_events, list):
        raise SchemaError("$.events: expected a list")
    events = []
    for i, raw in enumerate(raw_events):
        path = f"$.events[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}: expected an object")
        etype = _as_str(_require(raw, "type", path), f"{path}.type")
        target = _as_str(_require(raw, "targetId", path), f"{path}.targetId")
        if target not in ids:
            raise SchemaError(f"{path}.targetId: no element with id {target!r}")
        raw_data = raw.get("data", {})
        if not isinstance(raw_data, dict):
            raise SchemaError(f"{path}.data: expected an object")
        payload = {k: _as_str(v, f"{path}.data.{k}") for k, v in raw_data.items()}
        events.append(EventSpec(etype, target, payload))

    mode = data.get("mode", "upgrade")
    if mode not in MODES:
        raise SchemaError(f"$.mode: expected one of {MODES}, got {mode!r}")

    raw_slots = data.get("secretSlots", [])
    if not isinstance(raw_slots, list):
        raise SchemaError("$.secretSlots: expected a list")
    slots: list[tuple[int, str]] = []
    for i, raw in enumerate(raw_slots):
        path = f"$.secretSlots[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}: expected an object")
        index = _require(raw, "event", path)
        if not isinstance(index, int) or not 0 <= index < len(events):
            raise SchemaError(f"{path}.event: no event at index {index!r}")
        slots.append((index, _as_str(_require(raw, "field", path), f"{path}.field")))

    secret_label_text = data.get("secretLabel", "HOST")
    try:
        parse_label(_as_str(secret_label_text, "$.secretLabel"), host)
    except MalformedLabel as err:
        raise SchemaError(f"$.secretLabel: {err.message}") from err

    expect = data.get("expect")
    if expect is not None and not isinstance(expect, dict):
        raise SchemaError("$.expect: expected an object")

    return Scenario(name=name, host=host, dom=dom, scripts=scripts,
                    responses=responses, events=events, mode=mode,
                    secret_slots=slots, secret_label_text=secret_label_text,
                    expect=expect)


def load_scenario(path: str | Path) -> Scenario:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as err:
        raise SchemaError(f"$: cannot read scenario file: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"$: invalid JSON: {err}") from err
    return scenario_from_dict(data, name=file_path.stem, base_dir=file_path.parent)


def build_dom(spec: dict) -> Element:
    element = Element(spec["tag"], spec.get("id"))
    for name, value in spec.get("attributes", {}).items():
        element.attributes[name] = TaintedValue(value, PUBLIC)
    element.value = TaintedValue(spec.get("value", ""), PUBLIC)
    for child in spec.get("children", []):
        element.append(build_dom(child))
    return element
