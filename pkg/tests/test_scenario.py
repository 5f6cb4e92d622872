"""Scenario file validation and report serialization."""

import json

import pytest

from taintgate.corpus import corpus_path, load_corpus_scenario
from taintgate.errors import PolicyOriginError, SchemaError
from taintgate.runner import run_scenario
from taintgate.scenario import load_scenario, scenario_from_dict


def minimal(**overrides):
    data = {
        "hostDomain": "h.example",
        "dom": {"tag": "body", "id": "page"},
        "scripts": [],
        "events": [],
    }
    data.update(overrides)
    return data


def test_corpus_file_loads_with_expected_shape():
    scenario = load_corpus_scenario("password_meter")
    assert scenario.host == "shop.example"
    assert [s.policy for s in scenario.scripts] == [True, False]
    assert len(scenario.events) == 3
    assert scenario.mode == "upgrade"
    assert scenario.secret_slots == [(0, "key"), (1, "key"), (2, "key")]


def test_policy_suffix_forces_policy_flag():
    scenario = load_corpus_scenario("password_meter")
    guard = scenario.scripts[0]
    assert guard.name.endswith(".policy")
    assert guard.policy is True


def test_policy_script_with_foreign_origin_rejected():
    data = minimal(scripts=[
        {"name": "evil.policy", "origin": "stealer.com", "policy": True,
         "code": 'document.getElementById("page").setLabel("public");'}
    ])
    with pytest.raises(PolicyOriginError):
        scenario_from_dict(data)


def test_missing_target_id_rejected():
    data = minimal(events=[{"type": "click", "targetId": "ghost", "data": {}}])
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(data)
    assert "$.events[0].targetId" in str(info.value)


def test_duplicate_ids_rejected():
    data = minimal(dom={"tag": "body", "id": "page", "children": [
        {"tag": "div", "id": "x"}, {"tag": "div", "id": "x"}]})
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(data)
    assert "duplicate id" in str(info.value)


def test_bad_mode_rejected():
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(minimal(mode="lenient"))
    assert "$.mode" in str(info.value)


def test_script_needs_code_or_file():
    with pytest.raises(SchemaError):
        scenario_from_dict(minimal(scripts=[{"name": "s", "origin": "h.example"}]))
    with pytest.raises(SchemaError):
        scenario_from_dict(minimal(scripts=[
            {"name": "s", "origin": "h.example", "code": "x = 1;", "file": "s.js"}]))


def test_bad_body_label_rejected():
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(minimal(responses=[
            {"urlPrefix": "http://a/", "body": "x", "bodyLabel": "no such label!"}]))
    assert "$.responses[0].bodyLabel" in str(info.value)


def test_secret_slot_bounds_checked():
    with pytest.raises(SchemaError):
        scenario_from_dict(minimal(secretSlots=[{"event": 0, "field": "key"}]))


def test_unreadable_file_is_schema_error():
    with pytest.raises(SchemaError):
        load_scenario("/nonexistent/missing.json")


def test_invalid_json_is_schema_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_scenario(bad)


def test_inline_policy_with_host_origin_is_fine():
    scenario = scenario_from_dict(minimal(scripts=[
        {"name": "p", "origin": "h.example", "policy": True, "code": ""}]))
    assert scenario.scripts[0].policy is True


def test_report_shape_and_labels():
    result = run_scenario(load_corpus_scenario("password_meter"))
    data = result.report.to_dict()
    assert sorted(data.keys()) == ["domDump", "errors", "handlerLog", "requests", "timings"]
    pwd = next(e for e in data["domDump"] if e["id"] == "pwd")
    assert pwd["value"] == "abc"
    assert pwd["valueLabel"] == "shop.example"
    assert pwd["elementLabel"] == "shop.example"
    assert data["requests"][0]["effectiveLabel"] == "shop.example"
    assert data["requests"][0]["pcAtSend"] == "public"
    json.dumps(data)  # serializable


def test_deterministic_json_excludes_timings():
    result = run_scenario(load_corpus_scenario("password_meter"))
    text = result.report.deterministic_json()
    assert "timings" not in json.loads(text)
    assert "runMs" in result.report.timings


def test_scenario_file_round_trip(tmp_path):
    # inline-code variant of a bundled scenario behaves identically; the
    # policy flag must be explicit once the .policy filename is gone
    source = json.loads(corpus_path("click_counter").read_text(encoding="utf-8"))
    raw_dir = corpus_path("click_counter").parent
    for script in source["scripts"]:
        file_name = script.pop("file")
        script["policy"] = file_name.endswith(".policy")
        script["code"] = (raw_dir / file_name).read_text(encoding="utf-8")
    target = tmp_path / "inline.json"
    target.write_text(json.dumps(source), encoding="utf-8")
    scenario = load_scenario(target)
    assert scenario.scripts[0].policy is True
    result = run_scenario(scenario)
    assert [r["decision"] for r in result.report.requests][:2] == ["allowed", "blocked"]
