"""Differential noninterference checking over scenario variants."""

import pytest

from taintgate.corpus import load_corpus_scenario
from taintgate.ni import apply_assignment, check_ni, observer_view
from taintgate.labels import domain
from taintgate.scenario import scenario_from_dict

ABC = {(0, "key"): "a", (1, "key"): "b", (2, "key"): "c"}
XYZ = {(0, "key"): "x", (1, "key"): "y", (2, "key"): "z"}


def test_guarded_password_scenario_passes():
    verdict = check_ni(load_corpus_scenario("password_meter"), [ABC, XYZ])
    assert verdict.passed
    assert verdict.witness is None
    # the observer sees nothing at all: every exfiltration was blocked
    assert verdict.projections == [[], []]


def test_unguarded_password_scenario_fails_with_witness():
    verdict = check_ni(load_corpus_scenario("password_meter_open"), [ABC, XYZ])
    assert not verdict.passed
    assert verdict.witness["a"][0] == "stealer.com"
    assert verdict.witness["b"][0] == "stealer.com"
    assert verdict.witness["a"][1] != verdict.witness["b"][1]


def test_verdict_stable_under_variant_reordering():
    scenario = load_corpus_scenario("password_meter")
    assert check_ni(scenario, [ABC, XYZ]).passed == check_ni(scenario, [XYZ, ABC]).passed
    open_scenario = load_corpus_scenario("password_meter_open")
    assert (check_ni(open_scenario, [ABC, XYZ]).passed
            == check_ni(open_scenario, [XYZ, ABC]).passed)


def test_three_variants():
    third = {(0, "key"): "q", (1, "key"): "r", (2, "key"): "s"}
    verdict = check_ni(load_corpus_scenario("password_meter"), [ABC, XYZ, third])
    assert verdict.passed


def test_zero_events_passes():
    scenario = scenario_from_dict({
        "hostDomain": "h.example",
        "dom": {"tag": "body", "id": "page"},
        "scripts": [],
        "events": [],
    })
    verdict = check_ni(scenario, [{}, {}])
    assert verdict.passed


def test_requires_two_variants():
    scenario = load_corpus_scenario("password_meter")
    with pytest.raises(ValueError):
        check_ni(scenario, [ABC])


def test_assignment_out_of_range_rejected():
    scenario = load_corpus_scenario("password_meter")
    with pytest.raises(ValueError):
        apply_assignment(scenario, {(99, "key"): "a"})


def test_observer_excludes_sinks_the_secret_may_reach():
    requests = [
        {"decision": "allowed", "sinkDomain": "h.example", "url": "http://h.example/save"},
        {"decision": "allowed", "sinkDomain": "api.h.example", "url": "http://api.h.example/x"},
        {"decision": "allowed", "sinkDomain": "stealer.com", "url": "http://stealer.com/x"},
        {"decision": "blocked", "sinkDomain": "stealer.com", "url": "http://stealer.com/y"},
    ]
    view = observer_view(requests, domain("h.example"), "h.example")
    # host and subdomain sinks legitimately see the secret; blocked entries
    # never left the browser
    assert view == [("stealer.com", "http://stealer.com/x")]


def test_click_detail_privacy_in_counter_scenario():
    scenario = load_corpus_scenario("click_counter")
    verdict = check_ni(scenario, [
        {(0, "x"): "10", (1, "x"): "11", (2, "x"): "12", (3, "x"): "13"},
        {(0, "x"): "50", (1, "x"): "51", (2, "x"): "52", (3, "x"): "53"},
    ])
    # coordinates are private, the count is not; projections agree because
    # the count pings do not depend on coordinates
    assert verdict.passed
