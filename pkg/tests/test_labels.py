"""Lattice laws by exhaustive enumeration, sink permission properties, and
textual label parsing."""

import itertools

import pytest

from taintgate.errors import MalformedLabel
from taintgate.labels import (LOCAL, PUBLIC, Label, domain, flow_permitted,
                              join, label_text, leq, parse_label)

UNIVERSE = [PUBLIC, domain("a"), domain("b"), LOCAL]
SINKS = ["a", "sub.a", "b", "c"]


def test_order_examples():
    assert leq(PUBLIC, domain("a.com"))
    assert not leq(domain("a.com"), domain("b.com"))
    assert leq(domain("a.com"), LOCAL)
    assert not leq(LOCAL, domain("a.com"))
    assert not leq(LOCAL, PUBLIC)


def test_join_examples():
    assert join(PUBLIC, domain("a.com")) == domain("a.com")
    assert join(domain("a.com"), domain("a.com")) == domain("a.com")
    assert join(domain("a.com"), domain("b.com")) == LOCAL


def test_leq_is_partial_order():
    for a in UNIVERSE:
        assert leq(a, a)
    for a, b in itertools.product(UNIVERSE, repeat=2):
        if leq(a, b) and leq(b, a):
            assert a == b
    for a, b, c in itertools.product(UNIVERSE, repeat=3):
        if leq(a, b) and leq(b, c):
            assert leq(a, c)


def test_join_laws():
    for a, b in itertools.product(UNIVERSE, repeat=2):
        assert join(a, b) == join(b, a)
        assert leq(a, join(a, b))
        assert leq(b, join(a, b))
        # leq and join characterize each other
        assert leq(a, b) == (join(a, b) == b)
    for a in UNIVERSE:
        assert join(a, a) == a
    for a, b, c in itertools.product(UNIVERSE, repeat=3):
        assert join(join(a, b), c) == join(a, join(b, c))


def _ext_leq(label: Label, sink: str) -> bool:
    """Independent formulation: label order extended with dot-suffix domain
    containment, compared against the sink's domain label."""
    if label == PUBLIC:
        return True
    if label == LOCAL:
        return False
    return sink == label.name or sink.endswith("." + label.name)


def test_flow_permitted_matches_extended_order_on_grid():
    for label, sink in itertools.product(UNIVERSE, SINKS):
        assert flow_permitted(label, sink) == _ext_leq(label, sink), (label, sink)


def test_flow_permitted_monotone():
    for a, b in itertools.product(UNIVERSE, repeat=2):
        if not leq(a, b):
            continue
        for sink in SINKS:
            if flow_permitted(b, sink):
                assert flow_permitted(a, sink)


def test_flow_permitted_examples():
    assert flow_permitted(PUBLIC, "stealer.com")
    assert flow_permitted(domain("example.com"), "api.example.com")
    assert not flow_permitted(LOCAL, "example.com")
    assert not flow_permitted(domain("a.com"), "b.com")
    # dot-suffix matching, not substring matching
    assert not flow_permitted(domain("example.com"), "notexample.com")


def test_parse_label_keywords():
    assert parse_label("HOST", "shop.example") == domain("shop.example")
    assert parse_label("public", "shop.example") == PUBLIC
    assert parse_label("local", "shop.example") == LOCAL


def test_parse_label_lowercases_domains():
    label = parse_label("currConv.com", "shop.example")
    assert label == domain("currconv.com")
    assert flow_permitted(label, "currconv.com")


def test_parse_label_keywords_are_case_sensitive():
    # non-keyword spellings fall through to the domain rule
    assert parse_label("Public", "h.example") == domain("public")
    assert parse_label("LOCAL", "h.example") == domain("local")
    assert parse_label("host", "h.example") == domain("host")


@pytest.mark.parametrize("bad", ["", "a/b", "a b", ".a", "a.", "http://x",
                                 "a:80", "-a", "a-", "a..b"])
def test_parse_label_rejects_malformed(bad):
    with pytest.raises(MalformedLabel):
        parse_label(bad, "h.example")


def test_label_text_round_trip():
    for label in UNIVERSE:
        assert parse_label(label_text(label), "h.example") == label
