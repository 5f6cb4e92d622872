"""The confidentiality lattice.

Three levels: ``public`` at the bottom, one incomparable level per domain,
and ``local`` at the top for data that must never leave the browser.
Domains are mutually incomparable inside the lattice; subdomain containment
matters only at network sinks (``flow_permitted``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedLabel

_PUBLIC = "public"
_DOMAIN = "domain"
_LOCAL = "local"

# Lowercase DNS name: dot-separated letter/digit/hyphen parts, no scheme,
# port, or path, no leading/trailing dot or hyphen.
_DOMAIN_RE = re.compile(r"^[a-z0-9]([a-z0-9-]*[a-z0-9])?(\.[a-z0-9]([a-z0-9-]*[a-z0-9])?)*$")


@dataclass(frozen=True)
class Label:
    level: str
    name: str = ""

    def __repr__(self) -> str:
        if self.level == _DOMAIN:
            return f"Label(domain={self.name!r})"
        return f"Label({self.level})"


PUBLIC = Label(_PUBLIC)
LOCAL = Label(_LOCAL)


def is_valid_domain(name: str) -> bool:
    return bool(_DOMAIN_RE.match(name))


def domain(name: str) -> Label:
    """Domain-level label. Name must already be a lowercase DNS name."""
    if not is_valid_domain(name):
        raise MalformedLabel(f"invalid domain name: {name!r}")
    return Label(_DOMAIN, name)


def leq(a: Label, b: Label) -> bool:
    """Partial order: public <= everything, domains only equal to themselves,
    everything <= local."""
    if a.level == _PUBLIC:
        return True
    if b.level == _LOCAL:
        return True
    return a == b


def join(a: Label, b: Label) -> Label:
    """Least upper bound. Two distinct domains only share local as an upper
    bound, so their join escalates there."""
    if leq(a, b):
        return b
    if leq(b, a):
        return a
    return LOCAL


def join_all(first: Label, *rest: Label) -> Label:
    out = first
    for lab in rest:
        out = join(out, lab)
    return out


def flow_permitted(label: Label, sink: str) -> bool:
    """May data carrying ``label`` flow to the server at domain ``sink``?

    Public data flows anywhere; domain-labeled data only to that domain and
    its subdomains (textual dot-suffix match); local data flows nowhere.
    """
    if label.level == _PUBLIC:
        return True
    if label.level == _LOCAL:
        return False
    d = label.name
    return sink == d or sink.endswith("." + d)


def parse_label(text: str, host: str) -> Label:
    """Parse the textual label syntax used in scenarios and reports.

    Exactly "public" and "local" (lowercase) are the keyword levels; exactly
    "HOST" (uppercase) resolves to the host page's domain; anything else must
    be a DNS name and is lowercased into a domain label.
    """
    if text == "public":
        return PUBLIC
    if text == "local":
        return LOCAL
    if text == "HOST":
        return domain(host)
    lowered = text.lower()
    if not is_valid_domain(lowered):
        raise MalformedLabel(f"not a label keyword or DNS name: {text!r}")
    return Label(_DOMAIN, lowered)


def label_text(label: Label) -> str:
    """Inverse of parse_label for report serialization."""
    if label.level == _DOMAIN:
        return label.name
    return label.level
