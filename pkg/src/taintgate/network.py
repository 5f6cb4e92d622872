"""The single network egress point.

Every outbound request funnels through ``NetworkGate.submit``: the URL's
label joined with the pc at the send site must be permitted to flow to the
target domain, else the request is suppressed silently and only the log
remembers. Responses are canned bodies matched by longest URL prefix and
delivered as queued events after the current dispatch completes, FIFO.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .labels import PUBLIC, Label, flow_permitted, is_valid_domain, join, label_text
from .runtime import Closure, TaintedValue


@dataclass
class NetworkRequest:
    url: str
    sink_domain: str
    effective_label: Label
    pc_at_send: Label
    decision: str  # allowed | blocked
    reason: str
    seq: int

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "url": self.url,
            "sinkDomain": self.sink_domain,
            "effectiveLabel": label_text(self.effective_label),
            "pcAtSend": label_text(self.pc_at_send),
            "decision": self.decision,
            "reason": self.reason,
        }


@dataclass
class CannedResponse:
    url_prefix: str
    body: str
    body_label: Label = PUBLIC


@dataclass
class PendingResponse:
    callback: Closure
    body: str
    body_label: Label


def parse_url_host(url: str) -> Optional[str]:
    """Hostname of an http(s) URL, lowercased, port stripped; None if the
    URL has no recognizable host. Scheme is irrelevant to permission."""
    rest = None
    for scheme in ("http://", "https://"):
        if url.startswith(scheme):
            rest = url[len(scheme):]
            break
    if rest is None:
        return None
    host = rest.split("/", 1)[0].split("?", 1)[0].split("#", 1)[0]
    host = host.split(":", 1)[0].lower()
    if not host or not is_valid_domain(host):
        return None
    return host


class NetworkGate:
    def __init__(self, plain: bool = False):
        self.log: list[NetworkRequest] = []
        self.responses: list[CannedResponse] = []
        self.queue: list[PendingResponse] = []
        self.plain = plain          # timing baseline: no label checks
        self.force_block = False    # test hook: suppression-neutrality probe

    def submit(self, url: TaintedValue, pc: Label) -> NetworkRequest:
        """Decide, log, and return the request record."""
        seq = len(self.log)
        if not isinstance(url.payload, str):
            entry = NetworkRequest("", "", join(url.label, pc), pc, "blocked",
                                   "malformed", seq)
            self.log.append(entry)
            return entry
        text = url.payload
        host = parse_url_host(text)
        if host is None:
            entry = NetworkRequest(text, "", join(url.label, pc), pc, "blocked",
                                   "malformed", seq)
            self.log.append(entry)
            return entry
        effective = PUBLIC if self.plain else join(url.label, pc)
        permitted = flow_permitted(effective, host) and not self.force_block
        if permitted:
            decision, reason = "allowed", ""
        else:
            decision, reason = "blocked", (
                f"label {label_text(effective)} may not flow to {host}")
        entry = NetworkRequest(text, host, effective, pc, decision, reason, seq)
        self.log.append(entry)
        return entry

    def lookup_response(self, url: str) -> Optional[CannedResponse]:
        best: Optional[CannedResponse] = None
        for canned in self.responses:
            if url.startswith(canned.url_prefix):
                if best is None or len(canned.url_prefix) > len(best.url_prefix):
                    best = canned
        return best

    def enqueue_response(self, url: str, callback: Closure) -> None:
        canned = self.lookup_response(url)
        body = canned.body if canned else ""
        label = canned.body_label if canned else PUBLIC
        self.queue.append(PendingResponse(callback, body, label))

    def pop_pending(self) -> Optional[PendingResponse]:
        if self.queue:
            return self.queue.pop(0)
        return None

    def request_log(self) -> list[NetworkRequest]:
        return list(self.log)
