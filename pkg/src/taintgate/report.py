"""Run reports: the request log, handler log, DOM label dump, recorded
errors, and informational timings. Everything except timings is
deterministic for a given scenario and mode."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .labels import label_text
from .runtime import to_display


@dataclass
class Report:
    requests: list[dict]
    handler_log: list[dict]
    dom_dump: list[dict]
    errors: list[dict]
    timings: dict

    def to_dict(self) -> dict:
        return {
            "requests": self.requests,
            "handlerLog": self.handler_log,
            "domDump": self.dom_dump,
            "errors": self.errors,
            "timings": self.timings,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def deterministic_json(self) -> str:
        """Serialization with timings stripped; byte-identical across
        repeated runs of the same scenario and mode."""
        data = self.to_dict()
        del data["timings"]
        return json.dumps(data, indent=2)


def build_report(engine, timings: dict) -> Report:
    requests = [entry.to_dict() for entry in engine.gate.request_log()]
    dom_dump = []
    if engine.document is not None:
        for element in engine.document.in_document_order():
            dom_dump.append({
                "id": element.id,
                "value": to_display(element.value.payload),
                "valueLabel": label_text(element.value.label),
                "elementLabel": label_text(element.element_label),
                "protected": element.protected,
            })
    return Report(
        requests=requests,
        handler_log=list(engine.handler_log),
        dom_dump=dom_dump,
        errors=list(engine.errors),
        timings=timings,
    )
