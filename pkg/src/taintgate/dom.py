"""Mini DOM: elements, events, and handler registrations.

Pure tree structure; dispatch order, privilege checks, and label
enforcement live in the engine. An element's ``element_label`` is a floor
joined into every read of its value or attributes. ``protected`` flips on
when a privileged handler is registered and gates structural mutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .labels import PUBLIC, Label
from .runtime import Closure, TaintedValue


@dataclass
class HandlerRegistration:
    event_type: str
    callback: Closure
    privileged: bool
    seq: int


class Element:
    def __init__(self, tag: str, id: Optional[str] = None):
        self.tag = tag
        self.id = id
        self.attributes: dict[str, TaintedValue] = {}
        self.value: TaintedValue = TaintedValue("", PUBLIC)
        self.children: list[Element] = []
        self.parent: Optional[Element] = None
        self.element_label: Label = PUBLIC
        self.handlers: list[HandlerRegistration] = []
        self.protected = False

    def append(self, child: "Element") -> None:
        child.parent = self
        self.children.append(child)

    def path_to_root(self) -> list["Element"]:
        path = []
        node: Optional[Element] = self
        while node is not None:
            path.append(node)
            node = node.parent
        return path

    def subtree(self) -> Iterator["Element"]:
        yield self
        for child in self.children:
            yield from child.subtree()

    def subtree_protected(self) -> bool:
        return any(node.protected for node in self.subtree())

    def is_ancestor_of(self, other: "Element") -> bool:
        node = other.parent
        while node is not None:
            if node is self:
                return True
            node = node.parent
        return False


class Document:
    """Root element plus an id index. Ids are unique. Scripts cannot create
    elements, only move the ones the page declared, so the index built at
    load stays valid for the whole run."""

    def __init__(self, root: Element):
        self.root = root
        self.by_id: dict[str, Element] = {}
        for node in root.subtree():
            if node.id is not None:
                self.by_id[node.id] = node

    def get(self, element_id: str) -> Optional[Element]:
        return self.by_id.get(element_id)

    def in_document_order(self) -> Iterator[Element]:
        yield from self.root.subtree()


@dataclass
class Event:
    event_type: str
    target: Optional[Element]
    data: dict[str, TaintedValue] = field(default_factory=dict)
    event_label: Label = PUBLIC
    context_label: Label = PUBLIC
    # response events carry the fetch callback; dispatched off-tree
    response_callback: Optional[Closure] = None
