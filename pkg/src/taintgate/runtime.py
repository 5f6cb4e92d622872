"""Runtime value model: every value the interpreter touches is a payload
paired with a confidentiality label.

Payloads are Python floats, strs, bools, None, or one of the reference
types below. Environments are lexical chains of mutable slots; the page
global environment is shared by every script on the page. The pc stack
tracks the labels of all control contexts governing the current
instruction; its join is the current pc label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Optional

from .errors import TypeMismatch, UndefinedVariable
from .labels import PUBLIC, Label, join
from .pretty import format_number

if TYPE_CHECKING:
    from .dom import Element, Event
    from .syntax import Block


@dataclass
class TaintedValue:
    payload: object
    label: Label


@dataclass
class Closure:
    params: tuple[str, ...]
    body: "Block"
    env: "Environment"
    privileged: bool
    origin: str
    name: str = "<anon>"


@dataclass
class NativeFunction:
    name: str
    fn: Callable  # (args: list[TaintedValue], ctx: ExecContext) -> TaintedValue


@dataclass
class ObjectVal:
    fields: dict[str, TaintedValue] = field(default_factory=dict)


@dataclass
class ElementRef:
    element: "Element"


@dataclass
class EventRef:
    event: "Event"


class Slot:
    __slots__ = ("value",)

    def __init__(self, value: TaintedValue):
        self.value = value


class Environment:
    def __init__(self, parent: Optional["Environment"] = None):
        self.bindings: dict[str, Slot] = {}
        self.parent = parent

    def declare(self, name: str, value: TaintedValue) -> None:
        self.bindings[name] = Slot(value)

    def lookup(self, name: str) -> Optional[Slot]:
        env: Optional[Environment] = self
        while env is not None:
            slot = env.bindings.get(name)
            if slot is not None:
                return slot
            env = env.parent
        return None

    def require(self, name: str, line: int | None = None, column: int | None = None) -> Slot:
        slot = self.lookup(name)
        if slot is None:
            raise UndefinedVariable(f"undefined variable {name!r}", line, column)
        return slot


@dataclass
class PcFrame:
    label: Label
    origin: str  # branch | loop | handler-entry | dispatch-context


class PcStack:
    """Join of all frame labels is the current pc; empty stack is public.

    Cumulative joins are kept per frame so `current` is O(1). Push/pop
    counters feed the balance invariant checks.
    """

    def __init__(self) -> None:
        self.frames: list[tuple[PcFrame, Label]] = []
        self.pushes = 0
        self.pops = 0

    def current(self) -> Label:
        if not self.frames:
            return PUBLIC
        return self.frames[-1][1]

    def push(self, label: Label, origin: str) -> None:
        cum = join(self.current(), label)
        self.frames.append((PcFrame(label, origin), cum))
        self.pushes += 1

    def pop(self) -> None:
        self.frames.pop()
        self.pops += 1

    def depth(self) -> int:
        return len(self.frames)

    def unwind_to(self, depth: int) -> None:
        """Pop frames left behind by an aborted script or handler."""
        while len(self.frames) > depth:
            self.pop()


@dataclass
class ExecContext:
    privileged: bool
    origin: str
    pc: PcStack
    globals: Environment
    mode: str  # upgrade | nsu
    engine: object  # Engine; typed loosely to avoid an import cycle


def kind_of(payload: object) -> str:
    if payload is None:
        return "null"
    if isinstance(payload, bool):
        return "boolean"
    if isinstance(payload, float):
        return "number"
    if isinstance(payload, str):
        return "string"
    if isinstance(payload, Closure):
        return "function"
    if isinstance(payload, NativeFunction):
        return "function"
    if isinstance(payload, ObjectVal):
        return "object"
    if isinstance(payload, ElementRef):
        return "element"
    if isinstance(payload, EventRef):
        return "event"
    return type(payload).__name__


def truthy(payload: object) -> bool:
    if payload is None or payload is False:
        return False
    if payload is True:
        return True
    if isinstance(payload, float):
        return payload != 0.0 and payload == payload
    if isinstance(payload, str):
        return payload != ""
    return True


def to_display(payload: object) -> str:
    """String form used by `+` concatenation and report dumps."""
    if payload is None:
        return "null"
    if payload is True:
        return "true"
    if payload is False:
        return "false"
    if isinstance(payload, float):
        return format_number(payload)
    if isinstance(payload, str):
        return payload
    if isinstance(payload, ElementRef):
        ident = payload.element.id or payload.element.tag
        return f"[element {ident}]"
    if isinstance(payload, EventRef):
        return f"[event {payload.event.event_type}]"
    if isinstance(payload, (Closure, NativeFunction)):
        return f"[function {payload.name}]"
    if isinstance(payload, ObjectVal):
        return "[object]"
    return str(payload)


def values_equal(a: object, b: object) -> bool:
    """`==` semantics: same kind and equal, references by identity,
    NaN unequal to itself, no cross-type coercion."""
    ka, kb = kind_of(a), kind_of(b)
    if ka != kb:
        return False
    if ka == "number":
        return a == b  # NaN != NaN falls out of float semantics
    if ka in ("null", "boolean", "string"):
        return a == b
    return a is b


def require_number(tv: TaintedValue, what: str, line=None, column=None) -> float:
    if not isinstance(tv.payload, float):
        raise TypeMismatch(f"{what} must be a number, got {kind_of(tv.payload)}", line, column)
    return tv.payload
