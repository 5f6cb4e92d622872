"""One engine instance = one page run.

Owns the document, the shared page-global environment, the pc stack, the
network gate, and all instrumentation logs. Scripts execute strictly
sequentially; events dispatch one handler at a time: privileged (policy)
handlers first along the target-to-root path, then user input application
for keypresses, then ordinary handlers, then queued network responses.

Enforcement modes: ``upgrade`` (default) joins the pc into every write's
stored label; ``nsu`` refuses writes whose target label does not dominate
the pc. ``plain=True`` turns label tracking and the gate off entirely and
exists only as the timing baseline.
"""

from __future__ import annotations

from typing import Optional

from .dom import Document, Element, Event, HandlerRegistration
from .errors import (EngineError, ImplicitFlowError, LexError, ParseError,
                     PolicyInstallError, PrivilegeError, ProtectedElementError,
                     RuntimeFault, TypeMismatch)
from .interp import Interpreter, ReturnSignal
from .labels import PUBLIC, Label, join, label_text, leq, parse_label
from .network import NetworkGate
from .parser import parse_source
from .runtime import (Closure, ElementRef, Environment, EventRef, ExecContext,
                      NativeFunction, ObjectVal, PcStack, TaintedValue,
                      kind_of, to_display)

MODES = ("upgrade", "nsu")


class Engine:
    def __init__(self, host_domain: str, mode: str = "upgrade", plain: bool = False):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.host = host_domain
        self.mode = mode
        self.plain = plain
        self.globals = Environment()
        self.pc = PcStack()
        self.gate = NetworkGate(plain=plain)
        self.interp = Interpreter(self)
        self.document: Optional[Document] = None
        self.loading = True
        self.handler_seq = 0
        self.event_seq = 0
        # instrumentation
        self.errors: list[dict] = []
        self.handler_log: list[dict] = []
        self.script_log: list[tuple[str, bool]] = []
        self.write_log: list[tuple[Label, Label, str]] = []
        self._install_builtins()

    # --- label plumbing ---

    def join(self, a: Label, b: Label) -> Label:
        return join(a, b)

    def guarded_store(self, current_label: Optional[Label], value: TaintedValue,
                      ctx: ExecContext, what: str, line=None, column=None) -> TaintedValue:
        """Mode-sensitive write: nsu demands leq(pc, target); the stored
        label always joins the pc (pc confinement)."""
        if self.plain:
            return TaintedValue(value.payload, PUBLIC)
        pc = ctx.pc.current()
        if ctx.mode == "nsu" and current_label is not None and not leq(pc, current_label):
            raise ImplicitFlowError(
                f"write to {what} under pc {label_text(pc)} "
                f"(target label {label_text(current_label)})", line, column)
        stored = TaintedValue(value.payload, join(value.label, pc))
        self.write_log.append((pc, stored.label, what))
        return stored

    # --- document / builtins ---

    def attach_document(self, root: Element) -> None:
        self.document = Document(root)
        doc_slot = self.globals.lookup("document")
        assert doc_slot is not None
        doc_obj = doc_slot.value.payload
        doc_obj.fields["body"] = TaintedValue(ElementRef(root), PUBLIC)

    def _install_builtins(self) -> None:
        def native(name, fn):
            return TaintedValue(NativeFunction(name, fn), PUBLIC)

        doc = ObjectVal()
        doc.fields["getElementById"] = native("getElementById", self._nat_get_element_by_id)
        self.globals.declare("document", TaintedValue(doc, PUBLIC))
        self.globals.declare("sendRequest", native("sendRequest", self._nat_send_request))
        self.globals.declare("fetch", native("fetch", self._nat_fetch))
        self.globals.declare("strlen", native("strlen", self._nat_strlen))
        self.globals.declare("toNumber", native("toNumber", self._nat_to_number))

    def context(self, privileged: bool, origin: str) -> ExecContext:
        return ExecContext(privileged=privileged, origin=origin, pc=self.pc,
                           globals=self.globals, mode=self.mode, engine=self)

    # --- script execution ---

    def run_script(self, name: str, source: str, origin: str, policy: bool) -> None:
        """Top-level statements run in the shared page-global environment
        at public pc. A failing script is recorded and skipped; later
        scripts still run."""
        depth = self.pc.depth()
        try:
            program = parse_source(source)
        except (LexError, ParseError) as err:
            self.record_error(err, where=name)
            return
        self.script_log.append((name, policy))
        ctx = self.context(privileged=policy, origin=origin)
        self.interp.reset_steps()
        try:
            self.interp.exec_program(program, self.globals, ctx)
        except ReturnSignal:
            self.record_error(RuntimeFault("return outside a function"), where=name)
        except EngineError as err:
            self.record_error(err, where=name)
        finally:
            self.pc.unwind_to(depth)

    def finish_load(self) -> None:
        self.loading = False

    def record_error(self, err: EngineError, where: str) -> None:
        self.errors.append({
            "kind": err.kind,
            "where": where,
            "message": err.message,
            "line": err.line,
            "column": err.column,
        })

    # --- events ---

    def dispatch(self, event: Event) -> int:
        """Run one event to completion (both phases plus input application).
        Queued network responses are NOT drained here; the run loop drains
        them after the whole dispatch finishes."""
        seq = self.event_seq
        self.event_seq += 1
        if event.response_callback is not None:
            self._invoke(event, None, event.response_callback, seq, "handler-entry")
            return seq
        assert event.target is not None, "non-response events need a target"
        path = event.target.path_to_root()
        for privileged in (True, False):
            registrations = [
                reg
                for element in path
                for reg in element.handlers
                if reg.event_type == event.event_type and reg.privileged == privileged
            ]
            for reg in registrations:
                self._invoke(event, reg, reg.callback, seq, "dispatch-context")
            if privileged and event.event_type == "keypress":
                self.apply_user_input(event)
        return seq

    def _invoke(self, event: Event, reg: Optional[HandlerRegistration],
                callback: Closure, event_seq: int, frame_origin: str) -> None:
        depth = self.pc.depth()
        frame_label = PUBLIC if self.plain else event.context_label
        self.pc.push(frame_label, frame_origin)
        self.handler_log.append({
            "eventSeq": event_seq,
            "eventType": event.event_type,
            "handler": callback.name,
            "seq": reg.seq if reg is not None else None,
            "privileged": callback.privileged,
            "pcAtEntry": label_text(self.pc.current()),
        })
        ctx = self.context(privileged=callback.privileged, origin=callback.origin)
        event_arg = TaintedValue(EventRef(event),
                                 PUBLIC if self.plain else event.event_label)
        self.interp.reset_steps()
        try:
            self.interp.call_value(TaintedValue(callback, PUBLIC), [event_arg], ctx)
        except EngineError as err:
            self.record_error(err, where=f"handler {callback.name}")
        finally:
            self.pc.unwind_to(depth)

    def apply_user_input(self, event: Event) -> None:
        """Append the typed key to the target's value. Runs between the
        policy phase and the ordinary phase, so a policy's event label (set
        this very dispatch) lands on the stored field content. The element
        label is a floor on the stored content as well."""
        target = event.target
        key = event.data.get("key")
        if target is None or key is None:
            return
        old = target.value
        text = to_display(old.payload) + to_display(key.payload)
        if self.plain:
            label = PUBLIC
        else:
            label = join(join(old.label, key.label),
                         join(event.event_label, target.element_label))
        target.value = TaintedValue(text, label)
        self.write_log.append((PUBLIC, label, f"input {target.id or target.tag}"))

    def drain_responses(self) -> None:
        while True:
            pending = self.gate.pop_pending()
            if pending is None:
                break
            event = Event(
                event_type="response",
                target=None,
                data={"responseText": TaintedValue(pending.body, pending.body_label)},
                response_callback=pending.callback,
            )
            self.dispatch(event)

    # --- element / event member surface ---

    def element_member(self, ref: TaintedValue, name: str, ctx: ExecContext,
                       line, column) -> TaintedValue:
        element = ref.payload.element
        j = self.interp.joinl
        if name in ("value", "innerText"):
            content = element.value
            return TaintedValue(content.payload,
                                j(ctx, ref.label, content.label, element.element_label))
        if name == "id":
            return TaintedValue(element.id, j(ctx, ref.label))
        if name == "tag":
            return TaintedValue(element.tag, j(ctx, ref.label))
        natives = {
            "addEventListener": self._nat_add_event_listener,
            "setLabel": self._nat_set_label,
            "getAttribute": self._nat_get_attribute,
            "setAttribute": self._nat_set_attribute,
            "appendChild": self._nat_append_child,
            "removeChild": self._nat_remove_child,
        }
        fn = natives.get(name)
        if fn is None:
            raise TypeMismatch(f"unknown element member {name!r}", line, column)
        bound = NativeFunction(name, lambda args, c, _el=element: fn(_el, args, c))
        return TaintedValue(bound, j(ctx, ref.label))

    def element_assign_member(self, element: Element, name: str, value: TaintedValue,
                              ctx: ExecContext, line, column) -> None:
        if name not in ("value", "innerText"):
            raise TypeMismatch(
                f"element member {name!r} is not assignable (attributes go "
                f"through setAttribute)", line, column)
        # content writes are data flows, allowed even on protected elements
        element.value = self.guarded_store(
            element.value.label, value, ctx,
            f"{'value' if name == 'value' else 'innerText'} of {element.id or element.tag}",
            line, column)

    def event_member(self, ref: TaintedValue, name: str, ctx: ExecContext,
                     line, column) -> TaintedValue:
        event = ref.payload.event
        j = self.interp.joinl
        if name == "target":
            payload = ElementRef(event.target) if event.target is not None else None
            return TaintedValue(payload, j(ctx, ref.label, event.event_label))
        if name == "type":
            return TaintedValue(event.event_type, j(ctx, ref.label, event.event_label))
        if name == "setLabel":
            bound = NativeFunction("setLabel",
                                   lambda args, c, _ev=event: self._nat_event_set_label(_ev, args, c))
            return TaintedValue(bound, j(ctx, ref.label))
        if name == "setContext":
            bound = NativeFunction("setContext",
                                   lambda args, c, _ev=event: self._nat_event_set_context(_ev, args, c))
            return TaintedValue(bound, j(ctx, ref.label))
        field = event.data.get(name)
        if field is None:
            return TaintedValue(None, j(ctx, ref.label, event.event_label))
        return TaintedValue(field.payload,
                            j(ctx, ref.label, event.event_label, field.label))

    # --- natives ---

    def _need_args(self, args: list[TaintedValue], count: int, what: str) -> None:
        if len(args) != count:
            raise TypeMismatch(f"{what} expects {count} argument(s), got {len(args)}")

    def _nat_get_element_by_id(self, args: list[TaintedValue], ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "getElementById")
        if not isinstance(args[0].payload, str):
            raise TypeMismatch("getElementById expects a string id")
        pc = self.interp.pc(ctx)
        element = self.document.get(args[0].payload) if self.document else None
        if element is None:
            return TaintedValue(None, pc)
        return TaintedValue(ElementRef(element), pc)

    def _nat_add_event_listener(self, element: Element, args: list[TaintedValue],
                                ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 2, "addEventListener")
        event_type, callback = args
        if not isinstance(event_type.payload, str):
            raise TypeMismatch("addEventListener expects a string event type")
        if not isinstance(callback.payload, Closure):
            raise TypeMismatch("addEventListener expects a function")
        if ctx.privileged and not self.loading:
            raise PolicyInstallError(
                "policy handlers can only be installed during page load")
        reg = HandlerRegistration(event_type.payload, callback.payload,
                                  ctx.privileged, self.handler_seq)
        self.handler_seq += 1
        element.handlers.append(reg)
        if ctx.privileged:
            element.protected = True
        return TaintedValue(None, self.interp.pc(ctx))

    def _parse_label_arg(self, args: list[TaintedValue], what: str) -> Label:
        self._need_args(args, 1, what)
        if not isinstance(args[0].payload, str):
            raise TypeMismatch(f"{what} expects a string label")
        return parse_label(args[0].payload, self.host)

    def _nat_set_label(self, element: Element, args: list[TaintedValue],
                       ctx: ExecContext) -> TaintedValue:
        if not ctx.privileged:
            raise PrivilegeError("setLabel may only be called by policy code")
        element.element_label = self._parse_label_arg(args, "setLabel")
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_event_set_label(self, event: Event, args: list[TaintedValue],
                             ctx: ExecContext) -> TaintedValue:
        if not ctx.privileged:
            raise PrivilegeError("setLabel may only be called by policy code")
        event.event_label = self._parse_label_arg(args, "setLabel")
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_event_set_context(self, event: Event, args: list[TaintedValue],
                               ctx: ExecContext) -> TaintedValue:
        if not ctx.privileged:
            raise PrivilegeError("setContext may only be called by policy code")
        label = self._parse_label_arg(args, "setContext")
        event.context_label = join(event.context_label, label)
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_get_attribute(self, element: Element, args: list[TaintedValue],
                           ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "getAttribute")
        if not isinstance(args[0].payload, str):
            raise TypeMismatch("getAttribute expects a string name")
        j = self.interp.joinl
        attr = element.attributes.get(args[0].payload)
        if attr is None:
            return TaintedValue(None, j(ctx, args[0].label, element.element_label))
        return TaintedValue(attr.payload,
                            j(ctx, args[0].label, attr.label, element.element_label))

    def _nat_set_attribute(self, element: Element, args: list[TaintedValue],
                           ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 2, "setAttribute")
        name, value = args
        if not isinstance(name.payload, str):
            raise TypeMismatch("setAttribute expects a string name")
        if element.protected and not ctx.privileged:
            raise ProtectedElementError(
                f"cannot set attributes on protected element "
                f"{element.id or element.tag}")
        current = element.attributes.get(name.payload)
        element.attributes[name.payload] = self.guarded_store(
            current.label if current is not None else None, value, ctx,
            f"attribute {name.payload} of {element.id or element.tag}")
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_append_child(self, element: Element, args: list[TaintedValue],
                          ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "appendChild")
        child_tv = args[0]
        if not isinstance(child_tv.payload, ElementRef):
            raise TypeMismatch("appendChild expects an element")
        child = child_tv.payload.element
        if self.document is not None and child is self.document.root:
            raise TypeMismatch("cannot re-parent the document root")
        if child is element or child.is_ancestor_of(element):
            raise TypeMismatch("appendChild would create a cycle")
        if child.parent is not None:
            # moving an existing subtree: protected elements may not move
            if not ctx.privileged and child.subtree_protected():
                raise ProtectedElementError(
                    f"cannot move protected element {child.id or child.tag}")
            child.parent.children.remove(child)
            child.parent = None
        element.append(child)
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_remove_child(self, element: Element, args: list[TaintedValue],
                          ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "removeChild")
        child_tv = args[0]
        if not isinstance(child_tv.payload, ElementRef):
            raise TypeMismatch("removeChild expects an element")
        child = child_tv.payload.element
        if child.parent is not element:
            raise TypeMismatch("removeChild: not a child of this element")
        if not ctx.privileged and child.subtree_protected():
            raise ProtectedElementError(
                f"cannot detach protected element {child.id or child.tag}")
        element.children.remove(child)
        child.parent = None
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_send_request(self, args: list[TaintedValue], ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "sendRequest")
        pc = PUBLIC if self.plain else ctx.pc.current()
        self.gate.submit(args[0], pc)
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_fetch(self, args: list[TaintedValue], ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 2, "fetch")
        url, callback = args
        if not isinstance(callback.payload, Closure):
            raise TypeMismatch("fetch expects a function callback")
        pc = PUBLIC if self.plain else ctx.pc.current()
        entry = self.gate.submit(url, pc)
        if entry.decision == "allowed":
            self.gate.enqueue_response(url.payload, callback.payload)
        return TaintedValue(None, self.interp.pc(ctx))

    def _nat_strlen(self, args: list[TaintedValue], ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "strlen")
        if not isinstance(args[0].payload, str):
            raise TypeMismatch(f"strlen expects a string, got {kind_of(args[0].payload)}")
        return TaintedValue(float(len(args[0].payload)),
                            self.interp.joinl(ctx, args[0].label))

    def _nat_to_number(self, args: list[TaintedValue], ctx: ExecContext) -> TaintedValue:
        self._need_args(args, 1, "toNumber")
        payload = args[0].payload
        if isinstance(payload, float):
            number = payload
        elif isinstance(payload, bool):
            number = 1.0 if payload else 0.0
        elif payload is None:
            number = 0.0
        elif isinstance(payload, str):
            try:
                number = float(payload.strip()) if payload.strip() else 0.0
            except ValueError:
                number = float("nan")
        else:
            number = float("nan")
        return TaintedValue(number, self.interp.joinl(ctx, args[0].label))
