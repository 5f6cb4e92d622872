"""Tree-walking interpreter with per-value taint propagation.

Explicit flows: the result of every primitive operation joins the labels
of the operands actually evaluated plus the current pc. Implicit flows:
branch and loop entry push a pc frame carrying the condition's label,
popped at the structure's lexical exit. Writes go through guarded stores,
which in nsu mode refuse targets whose label does not dominate the pc.
"""

from __future__ import annotations

import math
from typing import Optional

from . import syntax as ast
from .errors import RuntimeFault, TypeMismatch
from .labels import PUBLIC
from .runtime import (Closure, ElementRef, Environment, EventRef, ExecContext,
                      NativeFunction, ObjectVal, Slot, TaintedValue, kind_of,
                      to_display, truthy, values_equal)

STEP_BUDGET = 1_000_000


class ReturnSignal(Exception):
    def __init__(self, value: TaintedValue):
        self.value = value


class Interpreter:
    def __init__(self, engine):
        self.engine = engine
        self.steps = 0

    def reset_steps(self) -> None:
        self.steps = 0

    def _tick(self, node) -> None:
        self.steps += 1
        if self.steps > STEP_BUDGET:
            raise RuntimeFault("step budget exceeded", node.line, node.column)

    def pc(self, ctx: ExecContext):
        if self.engine.plain:
            return PUBLIC
        return ctx.pc.current()

    def joinl(self, ctx: ExecContext, *labels):
        if self.engine.plain:
            return PUBLIC
        out = ctx.pc.current()
        for lab in labels:
            out = self.engine.join(out, lab)
        return out

    # --- statements ---

    def exec_program(self, program: ast.Program, env: Environment, ctx: ExecContext) -> None:
        for stmt in program.body:
            self.exec_stmt(stmt, env, ctx)

    def exec_stmt(self, s: ast.Stmt, env: Environment, ctx: ExecContext) -> None:
        self._tick(s)
        if isinstance(s, ast.VarDecl):
            value = self.eval(s.init, env, ctx)
            env.declare(s.name, self.engine.guarded_store(
                None, value, ctx, f"var {s.name}", s.line, s.column))
            return
        if isinstance(s, ast.Assign):
            self.exec_assign(s, env, ctx)
            return
        if isinstance(s, ast.Block):
            self.exec_block(s, env, ctx)
            return
        if isinstance(s, ast.If):
            cond = self.eval(s.cond, env, ctx)
            ctx.pc.push(PUBLIC if self.engine.plain else cond.label, "branch")
            try:
                if truthy(cond.payload):
                    self.exec_block(s.then_block, env, ctx)
                elif s.else_block is not None:
                    self.exec_block(s.else_block, env, ctx)
            finally:
                ctx.pc.pop()
            return
        if isinstance(s, ast.While):
            while True:
                self._tick(s)
                cond = self.eval(s.cond, env, ctx)
                if not truthy(cond.payload):
                    break
                ctx.pc.push(PUBLIC if self.engine.plain else cond.label, "loop")
                try:
                    self.exec_block(s.body, env, ctx)
                finally:
                    ctx.pc.pop()
            return
        if isinstance(s, ast.FunctionDecl):
            closure = Closure(s.params, s.body, env, ctx.privileged, ctx.origin, s.name)
            env.declare(s.name, TaintedValue(closure, self.pc(ctx)))
            return
        if isinstance(s, ast.Return):
            value = (self.eval(s.value, env, ctx) if s.value is not None
                     else TaintedValue(None, self.pc(ctx)))
            raise ReturnSignal(value)
        if isinstance(s, ast.ExprStmt):
            self.eval(s.expr, env, ctx)
            return
        raise TypeMismatch(f"unknown statement {type(s).__name__}", s.line, s.column)

    def exec_block(self, block: ast.Block, env: Environment, ctx: ExecContext) -> None:
        scope = Environment(parent=env)
        for stmt in block.body:
            self.exec_stmt(stmt, scope, ctx)

    def exec_assign(self, s: ast.Assign, env: Environment, ctx: ExecContext) -> None:
        target = s.target
        if isinstance(target, ast.Ident):
            slot = env.require(target.name, target.line, target.column)
            value = self.eval(s.value, env, ctx)
            self.write_slot(slot, value, ctx, target.name, s.line, s.column)
            return
        if isinstance(target, ast.Member):
            obj = self.eval(target.object, env, ctx)
            value = self.eval(s.value, env, ctx)
            self.assign_member(obj, target.name, value, ctx, s.line, s.column)
            return
        if isinstance(target, ast.Index):
            obj = self.eval(target.object, env, ctx)
            key = self.eval(target.key, env, ctx)
            value = self.eval(s.value, env, ctx)
            if not isinstance(obj.payload, ObjectVal):
                raise TypeMismatch(
                    f"cannot index-assign into {kind_of(obj.payload)}", s.line, s.column)
            self.assign_object_field(obj.payload, self.index_key(key, s), value, ctx, s)
            return
        raise TypeMismatch("invalid assignment target", s.line, s.column)

    def write_slot(self, slot: Slot, value: TaintedValue, ctx: ExecContext,
                   what: str, line=None, column=None) -> None:
        slot.value = self.engine.guarded_store(
            slot.value.label, value, ctx, what, line, column)

    def assign_member(self, obj: TaintedValue, name: str, value: TaintedValue,
                      ctx: ExecContext, line, column) -> None:
        payload = obj.payload
        if isinstance(payload, ObjectVal):
            self.assign_object_field_raw(payload, name, value, ctx, line, column)
            return
        if isinstance(payload, ElementRef):
            self.engine.element_assign_member(payload.element, name, value, ctx, line, column)
            return
        raise TypeMismatch(
            f"cannot assign member {name!r} on {kind_of(payload)}", line, column)

    def assign_object_field(self, obj: ObjectVal, key: str, value: TaintedValue,
                            ctx: ExecContext, node) -> None:
        self.assign_object_field_raw(obj, key, value, ctx, node.line, node.column)

    def assign_object_field_raw(self, obj: ObjectVal, key: str, value: TaintedValue,
                                ctx: ExecContext, line, column) -> None:
        current = obj.fields.get(key)
        obj.fields[key] = self.engine.guarded_store(
            current.label if current is not None else None,
            value, ctx, f"field {key}", line, column)

    def index_key(self, key: TaintedValue, node) -> str:
        if isinstance(key.payload, (str, float)):
            return to_display(key.payload)
        raise TypeMismatch(
            f"index key must be a string or number, got {kind_of(key.payload)}",
            node.line, node.column)

    # --- expressions ---

    def eval(self, e: ast.Expr, env: Environment, ctx: ExecContext) -> TaintedValue:
        if isinstance(e, ast.NumberLit):
            return TaintedValue(e.value, self.pc(ctx))
        if isinstance(e, ast.StringLit):
            return TaintedValue(e.value, self.pc(ctx))
        if isinstance(e, ast.BoolLit):
            return TaintedValue(e.value, self.pc(ctx))
        if isinstance(e, ast.NullLit):
            return TaintedValue(None, self.pc(ctx))
        if isinstance(e, ast.Ident):
            slot = env.require(e.name, e.line, e.column)
            return TaintedValue(slot.value.payload, self.joinl(ctx, slot.value.label))
        if isinstance(e, ast.Binary):
            return self.eval_binary(e, env, ctx)
        if isinstance(e, ast.Unary):
            return self.eval_unary(e, env, ctx)
        if isinstance(e, ast.Member):
            return self.eval_member(e, env, ctx)
        if isinstance(e, ast.Index):
            return self.eval_index(e, env, ctx)
        if isinstance(e, ast.Call):
            callee = self.eval(e.callee, env, ctx)
            args = [self.eval(a, env, ctx) for a in e.args]
            return self.call_value(callee, args, ctx, e.line, e.column)
        if isinstance(e, ast.FunctionExpr):
            closure = Closure(e.params, e.body, env, ctx.privileged, ctx.origin,
                              e.name or "<anon>")
            return TaintedValue(closure, self.pc(ctx))
        if isinstance(e, ast.ObjectLit):
            obj = ObjectVal()
            for key, expr in e.fields:
                obj.fields[key] = self.eval(expr, env, ctx)
            return TaintedValue(obj, self.pc(ctx))
        raise TypeMismatch(f"unknown expression {type(e).__name__}", e.line, e.column)

    def eval_binary(self, e: ast.Binary, env: Environment, ctx: ExecContext) -> TaintedValue:
        if e.op in ("&&", "||"):
            left = self.eval(e.left, env, ctx)
            take_right = truthy(left.payload) if e.op == "&&" else not truthy(left.payload)
            if not take_right:
                # short-circuit: the unevaluated side contributes no label
                return TaintedValue(left.payload, self.joinl(ctx, left.label))
            right = self.eval(e.right, env, ctx)
            return TaintedValue(right.payload, self.joinl(ctx, left.label, right.label))
        left = self.eval(e.left, env, ctx)
        right = self.eval(e.right, env, ctx)
        payload = self.apply_binary(e.op, left, right, e)
        return TaintedValue(payload, self.joinl(ctx, left.label, right.label))

    def apply_binary(self, op: str, left: TaintedValue, right: TaintedValue, node) -> object:
        lp, rp = left.payload, right.payload
        if op == "+":
            if isinstance(lp, str) or isinstance(rp, str):
                return to_display(lp) + to_display(rp)
            if isinstance(lp, float) and isinstance(rp, float):
                return lp + rp
            raise TypeMismatch(
                f"cannot add {kind_of(lp)} and {kind_of(rp)}", node.line, node.column)
        if op == "==":
            return values_equal(lp, rp)
        if op == "!=":
            return not values_equal(lp, rp)
        if op in ("-", "*", "/", "%"):
            if not (isinstance(lp, float) and isinstance(rp, float)):
                raise TypeMismatch(
                    f"arithmetic needs numbers, got {kind_of(lp)} and {kind_of(rp)}",
                    node.line, node.column)
            if op == "-":
                return lp - rp
            if op == "*":
                return lp * rp
            if op == "/":
                if rp == 0.0:
                    return math.nan if lp == 0.0 or lp != lp else math.copysign(math.inf, lp) * math.copysign(1.0, rp)
                return lp / rp
            if rp == 0.0 or lp != lp or rp != rp or math.isinf(lp):
                return math.nan
            if math.isinf(rp):
                return lp
            return math.fmod(lp, rp)
        if op in ("<", "<=", ">", ">="):
            if isinstance(lp, float) and isinstance(rp, float):
                pass
            elif isinstance(lp, str) and isinstance(rp, str):
                pass
            else:
                raise TypeMismatch(
                    f"cannot compare {kind_of(lp)} and {kind_of(rp)}", node.line, node.column)
            if op == "<":
                return lp < rp
            if op == "<=":
                return lp <= rp
            if op == ">":
                return lp > rp
            return lp >= rp
        raise TypeMismatch(f"unknown operator {op!r}", node.line, node.column)

    def eval_unary(self, e: ast.Unary, env: Environment, ctx: ExecContext) -> TaintedValue:
        operand = self.eval(e.operand, env, ctx)
        if e.op == "!":
            return TaintedValue(not truthy(operand.payload), self.joinl(ctx, operand.label))
        if not isinstance(operand.payload, float):
            raise TypeMismatch(
                f"unary '-' needs a number, got {kind_of(operand.payload)}", e.line, e.column)
        return TaintedValue(-operand.payload, self.joinl(ctx, operand.label))

    def eval_member(self, e: ast.Member, env: Environment, ctx: ExecContext) -> TaintedValue:
        obj = self.eval(e.object, env, ctx)
        payload = obj.payload
        if isinstance(payload, ObjectVal):
            field = payload.fields.get(e.name)
            if field is None:
                return TaintedValue(None, self.joinl(ctx, obj.label))
            return TaintedValue(field.payload, self.joinl(ctx, obj.label, field.label))
        if isinstance(payload, ElementRef):
            return self.engine.element_member(obj, e.name, ctx, e.line, e.column)
        if isinstance(payload, EventRef):
            return self.engine.event_member(obj, e.name, ctx, e.line, e.column)
        raise TypeMismatch(
            f"cannot read member {e.name!r} of {kind_of(payload)}", e.line, e.column)

    def eval_index(self, e: ast.Index, env: Environment, ctx: ExecContext) -> TaintedValue:
        obj = self.eval(e.object, env, ctx)
        key = self.eval(e.key, env, ctx)
        if not isinstance(obj.payload, ObjectVal):
            raise TypeMismatch(
                f"cannot index into {kind_of(obj.payload)}", e.line, e.column)
        name = self.index_key(key, e)
        field = obj.payload.fields.get(name)
        if field is None:
            return TaintedValue(None, self.joinl(ctx, obj.label, key.label))
        return TaintedValue(field.payload, self.joinl(ctx, obj.label, key.label, field.label))

    # --- calls ---

    def call_value(self, callee: TaintedValue, args: list[TaintedValue],
                   ctx: ExecContext, line=None, column=None) -> TaintedValue:
        payload = callee.payload
        if isinstance(payload, NativeFunction):
            result = payload.fn(args, ctx)
            return TaintedValue(result.payload, self.joinl(ctx, callee.label, result.label))
        if not isinstance(payload, Closure):
            raise TypeMismatch(f"cannot call a {kind_of(payload)}", line, column)
        frame_env = Environment(parent=payload.env)
        for i, param in enumerate(payload.params):
            if i < len(args):
                frame_env.declare(param, args[i])
            else:
                frame_env.declare(param, TaintedValue(None, self.pc(ctx)))
        callee_ctx = ExecContext(privileged=payload.privileged, origin=payload.origin,
                                 pc=ctx.pc, globals=ctx.globals, mode=ctx.mode,
                                 engine=ctx.engine)
        result: Optional[TaintedValue] = None
        try:
            self.exec_block(payload.body, frame_env, callee_ctx)
        except ReturnSignal as ret:
            result = ret.value
        if result is None:
            result = TaintedValue(None, self.pc(ctx))
        return TaintedValue(result.payload, self.joinl(ctx, callee.label, result.label))
