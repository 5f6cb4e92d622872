"""AST back to source. Binary and unary expressions are fully
parenthesized, which keeps the emitter precedence-free; parentheses leave
no trace in the AST, so output reparses structurally identical."""

from __future__ import annotations

from . import syntax as ast


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def format_number(x: float) -> str:
    """Shortest decimal form; integral floats drop the fraction (92.0 -> 92)."""
    if x != x:
        return "NaN"
    if x == float("inf"):
        return "Infinity"
    if x == float("-inf"):
        return "-Infinity"
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def expr_source(e: ast.Expr) -> str:
    if isinstance(e, ast.NumberLit):
        return format_number(e.value)
    if isinstance(e, ast.StringLit):
        return f'"{_escape(e.value)}"'
    if isinstance(e, ast.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, ast.NullLit):
        return "null"
    if isinstance(e, ast.Ident):
        return e.name
    if isinstance(e, ast.Binary):
        return f"({expr_source(e.left)} {e.op} {expr_source(e.right)})"
    if isinstance(e, ast.Unary):
        return f"({e.op}{expr_source(e.operand)})"
    if isinstance(e, ast.Call):
        args = ", ".join(expr_source(a) for a in e.args)
        return f"{expr_source(e.callee)}({args})"
    if isinstance(e, ast.Member):
        return f"{expr_source(e.object)}.{e.name}"
    if isinstance(e, ast.Index):
        return f"{expr_source(e.object)}[{expr_source(e.key)}]"
    if isinstance(e, ast.FunctionExpr):
        name = f" {e.name}" if e.name else ""
        return f"function{name}({', '.join(e.params)}) {block_source(e.body, 0)}"
    if isinstance(e, ast.ObjectLit):
        if not e.fields:
            return "({})"
        inner = ", ".join(f'"{_escape(k)}": {expr_source(v)}' for k, v in e.fields)
        return "({" + inner + "})"
    raise TypeError(f"unknown expression node: {e!r}")


def block_source(b: ast.Block, indent: int) -> str:
    pad = "  " * (indent + 1)
    lines = [stmt_source(s, indent + 1) for s in b.body]
    if not lines:
        return "{}"
    return "{\n" + "\n".join(pad + ln for ln in lines) + "\n" + "  " * indent + "}"


def stmt_source(s: ast.Stmt, indent: int = 0) -> str:
    if isinstance(s, ast.VarDecl):
        return f"var {s.name} = {expr_source(s.init)};"
    if isinstance(s, ast.Assign):
        return f"{expr_source(s.target)} = {expr_source(s.value)};"
    if isinstance(s, ast.Block):
        return block_source(s, indent)
    if isinstance(s, ast.If):
        out = f"if ({expr_source(s.cond)}) {block_source(s.then_block, indent)}"
        if s.else_block is not None:
            out += f" else {block_source(s.else_block, indent)}"
        return out
    if isinstance(s, ast.While):
        return f"while ({expr_source(s.cond)}) {block_source(s.body, indent)}"
    if isinstance(s, ast.FunctionDecl):
        return f"function {s.name}({', '.join(s.params)}) {block_source(s.body, indent)}"
    if isinstance(s, ast.Return):
        return "return;" if s.value is None else f"return {expr_source(s.value)};"
    if isinstance(s, ast.ExprStmt):
        return f"{expr_source(s.expr)};"
    raise TypeError(f"unknown statement node: {s!r}")


def program_source(p: ast.Program) -> str:
    return "\n".join(stmt_source(s, 0) for s in p.body) + "\n"
