"""Token and AST node definitions for the scripting language.

Positions are carried on every node but excluded from equality, so two
parses compare structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

# Token kinds
IDENT = "identifier"
NUMBER = "number"
STRING = "string"
BOOLEAN = "boolean"
KEYWORD = "keyword"
OPERATOR = "operator"
PUNCT = "punctuation"
EOF = "eof"

KEYWORDS = frozenset({"var", "if", "else", "while", "function", "return", "null"})


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    column: int


@dataclass(frozen=True)
class Node:
    line: int = field(compare=False, kw_only=True, default=0)
    column: int = field(compare=False, kw_only=True, default=0)


# --- expressions ---

@dataclass(frozen=True)
class NumberLit(Node):
    value: float


@dataclass(frozen=True)
class StringLit(Node):
    value: str


@dataclass(frozen=True)
class BoolLit(Node):
    value: bool


@dataclass(frozen=True)
class NullLit(Node):
    pass


@dataclass(frozen=True)
class Ident(Node):
    name: str


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Call(Node):
    callee: "Expr"
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Member(Node):
    object: "Expr"
    name: str


@dataclass(frozen=True)
class Index(Node):
    object: "Expr"
    key: "Expr"


@dataclass(frozen=True)
class FunctionExpr(Node):
    params: tuple[str, ...]
    body: "Block"
    name: Optional[str] = None  # inline name, for logs only


@dataclass(frozen=True)
class ObjectLit(Node):
    fields: tuple[tuple[str, "Expr"], ...]


Expr = Union[NumberLit, StringLit, BoolLit, NullLit, Ident, Binary, Unary,
             Call, Member, Index, FunctionExpr, ObjectLit]

LVALUE_TYPES = (Ident, Member, Index)


# --- statements ---

@dataclass(frozen=True)
class VarDecl(Node):
    name: str
    init: Expr


@dataclass(frozen=True)
class Assign(Node):
    target: Expr  # Ident | Member | Index
    value: Expr


@dataclass(frozen=True)
class Block(Node):
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class If(Node):
    cond: Expr
    then_block: Block
    else_block: Optional[Block]


@dataclass(frozen=True)
class While(Node):
    cond: Expr
    body: Block


@dataclass(frozen=True)
class FunctionDecl(Node):
    name: str
    params: tuple[str, ...]
    body: Block


@dataclass(frozen=True)
class Return(Node):
    value: Optional[Expr]


@dataclass(frozen=True)
class ExprStmt(Node):
    expr: Expr


Stmt = Union[VarDecl, Assign, Block, If, While, FunctionDecl, Return, ExprStmt]


@dataclass(frozen=True)
class Program(Node):
    body: tuple[Stmt, ...]
