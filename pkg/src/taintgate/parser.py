"""Recursive-descent parser.

Precedence, loosest first: || < && < equality < relational < additive <
multiplicative < unary < call/member/index. `else` binds to the nearest
`if`. Assignment is a statement, not an expression, and semicolons are
mandatory. Parsing is all-or-nothing per script.
"""

from __future__ import annotations

from . import syntax as ast
from .errors import ParseError
from .lexer import decode_string, tokenize
from .syntax import (BOOLEAN, EOF, IDENT, KEYWORD, NUMBER, OPERATOR, PUNCT,
                     STRING, Token)

_EQUALITY = ("==", "!=")
_RELATIONAL = ("<", "<=", ">", ">=")
_ADDITIVE = ("+", "-")
_MULTIPLICATIVE = ("*", "/", "%")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # --- token plumbing ---

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def check(self, kind: str, lexeme: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def match(self, kind: str, lexeme: str | None = None) -> Token | None:
        if self.check(kind, lexeme):
            return self.advance()
        return None

    def expect(self, kind: str, lexeme: str | None = None) -> Token:
        tok = self.peek()
        if not self.check(kind, lexeme):
            expected = lexeme if lexeme is not None else kind
            raise ParseError(f"expected {expected!r}, found {tok.lexeme!r}",
                             tok.line, tok.column, expected=str(expected), found=tok.lexeme)
        return self.advance()

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(f"{message}, found {tok.lexeme!r}", tok.line, tok.column,
                          expected=message, found=tok.lexeme)

    # --- statements ---

    def program(self) -> ast.Program:
        body = []
        first = self.peek()
        while not self.check(EOF):
            body.append(self.statement())
        return ast.Program(tuple(body), line=first.line, column=first.column)

    def statement(self) -> ast.Stmt:
        tok = self.peek()
        if self.check(KEYWORD, "var"):
            return self.var_decl()
        if self.check(KEYWORD, "function"):
            return self.function_decl()
        if self.check(KEYWORD, "if"):
            return self.if_stmt()
        if self.check(KEYWORD, "while"):
            return self.while_stmt()
        if self.check(KEYWORD, "return"):
            return self.return_stmt()
        if self.check(PUNCT, "{"):
            return self.block()
        expr = self.expression()
        if self.match(OPERATOR, "="):
            if not isinstance(expr, ast.LVALUE_TYPES):
                raise ParseError("invalid assignment target", tok.line, tok.column,
                                 expected="lvalue", found=type(expr).__name__)
            value = self.expression()
            self.expect(PUNCT, ";")
            return ast.Assign(expr, value, line=tok.line, column=tok.column)
        self.expect(PUNCT, ";")
        return ast.ExprStmt(expr, line=tok.line, column=tok.column)

    def var_decl(self) -> ast.VarDecl:
        kw = self.expect(KEYWORD, "var")
        name = self.expect(IDENT).lexeme
        self.expect(OPERATOR, "=")
        init = self.expression()
        self.expect(PUNCT, ";")
        return ast.VarDecl(name, init, line=kw.line, column=kw.column)

    def function_decl(self) -> ast.FunctionDecl:
        kw = self.expect(KEYWORD, "function")
        name = self.expect(IDENT).lexeme
        params = self.param_list()
        body = self.block()
        return ast.FunctionDecl(name, params, body, line=kw.line, column=kw.column)

    def param_list(self) -> tuple[str, ...]:
        self.expect(PUNCT, "(")
        params: list[str] = []
        if not self.check(PUNCT, ")"):
            params.append(self.expect(IDENT).lexeme)
            while self.match(PUNCT, ","):
                params.append(self.expect(IDENT).lexeme)
        self.expect(PUNCT, ")")
        return tuple(params)

    def if_stmt(self) -> ast.If:
        kw = self.expect(KEYWORD, "if")
        self.expect(PUNCT, "(")
        cond = self.expression()
        self.expect(PUNCT, ")")
        then_block = self.branch_body()
        else_block = None
        if self.match(KEYWORD, "else"):
            else_block = self.branch_body()
        return ast.If(cond, then_block, else_block, line=kw.line, column=kw.column)

    def while_stmt(self) -> ast.While:
        kw = self.expect(KEYWORD, "while")
        self.expect(PUNCT, "(")
        cond = self.expression()
        self.expect(PUNCT, ")")
        body = self.branch_body()
        return ast.While(cond, body, line=kw.line, column=kw.column)

    def branch_body(self) -> ast.Block:
        """A block, or a single statement wrapped in one."""
        if self.check(PUNCT, "{"):
            return self.block()
        stmt = self.statement()
        return ast.Block((stmt,), line=stmt.line, column=stmt.column)

    def return_stmt(self) -> ast.Return:
        kw = self.expect(KEYWORD, "return")
        value = None
        if not self.check(PUNCT, ";"):
            value = self.expression()
        self.expect(PUNCT, ";")
        return ast.Return(value, line=kw.line, column=kw.column)

    def block(self) -> ast.Block:
        brace = self.expect(PUNCT, "{")
        body = []
        while not self.check(PUNCT, "}"):
            if self.check(EOF):
                raise self.fail("expected '}'")
            body.append(self.statement())
        self.expect(PUNCT, "}")
        return ast.Block(tuple(body), line=brace.line, column=brace.column)

    # --- expressions ---

    def expression(self) -> ast.Expr:
        return self.or_expr()

    def binary_level(self, ops: tuple[str, ...], next_level) -> ast.Expr:
        left = next_level()
        while self.peek().kind == OPERATOR and self.peek().lexeme in ops:
            op = self.advance()
            right = next_level()
            left = ast.Binary(op.lexeme, left, right, line=op.line, column=op.column)
        return left

    def or_expr(self) -> ast.Expr:
        return self.binary_level(("||",), self.and_expr)

    def and_expr(self) -> ast.Expr:
        return self.binary_level(("&&",), self.equality)

    def equality(self) -> ast.Expr:
        return self.binary_level(_EQUALITY, self.relational)

    def relational(self) -> ast.Expr:
        return self.binary_level(_RELATIONAL, self.additive)

    def additive(self) -> ast.Expr:
        return self.binary_level(_ADDITIVE, self.multiplicative)

    def multiplicative(self) -> ast.Expr:
        return self.binary_level(_MULTIPLICATIVE, self.unary)

    def unary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind == OPERATOR and tok.lexeme in ("!", "-"):
            self.advance()
            operand = self.unary()
            return ast.Unary(tok.lexeme, operand, line=tok.line, column=tok.column)
        return self.postfix()

    def postfix(self) -> ast.Expr:
        expr = self.primary()
        while True:
            tok = self.peek()
            if self.match(PUNCT, "."):
                name = self.expect(IDENT).lexeme
                expr = ast.Member(expr, name, line=tok.line, column=tok.column)
            elif self.match(PUNCT, "["):
                key = self.expression()
                self.expect(PUNCT, "]")
                expr = ast.Index(expr, key, line=tok.line, column=tok.column)
            elif self.match(PUNCT, "("):
                args: list[ast.Expr] = []
                if not self.check(PUNCT, ")"):
                    args.append(self.expression())
                    while self.match(PUNCT, ","):
                        args.append(self.expression())
                self.expect(PUNCT, ")")
                expr = ast.Call(expr, tuple(args), line=tok.line, column=tok.column)
            else:
                return expr

    def primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            return ast.NumberLit(float(tok.lexeme), line=tok.line, column=tok.column)
        if tok.kind == STRING:
            self.advance()
            return ast.StringLit(decode_string(tok.lexeme), line=tok.line, column=tok.column)
        if tok.kind == BOOLEAN:
            self.advance()
            return ast.BoolLit(tok.lexeme == "true", line=tok.line, column=tok.column)
        if tok.kind == KEYWORD and tok.lexeme == "null":
            self.advance()
            return ast.NullLit(line=tok.line, column=tok.column)
        if tok.kind == KEYWORD and tok.lexeme == "function":
            return self.function_expr()
        if tok.kind == IDENT:
            self.advance()
            return ast.Ident(tok.lexeme, line=tok.line, column=tok.column)
        if self.match(PUNCT, "("):
            expr = self.expression()
            self.expect(PUNCT, ")")
            return expr
        if tok.lexeme == "{":
            return self.object_literal()
        raise self.fail("expected an expression")

    def function_expr(self) -> ast.FunctionExpr:
        kw = self.expect(KEYWORD, "function")
        name = None
        if self.peek().kind == IDENT:
            name = self.advance().lexeme
        params = self.param_list()
        body = self.block()
        return ast.FunctionExpr(params, body, name, line=kw.line, column=kw.column)

    def object_literal(self) -> ast.ObjectLit:
        brace = self.expect(PUNCT, "{")
        fields: list[tuple[str, ast.Expr]] = []
        if not self.check(PUNCT, "}"):
            fields.append(self.object_field())
            while self.match(PUNCT, ","):
                fields.append(self.object_field())
        self.expect(PUNCT, "}")
        return ast.ObjectLit(tuple(fields), line=brace.line, column=brace.column)

    def object_field(self) -> tuple[str, ast.Expr]:
        tok = self.peek()
        if tok.kind == IDENT:
            key = self.advance().lexeme
        elif tok.kind == STRING:
            key = decode_string(self.advance().lexeme)
        else:
            raise self.fail("expected an object key")
        self.expect(PUNCT, ":")
        return key, self.expression()


def parse(tokens: list[Token]) -> ast.Program:
    parser = _Parser(tokens)
    program = parser.program()
    parser.expect(EOF)
    return program


def parse_source(source: str) -> ast.Program:
    return parse(tokenize(source))
