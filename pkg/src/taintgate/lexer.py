"""Hand-rolled lexer: `//` comments, double-quoted strings with
\\" \\\\ \\n escapes, decimal numbers, and the operator set the parser knows."""

from __future__ import annotations

from .errors import LexError
from .syntax import (BOOLEAN, EOF, IDENT, KEYWORD, KEYWORDS, NUMBER, OPERATOR,
                     PUNCT, STRING, Token)

_TWO_CHAR_OPS = ("==", "!=", "<=", ">=", "&&", "||")
_ONE_CHAR_OPS = "=!<>+-*/%"
_PUNCT = "(){}[];,.:"


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            word = source[i:j]
            advance(j - i)
            if word in ("true", "false"):
                tokens.append(Token(BOOLEAN, word, start_line, start_col))
            elif word in KEYWORDS:
                tokens.append(Token(KEYWORD, word, start_line, start_col))
            else:
                tokens.append(Token(IDENT, word, start_line, start_col))
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            lexeme = source[i:j]
            advance(j - i)
            tokens.append(Token(NUMBER, lexeme, start_line, start_col))
            continue
        if ch == '"':
            start = i
            advance()
            closed = False
            while i < n:
                c = source[i]
                if c == '"':
                    advance()
                    closed = True
                    break
                if c == "\n":
                    break
                if c == "\\":
                    if i + 1 >= n:
                        break
                    esc = source[i + 1]
                    if esc not in ('"', "\\", "n"):
                        raise LexError(f"unsupported escape \\{esc}", line, col)
                    advance(2)
                    continue
                advance()
            if not closed:
                raise LexError("unterminated string literal", start_line, start_col)
            tokens.append(Token(STRING, source[start:i], start_line, start_col))
            continue
        two = source[i:i + 2]
        if two in _TWO_CHAR_OPS:
            advance(2)
            tokens.append(Token(OPERATOR, two, start_line, start_col))
            continue
        if ch in _ONE_CHAR_OPS:
            advance()
            tokens.append(Token(OPERATOR, ch, start_line, start_col))
            continue
        if ch in _PUNCT:
            advance()
            tokens.append(Token(PUNCT, ch, start_line, start_col))
            continue
        raise LexError(f"illegal character {ch!r}", start_line, start_col)

    tokens.append(Token(EOF, "<eof>", line, col))
    return tokens


def decode_string(lexeme: str) -> str:
    """Strip quotes and resolve escapes in a STRING token's raw lexeme."""
    body = lexeme[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            nxt = body[i + 1]
            out.append({"\\": "\\", '"': '"', "n": "\n"}[nxt])
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)
