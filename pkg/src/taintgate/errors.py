"""Error types recorded by the engine.

Every error carries a stable ``kind`` string used in report serialization.
Script and handler errors are record-and-continue: they abort the current
script or handler, land in the report, and never kill the whole run.
"""

from __future__ import annotations


class EngineError(Exception):
    kind = "engine"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if self.line is not None:
            return f"{self.message} (line {self.line}, col {self.column})"
        return self.message


class LexError(EngineError):
    kind = "lex"


class ParseError(EngineError):
    kind = "parse"

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 expected: str = "", found: str = ""):
        super().__init__(message, line, column)
        self.expected = expected
        self.found = found


class MalformedLabel(EngineError):
    kind = "malformed-label"


class TypeMismatch(EngineError):
    kind = "type"


class UndefinedVariable(EngineError):
    kind = "undefined-variable"


class RuntimeFault(EngineError):
    """Miscellaneous runtime failures (return outside a function, step budget)."""
    kind = "runtime"


class ImplicitFlowError(EngineError):
    """Raised in nsu mode when a write's target label does not dominate the pc."""
    kind = "implicit-flow"


class PrivilegeError(EngineError):
    """Unprivileged code called a label-setting builtin."""
    kind = "privilege"


class PolicyInstallError(EngineError):
    """Privileged handler registration attempted after page load."""
    kind = "policy-install"


class ProtectedElementError(EngineError):
    """Unprivileged structural mutation of an element bearing a policy handler."""
    kind = "protected-element"


class SchemaError(EngineError):
    """Scenario file fails validation; message includes a JSON path."""
    kind = "schema"


class PolicyOriginError(EngineError):
    """A policy script whose origin is not the host domain."""
    kind = "policy-origin"
