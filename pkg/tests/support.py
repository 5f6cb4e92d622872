"""Shared helpers for the test suite: bare program runs against a fresh
engine, global inspection, and the random boolean-program generator used
by the nsu soundness oracle."""

from __future__ import annotations

import random

from taintgate.engine import Engine
from taintgate.labels import PUBLIC, Label, domain
from taintgate.parser import parse_source
from taintgate.runtime import TaintedValue

HOST = "h.example"
SECRET = domain(HOST)

BUILTIN_NAMES = {"document", "sendRequest", "fetch", "strlen", "toNumber"}


def run_program(source: str, inputs: dict[str, TaintedValue] | None = None,
                mode: str = "upgrade", host: str = HOST,
                policy: bool = False) -> Engine:
    engine = Engine(host, mode=mode)
    for name, tv in (inputs or {}).items():
        engine.globals.declare(name, tv)
    engine.run_script("prog", source, host, policy=policy)
    return engine


def global_tv(engine: Engine, name: str) -> TaintedValue:
    slot = engine.globals.lookup(name)
    assert slot is not None, f"global {name!r} not defined"
    return slot.value


def parse_expr(source: str):
    """Parse a single expression statement and return the expression node."""
    program = parse_source(source if source.endswith(";") else source + ";")
    return program.body[0].expr


def error_kinds(engine: Engine) -> list[str]:
    return [err["kind"] for err in engine.errors]


# --- random boolean programs for the nsu two-run oracle ---

BOOL_NAMES = ("s0", "s1", "p0", "p1", "t0", "t1", "t2")
WRITABLE = ("p0", "p1", "t0", "t1", "t2")


def gen_bool_program(rng: random.Random, max_statements: int = 12) -> str:
    """Straight-line-plus-branches program over boolean variables.

    s* are secret inputs and p* public inputs, both seeded into the global
    environment before the run; t* are temporaries declared up front. The
    statement budget counts every generated statement, nested ones
    included.
    """
    lines = ["var t0 = false;", "var t1 = true;", "var t2 = false;"]
    budget = [max_statements - len(lines)]

    def expr(depth: int) -> str:
        if depth <= 0 or rng.random() < 0.4:
            return rng.choice(BOOL_NAMES + ("true", "false"))
        op = rng.choice(("&&", "||", "==", "!="))
        if rng.random() < 0.2:
            return f"(!{expr(depth - 1)})"
        return f"({expr(depth - 1)} {op} {expr(depth - 1)})"

    def statement(depth: int) -> str:
        budget[0] -= 1
        if depth >= 2 or budget[0] <= 1 or rng.random() < 0.55:
            return f"{rng.choice(WRITABLE)} = {expr(2)};"
        then_body = " ".join(statement(depth + 1)
                             for _ in range(rng.randint(1, 2)) if budget[0] > 0)
        if rng.random() < 0.5 and budget[0] > 0:
            else_body = " ".join(statement(depth + 1)
                                 for _ in range(rng.randint(1, 2)) if budget[0] > 0)
            return f"if ({expr(2)}) {{ {then_body} }} else {{ {else_body} }}"
        return f"if ({expr(2)}) {{ {then_body} }}"

    while budget[0] > 0:
        lines.append(statement(0))
    return "\n".join(lines)


def run_nsu_program(source: str, secrets: dict[str, bool],
                    publics: dict[str, bool]) -> tuple[bool, dict]:
    """Run one variant in nsu mode. Returns (raised_implicit_flow, snapshot)
    where snapshot maps every program global to (payload, label)."""
    inputs = {name: TaintedValue(val, SECRET) for name, val in secrets.items()}
    inputs.update({name: TaintedValue(val, PUBLIC) for name, val in publics.items()})
    engine = run_program(source, inputs, mode="nsu")
    implicit = any(err["kind"] == "implicit-flow" for err in engine.errors)
    unexpected = [err for err in engine.errors if err["kind"] != "implicit-flow"]
    assert not unexpected, f"unexpected errors: {unexpected}\n{source}"
    snapshot = {}
    for name, slot in engine.globals.bindings.items():
        if name in BUILTIN_NAMES:
            continue
        snapshot[name] = (slot.value.payload, slot.value.label)
    return implicit, snapshot


def low_projection(snapshot: dict) -> dict:
    return {name: payload for name, (payload, label) in snapshot.items()
            if label == PUBLIC}


def nsu_two_run_holds(source: str, publics: dict[str, bool]) -> bool:
    """Brute-force all secret assignments; every terminating pair must agree
    on public-labeled globals."""
    outcomes = []
    for s0 in (False, True):
        for s1 in (False, True):
            outcomes.append(run_nsu_program(source, {"s0": s0, "s1": s1}, publics))
    for i, (err_a, snap_a) in enumerate(outcomes):
        for err_b, snap_b in outcomes[i + 1:]:
            if err_a or err_b:
                continue
            if low_projection(snap_a) != low_projection(snap_b):
                return False
    return True
