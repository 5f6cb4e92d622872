"""taintgate: a deterministic mini-browser with fine-grained taint
tracking, privileged policy handlers, and a mediated network sink."""

from .engine import Engine
from .errors import (EngineError, ImplicitFlowError, LexError, MalformedLabel,
                     ParseError, PolicyInstallError, PolicyOriginError,
                     PrivilegeError, ProtectedElementError, SchemaError,
                     TypeMismatch, UndefinedVariable)
from .labels import (LOCAL, PUBLIC, Label, domain, flow_permitted, join,
                     label_text, leq, parse_label)
from .ni import NiVerdict, check_ni
from .runner import RunResult, check_expectations, run_scenario
from .runtime import TaintedValue
from .scenario import Scenario, load_scenario, scenario_from_dict

__all__ = [
    "Engine", "EngineError", "ImplicitFlowError", "LexError", "MalformedLabel",
    "ParseError", "PolicyInstallError", "PolicyOriginError", "PrivilegeError",
    "ProtectedElementError", "SchemaError", "TypeMismatch", "UndefinedVariable",
    "LOCAL", "PUBLIC", "Label", "domain", "flow_permitted", "join",
    "label_text", "leq", "parse_label",
    "NiVerdict", "check_ni",
    "RunResult", "check_expectations", "run_scenario",
    "TaintedValue",
    "Scenario", "load_scenario", "scenario_from_dict",
]
