"""Operational semantics for programs: resolve clauses, run, evaluate queries.

``SetTo(p, v)`` assigns a parameter, ``IncreaseBy(p, d)`` adds to the default;
the query then reduces the selected variable's series to a number or boolean.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .boxmodel import (
    Constants,
    DEFAULT_CONSTANTS,
    Params,
    RunOutput,
    default_params,
    run,
    validate_params,
)
from .dsl import Program, RunExpr

# Relative threshold separating genuine increases from roundoff drift.
INCREASE_REL_TOL = 1e-9

UNITS = {
    "M_n": "m³/s",
    "S_north": "psu",
    "S_south": "psu",
    "S_low": "psu",
    "S_deep": "psu",
    "T_low": "°C",
    "D_low": "m",
}


@dataclass(frozen=True)
class Answer:
    """Result of a query: a number for FinalValue, a truth value otherwise."""

    kind: str               # "number" | "bool"
    value: float | bool
    unit: str
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "unit": self.unit}


def resolve(run_expr: RunExpr, constants: Constants = DEFAULT_CONSTANTS) -> Params:
    """Turn a clause list into run parameters, starting from the defaults.

    ``IncreaseBy`` perturbs the default value, not a previously set one;
    duplicate parameters are rejected upstream by program validation.
    """
    defaults = default_params()
    updates: dict[str, float] = {}
    for clause in run_expr.clauses:
        base = getattr(defaults, clause.param)
        value = clause.value if clause.kind == "SetTo" else base + clause.value
        updates[clause.param] = value
    if "N" in updates:
        updates["N"] = int(updates["N"])
    params = replace(defaults, **updates)
    validate_params(params, constants)
    return params


def changes_sign(series: list[float]) -> bool:
    """True iff some element's sign differs from the initial sign.

    A zero matches either sign, so only a strict flip counts.
    """
    first = series[0]
    if first == 0.0:
        return any(v != 0.0 for v in series)
    return any(v * first < 0.0 for v in series)


def run_program(
    p: Program, constants: Constants = DEFAULT_CONSTANTS
) -> tuple[Answer, RunOutput]:
    """Execute a program and return both the answer and the full run output."""
    params = resolve(p.run, constants)
    out = run(params, constants)
    series = out.series(p.variable)
    warnings = tuple(out.warnings)
    if p.query == "FinalValue":
        answer = Answer("number", series[-1], UNITS[p.variable], warnings)
    elif p.query == "ChangeSign":
        answer = Answer("bool", changes_sign(series), "", warnings)
    elif p.query == "IncreaseOf":
        grew = series[-1] - series[0] > INCREASE_REL_TOL * abs(series[0])
        answer = Answer("bool", grew, "", warnings)
    else:
        raise ValueError(f"unknown query {p.query!r}")
    return answer, out


def execute(p: Program, constants: Constants = DEFAULT_CONSTANTS) -> Answer:
    """Execute a program and return its answer."""
    return run_program(p, constants)[0]
