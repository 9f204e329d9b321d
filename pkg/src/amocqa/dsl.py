"""Program language for box-model questions: AST, parser, printer, validator.

The language is a closed world: three query functions over a single
``four_box_model(...)`` run expression holding up to three parameter clauses.

    program  := query "(" "four_box_model" "(" [clause {"," clause}] ")" "," variable ")"
    query    := "FinalValue" | "ChangeSign" | "IncreaseOf"
    clause   := ("SetTo" | "IncreaseBy") "(" param "," number ")"

Identifiers are case-sensitive. The canonical printed form contains no
whitespace, and numbers render in their shortest exact decimal form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

QUERIES = ("FinalValue", "ChangeSign", "IncreaseOf")
CLAUSE_KINDS = ("SetTo", "IncreaseBy")
PARAMS = ("N", "Fwn", "Fws", "M_ek", "D_low0", "epsilon")
VARIABLES = ("M_n", "S_north", "S_south", "S_low", "S_deep", "T_low", "D_low")

MAX_CLAUSES = 3


class ProgramSyntaxError(Exception):
    """Malformed program text; carries position and the expected tokens."""

    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at position {position}: expected {expected}, found {found}")


class ValidationError(Exception):
    """Structurally parseable program violating a closed-world rule."""


@dataclass(frozen=True)
class Clause:
    kind: str     # "SetTo" | "IncreaseBy"
    param: str    # member of PARAMS
    value: float


@dataclass(frozen=True)
class RunExpr:
    clauses: tuple[Clause, ...]


@dataclass(frozen=True)
class Program:
    query: str     # member of QUERIES
    run: RunExpr
    variable: str  # member of VARIABLES


def program(query: str, clauses: list | tuple, variable: str) -> Program:
    """Convenience constructor from a clause list."""
    return Program(query=query, run=RunExpr(clauses=tuple(clauses)), variable=variable)


def render_number(value: float) -> str:
    """Canonical numeric literal: integer form when exact, else shortest repr."""
    v = float(value)
    if math.isfinite(v) and v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


_PUNCT = "(),"


class _Lexer:
    """Single-line tokenizer producing (kind, text, position) triples."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> tuple[str, str, int]:
        saved = self.pos
        tok = self.next()
        self.pos = saved
        return tok

    def next(self) -> tuple[str, str, int]:
        self._skip_ws()
        start = self.pos
        if self.pos >= len(self.text):
            return ("end", "", start)
        ch = self.text[self.pos]
        if ch in _PUNCT:
            self.pos += 1
            return ("punct", ch, start)
        if ch.isalpha() or ch == "_":
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            return ("ident", self.text[start:self.pos], start)
        if ch.isdigit() or ch == "-" or ch == ".":
            end = self.pos
            if self.text[end] == "-":
                end += 1
            while end < len(self.text) and (self.text[end].isdigit() or self.text[end] == "."):
                end += 1
            if end < len(self.text) and self.text[end] in "eE":
                mark = end
                end += 1
                if end < len(self.text) and self.text[end] in "+-":
                    end += 1
                if end < len(self.text) and self.text[end].isdigit():
                    while end < len(self.text) and self.text[end].isdigit():
                        end += 1
                else:
                    end = mark
            literal = self.text[start:end]
            try:
                value = float(literal)
            except ValueError:
                raise ProgramSyntaxError(start, "a number", repr(literal)) from None
            self.pos = end
            return ("number", literal, start)
        raise ProgramSyntaxError(start, "an identifier, number, or punctuation", repr(ch))


class _Parser:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)

    def _expect_punct(self, ch: str) -> None:
        kind, text, pos = self.lexer.next()
        if kind != "punct" or text != ch:
            raise ProgramSyntaxError(pos, repr(ch), repr(text) if text else "end of input")

    def _expect_ident(self, allowed: tuple[str, ...], what: str) -> str:
        kind, text, pos = self.lexer.next()
        if kind != "ident":
            raise ProgramSyntaxError(pos, what, repr(text) if text else "end of input")
        if text not in allowed:
            raise ValidationError(f"at position {pos}: unknown {what} {text!r}")
        return text

    def _expect_number(self) -> float:
        kind, text, pos = self.lexer.next()
        if kind != "number":
            raise ProgramSyntaxError(pos, "a number", repr(text) if text else "end of input")
        return float(text)

    def parse_program(self) -> Program:
        query = self._expect_ident(QUERIES, "query function")
        self._expect_punct("(")
        kind, text, pos = self.lexer.next()
        if kind != "ident" or text != "four_box_model":
            raise (
                ValidationError(f"at position {pos}: unknown run function {text!r}")
                if kind == "ident"
                else ProgramSyntaxError(pos, "'four_box_model'", repr(text) if text else "end of input")
            )
        self._expect_punct("(")
        clauses: list[Clause] = []
        kind, text, _ = self.lexer.peek()
        if not (kind == "punct" and text == ")"):
            clauses.append(self._parse_clause())
            while True:
                kind, text, _ = self.lexer.peek()
                if kind == "punct" and text == ",":
                    self.lexer.next()
                    clauses.append(self._parse_clause())
                else:
                    break
        self._expect_punct(")")
        self._expect_punct(",")
        variable = self._expect_ident(VARIABLES, "variable")
        self._expect_punct(")")
        kind, text, pos = self.lexer.next()
        if kind != "end":
            raise ProgramSyntaxError(pos, "end of input", repr(text))
        return Program(query=query, run=RunExpr(clauses=tuple(clauses)), variable=variable)

    def _parse_clause(self) -> Clause:
        kind_name = self._expect_ident(CLAUSE_KINDS, "clause function")
        self._expect_punct("(")
        param = self._expect_ident(PARAMS, "parameter")
        self._expect_punct(",")
        value = self._expect_number()
        self._expect_punct(")")
        return Clause(kind=kind_name, param=param, value=value)


def parse(text: str) -> Program:
    """Parse program text into an AST.

    Raises
    ------
    ProgramSyntaxError
        On malformed text, with position and expected token.
    ValidationError
        On unknown names or clause-count/duplicate-parameter violations.
    """
    ast = _Parser(text).parse_program()
    violations = validate(ast)
    if violations:
        raise ValidationError("; ".join(violations))
    return ast


def validate(p: Program) -> list[str]:
    """Return the list of closed-world rules the program breaks (empty if valid)."""
    violations: list[str] = []
    if p.query not in QUERIES:
        violations.append(f"UnknownQuery({p.query})")
    if p.variable not in VARIABLES:
        violations.append(f"UnknownVariable({p.variable})")
    if len(p.run.clauses) > MAX_CLAUSES:
        violations.append("TooManyClauses")
    seen: set[str] = set()
    for clause in p.run.clauses:
        if clause.kind not in CLAUSE_KINDS:
            violations.append(f"UnknownClauseKind({clause.kind})")
        if clause.param not in PARAMS:
            violations.append(f"UnknownParam({clause.param})")
        elif clause.param in seen:
            violations.append(f"DuplicateParam({clause.param})")
        else:
            seen.add(clause.param)
        if not math.isfinite(clause.value):
            violations.append(f"NonFiniteValue({clause.param})")
        if clause.param == "N" and (clause.value != int(clause.value) or clause.value < 1):
            violations.append("InvalidStepCount")
    return violations


def print_program(p: Program) -> str:
    """Canonical single-line form with no whitespace."""
    body = ",".join(
        f"{c.kind}({c.param},{render_number(c.value)})" for c in p.run.clauses
    )
    return f"{p.query}(four_box_model({body}),{p.variable})"
