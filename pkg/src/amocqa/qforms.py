"""Question form registry and the deterministic reference translator.

Each form pairs a natural-language template with a program builder. The
registry supports three operations: ``instantiate`` renders a question and its
program from slot bindings, ``match_question`` inverts a question back to
(form, binding, program), and ``canonical_question`` phrases a program using
each form's first synonym choice.

Forms are tried in ascending id order during matching; where one form's
language contains another's (the generalized multi-clause forms subsume the
fixed-shape ones), the lowest id wins, and both build identical programs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import dsl
from .dsl import Clause, Program, print_program, program, render_number

NON_N_PARAMS = ("Fwn", "Fws", "M_ek", "D_low0", "epsilon")

# Each parameter may be mentioned by symbol or by its noun phrase.
PARAM_PHRASES = {
    "Fwn": ("Fwn", "the freshwater flux in the northern ocean"),
    "Fws": ("Fws", "the freshwater flux in the southern ocean"),
    "M_ek": ("M_ek", "the Ekman transport"),
    "D_low0": ("D_low0", "the start depth of the low box"),
    "epsilon": ("epsilon", "the overturning friction coefficient"),
}

# Variables reachable from the increase-query form and their phrasings.
VARIABLE_PHRASES = {
    "M_n": ("M_n", "the AMOC"),
    "S_north": ("salinity in the northern box",),
    "T_low": ("temperature in the low latitude box",),
}

_PHRASE_TO_PARAM = {
    phrase.lower(): param
    for param, phrases in PARAM_PHRASES.items()
    for phrase in phrases
}
_PHRASE_TO_VARIABLE = {
    phrase.lower(): var
    for var, phrases in VARIABLE_PHRASES.items()
    for phrase in phrases
}

_NUM = r"(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
_SYM = "(" + "|".join(NON_N_PARAMS) + ")"
_MENTION = "(" + "|".join(p for ps in PARAM_PHRASES.values() for p in ps) + ")"
_VARPHRASE = "(" + "|".join(p for ps in VARIABLE_PHRASES.values() for p in ps) + ")"


class UnknownForm(Exception):
    """form_id outside the registry."""


class InvalidBinding(Exception):
    """Binding does not satisfy the form's slot specification."""


class NoMatch(Exception):
    """Question text is outside the registry's language."""


class NotExpressible(Exception):
    """No form builds the given program."""


@dataclass(frozen=True)
class MatchResult:
    form_id: int
    binding: dict
    program: Program


def _slot(binding: dict, key):
    if key in binding:
        return binding[key]
    alt = str(key) if isinstance(key, int) else key
    if alt in binding:
        return binding[alt]
    raise InvalidBinding(f"missing slot {key!r}")


def _value_literal(value) -> str:
    """Normalize a slot value to its question/program literal string."""
    if isinstance(value, str):
        try:
            float(value)
        except ValueError:
            raise InvalidBinding(f"not a number: {value!r}") from None
        return value
    return render_number(float(value))


def _count_literal(value) -> str:
    lit = _value_literal(value)
    v = float(lit)
    if v != int(v) or v < 1:
        raise InvalidBinding(f"step count must be a positive integer, got {lit}")
    return lit


def _check_param(name: str) -> str:
    if name not in NON_N_PARAMS:
        raise InvalidBinding(f"parameter {name!r} not allowed in this slot")
    return name


def _checked(prog: Program) -> Program:
    violations = dsl.validate(prog)
    if violations:
        raise InvalidBinding("; ".join(violations))
    return prog


def _admissible(prog: Program) -> Program | None:
    """Return the program if it passes validation, else None (for matching)."""
    return None if dsl.validate(prog) else prog


def _syn_index(syn: dict, key: str, options: int) -> int:
    idx = syn.get(key, 0)
    if not isinstance(idx, int) or not 0 <= idx < options:
        raise InvalidBinding(f"synonym choice {key}={idx!r} out of range")
    return idx


class _Form1:
    form_id = 1
    template = "What is the value of M_n at time step {1} if {2} is {3}?"
    slots = {"1": "step count", "2": "parameter symbol", "3": "number"}
    synonyms: dict = {}
    clause_counts = (2,)
    _rx = re.compile(
        rf"^What is the value of M_n at time step {_NUM} if {_SYM} is {_NUM}\?$",
        re.IGNORECASE,
    )

    def build(self, binding: dict, syn: dict):
        n_lit = _count_literal(_slot(binding, 1))
        param = _check_param(_slot(binding, 2))
        v_lit = _value_literal(_slot(binding, 3))
        question = f"What is the value of M_n at time step {n_lit} if {param} is {v_lit}?"
        prog = _checked(
            program(
                "FinalValue",
                [Clause("SetTo", "N", float(n_lit)), Clause("SetTo", param, float(v_lit))],
                "M_n",
            )
        )
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        n_lit, p_raw, v_lit = m.groups()
        param = _PHRASE_TO_PARAM[p_raw.lower()]
        prog = _admissible(
            program(
                "FinalValue",
                [Clause("SetTo", "N", float(n_lit)), Clause("SetTo", param, float(v_lit))],
                "M_n",
            )
        )
        if prog is None:
            return None
        return MatchResult(self.form_id, {1: n_lit, 2: param, 3: v_lit}, prog)

    def variant_count(self) -> int:
        return len(NON_N_PARAMS)


class _SingleSetForm:
    """Shared machinery for forms 3 and 4 (one SetTo clause, M_n query)."""

    query: str
    form_id: int
    template: str
    slots = {"1": "parameter symbol", "2": "number"}
    synonyms: dict = {}
    clause_counts = (1,)
    _rx: re.Pattern

    def _question(self, param: str, v_lit: str) -> str:
        raise NotImplementedError

    def build(self, binding: dict, syn: dict):
        param = _check_param(_slot(binding, 1))
        v_lit = _value_literal(_slot(binding, 2))
        prog = _checked(
            program(self.query, [Clause("SetTo", param, float(v_lit))], "M_n")
        )
        return self._question(param, v_lit), prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        p_raw, v_lit = m.groups()
        param = _PHRASE_TO_PARAM[p_raw.lower()]
        prog = _admissible(
            program(self.query, [Clause("SetTo", param, float(v_lit))], "M_n")
        )
        if prog is None:
            return None
        return MatchResult(self.form_id, {1: param, 2: v_lit}, prog)

    def variant_count(self) -> int:
        return len(NON_N_PARAMS)


class _Form3(_SingleSetForm):
    form_id = 3
    query = "FinalValue"
    template = "What is the final value of the AMOC when {1} is {2}?"
    _rx = re.compile(
        rf"^What is the final value of the AMOC when {_SYM} is {_NUM}\?$", re.IGNORECASE
    )

    def _question(self, param: str, v_lit: str) -> str:
        return f"What is the final value of the AMOC when {param} is {v_lit}?"


class _Form4(_SingleSetForm):
    form_id = 4
    query = "ChangeSign"
    template = "Does {1} collapse the AMOC at {2}?"
    _rx = re.compile(rf"^Does {_SYM} collapse the AMOC at {_NUM}\?$", re.IGNORECASE)

    def _question(self, param: str, v_lit: str) -> str:
        return f"Does {param} collapse the AMOC at {v_lit}?"


class _Form2:
    form_id = 2
    template = "If {1} is {2} and {3} is {4}, does the AMOC collapse?"
    slots = {
        "1": "parameter symbol",
        "2": "number",
        "3": "parameter symbol",
        "4": "number",
    }
    synonyms: dict = {}
    clause_counts = (2,)
    _rx = re.compile(
        rf"^If {_SYM} is {_NUM} and {_SYM} is {_NUM}, does the AMOC collapse\?$",
        re.IGNORECASE,
    )

    def build(self, binding: dict, syn: dict):
        p1 = _check_param(_slot(binding, 1))
        v1 = _value_literal(_slot(binding, 2))
        p2 = _check_param(_slot(binding, 3))
        v2 = _value_literal(_slot(binding, 4))
        prog = _checked(
            program(
                "ChangeSign",
                [Clause("SetTo", p1, float(v1)), Clause("SetTo", p2, float(v2))],
                "M_n",
            )
        )
        question = f"If {p1} is {v1} and {p2} is {v2}, does the AMOC collapse?"
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        p1_raw, v1, p2_raw, v2 = m.groups()
        p1 = _PHRASE_TO_PARAM[p1_raw.lower()]
        p2 = _PHRASE_TO_PARAM[p2_raw.lower()]
        prog = _admissible(
            program(
                "ChangeSign",
                [Clause("SetTo", p1, float(v1)), Clause("SetTo", p2, float(v2))],
                "M_n",
            )
        )
        if prog is None:
            return None
        return MatchResult(self.form_id, {1: p1, 2: v1, 3: p2, 4: v2}, prog)

    def variant_count(self) -> int:
        n = len(NON_N_PARAMS)
        return n * (n - 1)


class _Form5:
    form_id = 5
    template = "If I set {1} to {2}, {3} to {4}, and {5} to {6}, will M_n increase?"
    slots = {str(i): ("parameter symbol" if i % 2 else "number") for i in range(1, 7)}
    synonyms: dict = {}
    clause_counts = (3,)
    _rx = re.compile(
        rf"^If I set {_SYM} to {_NUM}, {_SYM} to {_NUM}, and {_SYM} to {_NUM}, "
        rf"will M_n increase\?$",
        re.IGNORECASE,
    )

    def build(self, binding: dict, syn: dict):
        parts = []
        clauses = []
        for i in (1, 3, 5):
            param = _check_param(_slot(binding, i))
            v_lit = _value_literal(_slot(binding, i + 1))
            parts.append((param, v_lit))
            clauses.append(Clause("SetTo", param, float(v_lit)))
        prog = _checked(program("IncreaseOf", clauses, "M_n"))
        question = (
            f"If I set {parts[0][0]} to {parts[0][1]}, {parts[1][0]} to {parts[1][1]}, "
            f"and {parts[2][0]} to {parts[2][1]}, will M_n increase?"
        )
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        g = m.groups()
        pairs = [(_PHRASE_TO_PARAM[g[i].lower()], g[i + 1]) for i in (0, 2, 4)]
        prog = _admissible(
            program(
                "IncreaseOf",
                [Clause("SetTo", p, float(v)) for p, v in pairs],
                "M_n",
            )
        )
        if prog is None:
            return None
        binding = {}
        for i, (p, v) in zip((1, 3, 5), pairs):
            binding[i] = p
            binding[i + 1] = v
        return MatchResult(self.form_id, binding, prog)

    def variant_count(self) -> int:
        n = len(NON_N_PARAMS)
        return n * (n - 1) * (n - 2)


class _SingleIncreaseForm:
    """Shared machinery for forms 6 and 7 (one IncreaseBy clause)."""

    form_id: int
    variable: str
    tail: str
    slots = {"1": "parameter symbol", "2": "number"}
    synonyms: dict = {}
    clause_counts = (1,)
    _rx: re.Pattern

    @property
    def template(self) -> str:
        return f"If I increase {{1}} by {{2}}, will {self.tail} increase?"

    def build(self, binding: dict, syn: dict):
        param = _check_param(_slot(binding, 1))
        d_lit = _value_literal(_slot(binding, 2))
        prog = _checked(
            program("IncreaseOf", [Clause("IncreaseBy", param, float(d_lit))], self.variable)
        )
        question = f"If I increase {param} by {d_lit}, will {self.tail} increase?"
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        p_raw, d_lit = m.groups()
        param = _PHRASE_TO_PARAM[p_raw.lower()]
        prog = _admissible(
            program("IncreaseOf", [Clause("IncreaseBy", param, float(d_lit))], self.variable)
        )
        if prog is None:
            return None
        return MatchResult(self.form_id, {1: param, 2: d_lit}, prog)

    def variant_count(self) -> int:
        return len(NON_N_PARAMS)


class _Form6(_SingleIncreaseForm):
    form_id = 6
    variable = "M_n"
    tail = "M_n"
    _rx = re.compile(
        rf"^If I increase {_SYM} by {_NUM}, will M_n increase\?$", re.IGNORECASE
    )


class _Form7(_SingleIncreaseForm):
    form_id = 7
    variable = "S_north"
    tail = "salinity in the northern box"
    _rx = re.compile(
        rf"^If I increase {_SYM} by {_NUM}, will salinity in the northern box increase\?$",
        re.IGNORECASE,
    )


def _join_mentions(parts: list[str]) -> str:
    """Comma-join clause mentions, adding "and" only for three clauses."""
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]}, {parts[1]}"
    return f"{parts[0]}, {parts[1]}, and {parts[2]}"


class _Form8:
    form_id = 8
    template = "{opener} {param} to {value}, ..., will M_n increase?"
    slots = {"params": "1-3 distinct parameter names", "values": "matching numbers"}
    synonyms = {
        "opener": ("If I set", "Setting"),
        "mentions": ("symbol", "noun phrase"),
    }
    clause_counts = (1, 2, 3)
    _openers = ("If I set", "Setting")
    _rx = re.compile(
        rf"^(If I set|Setting) {_MENTION} to {_NUM}"
        rf"(?:, {_MENTION} to {_NUM}(?:, and {_MENTION} to {_NUM})?)?"
        rf", will M_n increase\?$",
        re.IGNORECASE,
    )

    def build(self, binding: dict, syn: dict):
        params = tuple(_slot(binding, "params"))
        values = tuple(_slot(binding, "values"))
        if not 1 <= len(params) <= 3 or len(values) != len(params):
            raise InvalidBinding("params and values must align with 1-3 clauses")
        opener = self._openers[_syn_index(syn, "opener", 2)]
        mentions = tuple(syn.get("mentions", (0,) * len(params)))
        if len(mentions) != len(params):
            raise InvalidBinding("mentions must align with params")
        parts = []
        clauses = []
        for param, value, mention in zip(params, values, mentions):
            _check_param(param)
            if mention not in (0, 1):
                raise InvalidBinding(f"mention choice {mention!r} out of range")
            v_lit = _value_literal(value)
            parts.append(f"{PARAM_PHRASES[param][mention]} to {v_lit}")
            clauses.append(Clause("SetTo", param, float(v_lit)))
        prog = _checked(program("IncreaseOf", clauses, "M_n"))
        question = f"{opener} {_join_mentions(parts)}, will M_n increase?"
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        g = m.groups()
        pairs = [
            (_PHRASE_TO_PARAM[g[i].lower()], g[i + 1])
            for i in (1, 3, 5)
            if g[i] is not None
        ]
        prog = _admissible(
            program(
                "IncreaseOf",
                [Clause("SetTo", p, float(v)) for p, v in pairs],
                "M_n",
            )
        )
        if prog is None:
            return None
        binding = {
            "params": tuple(p for p, _ in pairs),
            "values": tuple(v for _, v in pairs),
        }
        return MatchResult(self.form_id, binding, prog)

    def variant_count(self) -> int:
        n = len(NON_N_PARAMS)
        orderings = {1: n, 2: n * (n - 1), 3: n * (n - 1) * (n - 2)}
        return 2 * sum(orderings[k] * 2**k for k in self.clause_counts)


class _Form9:
    form_id = 9
    template = "{opener} {param} by {delta}, will {variable} increase?"
    slots = {
        "param": "parameter name",
        "delta": "number",
        "variable": "M_n | S_north | T_low",
    }
    synonyms = {
        "opener": ("If I increase", "By increasing"),
        "mention": ("symbol", "noun phrase"),
        "varphrase": ("per-variable phrasings",),
    }
    clause_counts = (1,)
    _openers = ("If I increase", "By increasing")
    _rx = re.compile(
        rf"^(If I increase|By increasing) {_MENTION} by {_NUM}, "
        rf"will {_VARPHRASE} increase\?$",
        re.IGNORECASE,
    )

    def build(self, binding: dict, syn: dict):
        param = _check_param(_slot(binding, "param"))
        d_lit = _value_literal(_slot(binding, "delta"))
        variable = _slot(binding, "variable")
        if variable not in VARIABLE_PHRASES:
            raise InvalidBinding(f"variable {variable!r} not reachable from this form")
        opener = self._openers[_syn_index(syn, "opener", 2)]
        mention = PARAM_PHRASES[param][_syn_index(syn, "mention", 2)]
        phrases = VARIABLE_PHRASES[variable]
        var_phrase = phrases[_syn_index(syn, "varphrase", len(phrases))]
        prog = _checked(
            program("IncreaseOf", [Clause("IncreaseBy", param, float(d_lit))], variable)
        )
        question = f"{opener} {mention} by {d_lit}, will {var_phrase} increase?"
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        _, p_raw, d_lit, var_raw = m.groups()
        param = _PHRASE_TO_PARAM[p_raw.lower()]
        variable = _PHRASE_TO_VARIABLE[var_raw.lower()]
        prog = _admissible(
            program("IncreaseOf", [Clause("IncreaseBy", param, float(d_lit))], variable)
        )
        if prog is None:
            return None
        binding = {"param": param, "delta": d_lit, "variable": variable}
        return MatchResult(self.form_id, binding, prog)

    def variant_count(self) -> int:
        var_phrases = sum(len(v) for v in VARIABLE_PHRASES.values())
        return 2 * len(NON_N_PARAMS) * 2 * var_phrases


class _Form10:
    form_id = 10
    template = "If {param} is {value}, ..., does the AMOC collapse?"
    slots = {"params": "1 or 3 distinct parameter names", "values": "matching numbers"}
    synonyms: dict = {}
    clause_counts = (1, 3)
    _rx = re.compile(
        rf"^If {_SYM} is {_NUM}(?:, {_SYM} is {_NUM}, and {_SYM} is {_NUM})?"
        rf", does the AMOC collapse\?$",
        re.IGNORECASE,
    )

    def build(self, binding: dict, syn: dict):
        params = tuple(_slot(binding, "params"))
        values = tuple(_slot(binding, "values"))
        if len(params) not in self.clause_counts or len(values) != len(params):
            raise InvalidBinding("params and values must align with 1 or 3 clauses")
        parts = []
        clauses = []
        for param, value in zip(params, values):
            _check_param(param)
            v_lit = _value_literal(value)
            parts.append(f"{param} is {v_lit}")
            clauses.append(Clause("SetTo", param, float(v_lit)))
        prog = _checked(program("ChangeSign", clauses, "M_n"))
        question = f"If {_join_mentions(parts)}, does the AMOC collapse?"
        return question, prog

    def match(self, text: str):
        m = self._rx.match(text)
        if not m:
            return None
        g = m.groups()
        pairs = [
            (_PHRASE_TO_PARAM[g[i].lower()], g[i + 1])
            for i in (0, 2, 4)
            if g[i] is not None
        ]
        prog = _admissible(
            program(
                "ChangeSign",
                [Clause("SetTo", p, float(v)) for p, v in pairs],
                "M_n",
            )
        )
        if prog is None:
            return None
        binding = {
            "params": tuple(p for p, _ in pairs),
            "values": tuple(v for _, v in pairs),
        }
        return MatchResult(self.form_id, binding, prog)

    def variant_count(self) -> int:
        n = len(NON_N_PARAMS)
        return n + n * (n - 1) * (n - 2)


FORMS = (
    _Form1(),
    _Form2(),
    _Form3(),
    _Form4(),
    _Form5(),
    _Form6(),
    _Form7(),
    _Form8(),
    _Form9(),
    _Form10(),
)
FORMS_BY_ID = {form.form_id: form for form in FORMS}


def instantiate(form_id: int, binding: dict, synonym_choice: dict | None = None):
    """Render (question, program) for a form from slot bindings.

    Numeric slot values may be numbers (rendered canonically) or literal
    strings (used verbatim in the question and parsed for the program).
    """
    form = FORMS_BY_ID.get(form_id)
    if form is None:
        raise UnknownForm(f"no form with id {form_id!r}")
    return form.build(binding, synonym_choice or {})


def match_question(question: str) -> MatchResult:
    """Map a question to (form_id, binding, program), lowest form id first."""
    text = question.strip()
    for form in FORMS:
        result = form.match(text)
        if result is not None:
            return result
    raise NoMatch(question)


def form_for_program(p: Program) -> int:
    """The form id ``canonical_question`` phrases a program with."""
    clauses = p.run.clauses
    k = len(clauses)
    kinds = {c.kind for c in clauses}
    params = [c.param for c in clauses]
    distinct = len(set(params)) == k
    non_n = all(param in NON_N_PARAMS for param in params)

    if p.query == "FinalValue" and p.variable == "M_n" and kinds == {"SetTo"}:
        if k == 2 and params[0] == "N" and params[1] in NON_N_PARAMS:
            return 1
        if k == 1 and non_n:
            return 3
    if p.query == "ChangeSign" and p.variable == "M_n" and kinds == {"SetTo"}:
        if non_n and distinct:
            if k == 1:
                return 4
            if k == 2:
                return 2
            if k == 3:
                return 10
    if p.query == "IncreaseOf":
        if kinds == {"IncreaseBy"} and k == 1 and non_n:
            by_variable = {"M_n": 6, "S_north": 7, "T_low": 9}
            if p.variable in by_variable:
                return by_variable[p.variable]
        if kinds == {"SetTo"} and p.variable == "M_n" and non_n and distinct and 1 <= k <= 3:
            return 5 if k == 3 else 8
    raise NotExpressible(print_program(p))


def canonical_question(p: Program) -> str:
    """Phrase a program with its form's first synonym choice everywhere."""
    form_id = form_for_program(p)
    clauses = p.run.clauses
    values = [render_number(c.value) for c in clauses]
    if form_id == 1:
        binding = {1: values[0], 2: clauses[1].param, 3: values[1]}
    elif form_id in (3, 4):
        binding = {1: clauses[0].param, 2: values[0]}
    elif form_id == 2:
        binding = {1: clauses[0].param, 2: values[0], 3: clauses[1].param, 4: values[1]}
    elif form_id == 5:
        binding = {}
        for i, clause in enumerate(clauses):
            binding[2 * i + 1] = clause.param
            binding[2 * i + 2] = values[i]
    elif form_id in (6, 7):
        binding = {1: clauses[0].param, 2: values[0]}
    elif form_id == 9:
        binding = {"param": clauses[0].param, "delta": values[0], "variable": p.variable}
    else:  # forms 8 and 10
        binding = {
            "params": tuple(c.param for c in clauses),
            "values": tuple(values),
        }
    question, rebuilt = instantiate(form_id, binding)
    assert rebuilt == p
    return question


def variant_counts() -> dict[int, int]:
    """Number of distinct question texts per form at fixed slot values."""
    return {form.form_id: form.variant_count() for form in FORMS}


def language_corpus():
    """Yield every (question, program_text) wording the registry produces.

    Slot values are fixed placeholders, so the enumeration covers the full
    word set of the question language (one entry per variant counted by
    ``variant_counts``) without enumerating numbers.
    """
    from itertools import permutations, product

    def emit(form_id, binding, syn=None):
        question, prog = instantiate(form_id, binding, syn)
        return question, print_program(prog)

    for p in NON_N_PARAMS:
        yield emit(1, {1: 100, 2: p, 3: 1})
        yield emit(3, {1: p, 2: 1})
        yield emit(4, {1: p, 2: 1})
        yield emit(6, {1: p, 2: 1})
        yield emit(7, {1: p, 2: 1})
    for p1, p2 in permutations(NON_N_PARAMS, 2):
        yield emit(2, {1: p1, 2: 1, 3: p2, 4: 2})
    for trio in permutations(NON_N_PARAMS, 3):
        binding = {}
        for i, p in enumerate(trio):
            binding[2 * i + 1] = p
            binding[2 * i + 2] = i + 1
        yield emit(5, binding)
    for k in (1, 2, 3):
        for params in permutations(NON_N_PARAMS, k):
            values = tuple(range(1, k + 1))
            for opener in (0, 1):
                for mentions in product((0, 1), repeat=k):
                    yield emit(
                        8,
                        {"params": params, "values": values},
                        {"opener": opener, "mentions": mentions},
                    )
    for p in NON_N_PARAMS:
        for opener in (0, 1):
            for mention in (0, 1):
                for variable, phrases in VARIABLE_PHRASES.items():
                    for varphrase in range(len(phrases)):
                        yield emit(
                            9,
                            {"param": p, "delta": 1, "variable": variable},
                            {"opener": opener, "mention": mention, "varphrase": varphrase},
                        )
    for k in (1, 3):
        for params in permutations(NON_N_PARAMS, k):
            values = tuple(range(1, k + 1))
            yield emit(10, {"params": params, "values": values})


def registry_json() -> dict:
    """Registry description for export: templates, slots, synonyms."""
    return {
        "forms": [
            {
                "form_id": form.form_id,
                "template": form.template,
                "slots": dict(form.slots),
                "synonyms": {k: list(v) for k, v in form.synonyms.items()},
                "clause_counts": list(form.clause_counts),
                "variant_count": form.variant_count(),
            }
            for form in FORMS
        ]
    }
