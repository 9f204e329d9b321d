"""Token codec shared by metrics, the service, and model training.

Questions tokenize into words with trailing punctuation split off; programs
tokenize into their lexemes (identifiers, parentheses, commas). Numeric
literals in either stream are masked to the reserved VALUE token, with the
literal strings carried alongside the id sequence in encounter order and
substituted back verbatim on decode, so the round trip is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .dsl import QUERIES, _Lexer

PAD_ID = 0
BOS_ID = 1
EOS_ID = 2
UNK_ID = 3
VALUE_ID = 4

RESERVED_TOKENS = ("<pad>", "<bos>", "<eos>", "<unk>", "VALUE")

# token ids below this are reserved
_N_RESERVED = len(RESERVED_TOKENS)

_NUMERAL = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?\Z")
_TRAILING_PUNCT = "?,."
_PROGRAM_HEAD = re.compile(r"\s*(" + "|".join(QUERIES) + r")\s*\(")


class VocabError(Exception):
    """Malformed vocabulary data."""


@dataclass(frozen=True)
class TokenSequence:
    """Encoded text: BOS ... EOS ids plus masked numeric literals in order."""

    ids: tuple[int, ...]
    values: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"ids": list(self.ids), "values": list(self.values)}

    @staticmethod
    def from_dict(data: dict) -> "TokenSequence":
        return TokenSequence(
            ids=tuple(int(i) for i in data["ids"]),
            values=tuple(str(v) for v in data.get("values", ())),
        )


@dataclass(frozen=True)
class Vocab:
    """Immutable token table; line index in the saved file equals the id."""

    tokens: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if tuple(self.tokens[:_N_RESERVED]) != RESERVED_TOKENS:
            raise VocabError(f"first {_N_RESERVED} tokens must be {RESERVED_TOKENS}")
        index = {}
        for i, token in enumerate(self.tokens):
            if token in index:
                raise VocabError(f"duplicate token {token!r}")
            index[token] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def id_of(self, token: str) -> int:
        return self._index.get(token, UNK_ID)

    def token_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.tokens):
            raise VocabError(f"id {token_id} outside vocabulary of {len(self.tokens)}")
        return self.tokens[token_id]

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for token in self.tokens:
                fh.write(token + "\n")

    @staticmethod
    def load(path) -> "Vocab":
        with open(path, encoding="utf-8") as fh:
            tokens = tuple(line.rstrip("\n") for line in fh)
        return Vocab(tokens)


def is_numeral(token: str) -> bool:
    return bool(_NUMERAL.fullmatch(token))


def looks_like_program(text: str) -> bool:
    """True when the text opens like a program: a query name then '('."""
    return bool(_PROGRAM_HEAD.match(text))


def tokenize_question(text: str) -> list[str]:
    """Split on whitespace, peeling trailing '?', ',' and '.' into tokens."""
    tokens = []
    for word in text.split():
        tail = []
        while word and word[-1] in _TRAILING_PUNCT:
            tail.append(word[-1])
            word = word[:-1]
        if word:
            tokens.append(word)
        tokens.extend(reversed(tail))
    return tokens


def tokenize_program(text: str) -> list[str]:
    """Lex into identifiers, parentheses, commas, and number literals."""
    lexer = _Lexer(text)
    tokens = []
    while True:
        kind, lexeme, _ = lexer.next()
        if kind == "end":
            return tokens
        tokens.append(lexeme)


def tokenize(text: str) -> list[str]:
    if looks_like_program(text):
        return tokenize_program(text)
    return tokenize_question(text)


def build_vocab(corpus) -> Vocab:
    """Collect tokens in first-encounter order; numerals collapse to VALUE."""
    tokens = list(RESERVED_TOKENS)
    seen = set(RESERVED_TOKENS)
    empty = True
    for text in corpus:
        empty = False
        for token in tokenize(text):
            if is_numeral(token):
                continue
            if token not in seen:
                seen.add(token)
                tokens.append(token)
    if empty:
        raise VocabError("empty corpus")
    return Vocab(tuple(tokens))


def encode(text: str, vocab: Vocab) -> TokenSequence:
    """Mask numerals to VALUE, map words to ids, frame with BOS/EOS."""
    ids = [BOS_ID]
    values = []
    for token in tokenize(text):
        if is_numeral(token):
            ids.append(VALUE_ID)
            values.append(token)
        else:
            ids.append(vocab.id_of(token))
    ids.append(EOS_ID)
    return TokenSequence(ids=tuple(ids), values=tuple(values))


def _detokenize_question(tokens: list[str]) -> str:
    out = []
    for token in tokens:
        if out and token not in _TRAILING_PUNCT:
            out.append(" ")
        out.append(token)
    return "".join(out)


def decode(seq: TokenSequence, vocab: Vocab) -> str:
    """Invert encode, restoring masked literals in encounter order."""
    text, _ = decode_verbose(seq, vocab)
    return text


def decode_verbose(seq: TokenSequence, vocab: Vocab) -> tuple[str, tuple[str, ...]]:
    """Like decode but also returns warnings from degenerate sequences.

    Surplus VALUE ids (beyond the stored literals) render as the token
    "VALUE" with a warning; unused literals are dropped with a warning.
    PAD/BOS/EOS framing ids are skipped wherever they appear.
    """
    tokens = []
    warnings = []
    next_value = 0
    for token_id in seq.ids:
        if token_id in (PAD_ID, BOS_ID, EOS_ID):
            continue
        if token_id == VALUE_ID:
            if next_value < len(seq.values):
                tokens.append(seq.values[next_value])
                next_value += 1
            else:
                tokens.append("VALUE")
                warnings.append("surplus VALUE token without a stored literal")
        else:
            tokens.append(vocab.token_of(token_id))
    if next_value < len(seq.values):
        dropped = len(seq.values) - next_value
        warnings.append(f"{dropped} unused value literal(s) dropped")

    if len(tokens) >= 2 and tokens[0] in QUERIES and tokens[1] == "(":
        text = "".join(tokens)
    else:
        text = _detokenize_question(tokens)
    return text, tuple(warnings)
