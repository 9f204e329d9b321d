"""Text protocol shared with the dataset toolchain, reimplemented from its
file formats.

The trainer talks to the dataset side only through files and HTTP: JSON
Lines datasets, a vocabulary file (one token per line, line index = id),
prediction files, and the adapter endpoint. This module carries the text
conventions those formats imply: question tokens are whitespace words with
trailing punctuation split off, program tokens are lexemes joined without
spaces, and numeric literals are masked to the reserved VALUE token with
their spellings stored alongside in encounter order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

PAD_ID = 0
BOS_ID = 1
EOS_ID = 2
UNK_ID = 3
VALUE_ID = 4

RESERVED_TOKENS = ("<pad>", "<bos>", "<eos>", "<unk>", "VALUE")

_NUMERAL = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?\Z")
_TRAILING_PUNCT = "?,."
# identifier | number | any other single non-space character
_PROGRAM_LEXEME = re.compile(
    r"[A-Za-z_][A-Za-z0-9_]*|\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\S"
)


class VocabError(Exception):
    """Malformed vocabulary file."""


@dataclass(frozen=True)
class TokenSequence:
    """A BOS ... EOS id sequence plus its masked literals in order."""

    ids: tuple[int, ...]
    values: tuple[str, ...] = ()


@dataclass(frozen=True)
class Vocab:
    """Immutable token table loaded from a vocabulary file."""

    tokens: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if tuple(self.tokens[: len(RESERVED_TOKENS)]) != RESERVED_TOKENS:
            raise VocabError(f"vocabulary must start with {RESERVED_TOKENS}")
        index = {}
        for i, token in enumerate(self.tokens):
            if token in index:
                raise VocabError(f"duplicate token {token!r}")
            index[token] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.tokens)

    def id_of(self, token: str) -> int:
        return self._index.get(token, UNK_ID)

    def token_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.tokens):
            raise VocabError(f"id {token_id} outside vocabulary of {len(self.tokens)}")
        return self.tokens[token_id]

    @staticmethod
    def load(path) -> "Vocab":
        with open(path, encoding="utf-8") as fh:
            return Vocab(tuple(line.rstrip("\n") for line in fh))


def is_numeral(token: str) -> bool:
    return bool(_NUMERAL.fullmatch(token))


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
    return _PROGRAM_LEXEME.findall(text)


def tokenize(text: str, kind: str) -> list[str]:
    if kind == "program":
        return tokenize_program(text)
    if kind == "question":
        return tokenize_question(text)
    raise ValueError(f"unknown text kind {kind!r}")


def encode(text: str, vocab: Vocab, kind: str) -> TokenSequence:
    """Mask numerals to VALUE, map tokens to ids, frame with BOS/EOS."""
    ids = [BOS_ID]
    values = []
    for token in tokenize(text, kind):
        if is_numeral(token):
            ids.append(VALUE_ID)
            values.append(token)
        else:
            ids.append(vocab.id_of(token))
    ids.append(EOS_ID)
    return TokenSequence(ids=tuple(ids), values=tuple(values))


def decode(seq: TokenSequence, vocab: Vocab, kind: str) -> str:
    """Invert encode: substitute stored literals for VALUE ids in order.

    Surplus VALUE ids render as the bare token "VALUE"; unused literals are
    dropped; PAD/BOS/EOS framing ids are skipped wherever they appear.
    """
    tokens = []
    next_value = 0
    for token_id in seq.ids:
        if token_id in (PAD_ID, BOS_ID, EOS_ID):
            continue
        if token_id == VALUE_ID and next_value < len(seq.values):
            tokens.append(seq.values[next_value])
            next_value += 1
        else:
            tokens.append(vocab.token_of(token_id))
    return detokenize(tokens, kind)


def detokenize(tokens: list[str], kind: str) -> str:
    if kind == "program":
        return "".join(tokens)
    out = []
    for token in tokens:
        if out and token not in _TRAILING_PUNCT:
            out.append(" ")
        out.append(token)
    return "".join(out)
