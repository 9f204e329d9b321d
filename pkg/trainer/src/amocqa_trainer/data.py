"""Dataset loading and batching.

Reads the JSON Lines files written by the dataset toolchain (one object
per line with id, form_id, question, program, and values fields), encodes
both texts against the shared vocabulary, and groups examples into padded
tensor batches for teacher-forced training.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import torch

from .textproto import PAD_ID, TokenSequence, Vocab, encode


@dataclass(frozen=True)
class Example:
    """One dataset row with both texts encoded."""

    id: int
    form_id: int
    question: str
    program: str
    q_seq: TokenSequence
    p_seq: TokenSequence


@dataclass(frozen=True)
class Batch:
    """Padded question/program id matrices with their true lengths.

    Ground truth for the three translation directions is the identity
    (y_QTQ, y_QTP, y_PTQ) = (x_q, x_p, x_q); masks mark real tokens.
    """

    x_q: torch.Tensor  # [B, Tq] long
    x_p: torch.Tensor  # [B, Tp] long
    q_lengths: torch.Tensor  # [B] long, including BOS and EOS
    p_lengths: torch.Tensor  # [B] long

    @property
    def y(self) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        return self.x_q, self.x_p, self.x_q

    @property
    def q_mask(self) -> torch.Tensor:
        return _length_mask(self.q_lengths, self.x_q.shape[1])

    @property
    def p_mask(self) -> torch.Tensor:
        return _length_mask(self.p_lengths, self.x_p.shape[1])

    def __len__(self) -> int:
        return self.x_q.shape[0]


def _length_mask(lengths: torch.Tensor, width: int) -> torch.Tensor:
    return torch.arange(width).unsqueeze(0) < lengths.unsqueeze(1)


def read_examples(path, vocab: Vocab) -> list[Example]:
    """Load a JSON Lines dataset file and encode both text fields."""
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            examples.append(
                Example(
                    id=int(row["id"]),
                    form_id=int(row["form_id"]),
                    question=row["question"],
                    program=row["program"],
                    q_seq=encode(row["question"], vocab, "question"),
                    p_seq=encode(row["program"], vocab, "program"),
                )
            )
    return examples


def pad_ids(sequences: list[tuple[int, ...]]) -> tuple[torch.Tensor, torch.Tensor]:
    """Stack variable-length id tuples into a PAD-filled matrix."""
    lengths = torch.tensor([len(s) for s in sequences], dtype=torch.long)
    width = int(lengths.max())
    out = torch.full((len(sequences), width), PAD_ID, dtype=torch.long)
    for i, seq in enumerate(sequences):
        out[i, : len(seq)] = torch.tensor(seq, dtype=torch.long)
    return out, lengths


def make_batch(examples: list[Example]) -> Batch:
    x_q, q_lengths = pad_ids([ex.q_seq.ids for ex in examples])
    x_p, p_lengths = pad_ids([ex.p_seq.ids for ex in examples])
    return Batch(x_q=x_q, x_p=x_p, q_lengths=q_lengths, p_lengths=p_lengths)


def iter_batches(examples: list[Example], batch_size: int, rng: random.Random):
    """Yield shuffled batches; the final short batch is kept."""
    order = list(range(len(examples)))
    rng.shuffle(order)
    for start in range(0, len(order), batch_size):
        chunk = [examples[i] for i in order[start : start + batch_size]]
        yield make_batch(chunk)


def longest_sequence(examples: list[Example]) -> int:
    """Longest encoded sequence (question or program), BOS/EOS included."""
    return max(
        max(len(ex.q_seq.ids), len(ex.p_seq.ids)) for ex in examples
    )
